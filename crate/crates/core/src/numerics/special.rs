use crate::{Error, Real};

/// Largest `n` for which [`log_binomial`] takes the exact integer route.
pub const EXACT_BINOMIAL_MAX_N: u64 = 64;

// Below this argument ln Γ is evaluated by shifting upward with the recurrence.
const STIRLING_MIN: f64 = 15.0;

// B_{2j} / (2j (2j - 1)) for j = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Integers up to 30 go through the exact factorial product; arguments of at
/// least 15 use the Stirling series through the `x^-15` term; everything else
/// is shifted into that range with `Γ(x + 1) = x Γ(x)`.
pub fn log_gamma<T: Real>(x: T) -> crate::Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("log_gamma", format!("requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(x);
    }
    if x.fract() == T::zero() && x <= T::lit(30.0) {
        let n = x.to_u64().unwrap_or(1);
        return Ok(ln_small_factorial(n - 1));
    }
    if x >= T::lit(STIRLING_MIN) {
        return Ok(stirling(x));
    }
    let mut shifted = x;
    let mut product = T::one();
    while shifted < T::lit(STIRLING_MIN) {
        product = product * shifted;
        shifted = shifted + T::one();
    }
    Ok(stirling(shifted) - product.ln())
}

fn ln_small_factorial<T: Real>(n: u64) -> T {
    if n < 2 {
        return T::zero();
    }
    // 30! < 2^108, so the product is exact in u128.
    let product: u128 = (2..=n as u128).product();
    T::from_u128(product).expect("factorial representable").ln()
}

fn stirling<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    let recip = x.recip();
    let recip_sq = recip * recip;
    let mut correction = T::zero();
    let mut power = recip;
    for &c in STIRLING_COEFFS.iter() {
        let term = T::lit(c) * power;
        correction = correction + term;
        if term.abs() < T::epsilon() * correction.abs() {
            break;
        }
        power = power * recip_sq;
    }
    (x - half) * x.ln() - x + half_ln_two_pi + correction
}

/// `ln n!`.
pub fn log_factorial<T: Real>(n: u64) -> T {
    if n <= 30 {
        return ln_small_factorial(n);
    }
    stirling(T::from_count(n) + T::one())
}

/// Exact binomial coefficient for `n <= 64`; `None` when `k > n` or `n` is too large.
pub fn exact_binomial(n: u64, k: u64) -> Option<u128> {
    if k > n || n > EXACT_BINOMIAL_MAX_N {
        return None;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // C(n, i + 1) = C(n, i) (n - i) / (i + 1); the division is exact.
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    Some(c)
}

/// `ln C(n, k)` for `0 <= k <= n`.
///
/// For `n <= 64` the coefficient is formed exactly in integer arithmetic; larger
/// `n` go through `ln Γ`.
pub fn log_binomial<T: Real>(n: u64, k: u64) -> crate::Result<T> {
    if k > n {
        return Err(Error::domain(
            "log_binomial",
            format!("requires k <= n, got n = {n}, k = {k}"),
        ));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(T::zero());
    }
    if let Some(c) = exact_binomial(n, k) {
        return Ok(T::from_u128(c).expect("binomial representable").ln());
    }
    let n_t = T::from_count(n);
    let k_t = T::from_count(k);
    let one = T::one();
    Ok(log_gamma(n_t + one)? - log_gamma(k_t + one)? - log_gamma(n_t - k_t + one)?)
}

/// `ln Σ exp(x_i)`, evaluated relative to the largest term.
///
/// The empty sum is zero, so an empty slice yields negative infinity.
pub fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let Some((imax, &max)) = xs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
    else {
        return T::neg_infinity();
    };
    if max.is_infinite() || max.is_nan() {
        return max;
    }
    let rest: T = xs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != imax)
        .map(|(_, &x)| (x - max).exp())
        .sum();
    max + rest.ln_1p()
}

/// `ln(1 - e^{-x})` for `x > 0`.
///
/// Uses `ln(-expm1(-x))` below `ln 2` and `ln1p(-e^{-x})` above it.
pub fn log1mexp<T: Real>(x: T) -> crate::Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("log1mexp", format!("requires x > 0, got {x}")));
    }
    if x <= T::LN_2() {
        Ok((-(-x).exp_m1()).ln())
    } else {
        Ok((-(-x).exp()).ln_1p())
    }
}
