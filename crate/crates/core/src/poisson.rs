//! Poisson and binomial primitives, including the entropy `H(Po(λ))` in nats.

use crate::numerics::{log_binomial, log_factorial};
use crate::{Error, Real};

/// Mean of a Poisson law, `λ ∈ (0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonParams<T> {
    lambda: T,
}

impl<T: Real> PoissonParams<T> {
    pub fn new(lambda: T) -> crate::Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::domain(
                "PoissonParams",
                format!("lambda must lie in (0, inf), got {lambda}"),
            ));
        }
        Ok(PoissonParams { lambda })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

/// How an entropy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    /// Truncated series with a rigorous truncation bound.
    Series,
    /// Three-term large-λ expansion; its error is a heuristic estimate.
    Asymptotic,
    /// Direct summation over a finite support.
    Exact,
}

impl EntropyMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EntropyMethod::Series => "series",
            EntropyMethod::Asymptotic => "asymptotic",
            EntropyMethod::Exact => "exact",
        }
    }
}

/// An entropy in nats together with an absolute error figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue<T> {
    pub nats: T,
    pub certified_abs_error: T,
    pub method: EntropyMethod,
}

impl<T: Real> EntropyValue<T> {
    /// True when `certified_abs_error` is an estimate rather than a proven bound.
    pub fn is_heuristic(&self) -> bool {
        self.method == EntropyMethod::Asymptotic
    }

    pub fn bits(&self) -> T {
        self.nats / T::LN_2()
    }
}

/// Routing thresholds for [`poisson_entropy_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonEntropyConfig<T> {
    /// Largest λ the series path accepts.
    pub series_ceiling: T,
    /// λ at or below which the dispatcher uses the series.
    pub switchover: T,
}

impl<T: Real> Default for PoissonEntropyConfig<T> {
    fn default() -> Self {
        PoissonEntropyConfig {
            series_ceiling: T::lit(1e7),
            switchover: T::lit(1000.0),
        }
    }
}

/// `ln Po(λ)(k) = k ln λ - λ - ln k!`.
pub fn poisson_log_pmf<T: Real>(params: PoissonParams<T>, k: u64) -> T {
    let lambda = params.lambda;
    if k == 0 {
        return -lambda;
    }
    T::from_count(k) * lambda.ln() - lambda - log_factorial::<T>(k)
}

/// Upper bound on `P(Z > cutoff)` from a geometric majorant of the pmf ratios.
///
/// Requires `cutoff + 2 > λ`; returns `1` otherwise.
pub fn poisson_tail_bound<T: Real>(params: PoissonParams<T>, cutoff: u64) -> T {
    let lambda = params.lambda;
    let ratio = lambda / T::from_count(cutoff + 2);
    if ratio >= T::one() {
        return T::one();
    }
    let head = poisson_log_pmf(params, cutoff + 1).exp();
    (head / (T::one() - ratio)).min(T::one())
}

/// `P(Z >= start)` summed term by term until the geometric remainder drops below `tol`.
///
/// Returns the partial sum and the bound on what was left out.
pub fn poisson_upper_tail<T: Real>(params: PoissonParams<T>, start: u64, tol: T) -> (T, T) {
    let lambda = params.lambda;
    let mut sum = T::zero();
    let mut k = start;
    loop {
        // Remainder beyond k - 1, i.e. P(Z >= k), is bounded once k + 1 > λ.
        let ratio = lambda / T::from_count(k + 1);
        if ratio < T::one() {
            let head = poisson_log_pmf(params, k).exp();
            let remainder = head / (T::one() - ratio);
            if remainder <= tol {
                return (sum, remainder);
            }
        }
        sum = sum + poisson_log_pmf(params, k).exp();
        k += 1;
    }
}

/// `H(Po(λ)) = λ ln(e/λ) + Σ_{k≥1} Po(λ)(k) ln k!`, truncated with a certified remainder.
///
/// Terms `t_k = Po(λ)(k) ln k!` increase up to `⌊λ⌋` and, for `k ≥ 2`, the ratio
/// `t_{k+1}/t_k = λ/(k+1) · (1 + ln(k+1)/ln k!)` is decreasing. Leading terms far
/// below the mode are replaced by `(count) · t_{k0-1}` and the upper tail by a
/// geometric series; both pieces go into `certified_abs_error`, which covers
/// truncation only (floating-point rounding is not included).
pub fn poisson_entropy_series<T: Real>(
    params: PoissonParams<T>,
    tol: T,
) -> crate::Result<EntropyValue<T>> {
    poisson_entropy_series_with(params, tol, PoissonEntropyConfig::default().series_ceiling)
}

pub fn poisson_entropy_series_with<T: Real>(
    params: PoissonParams<T>,
    tol: T,
    ceiling: T,
) -> crate::Result<EntropyValue<T>> {
    if !(tol > T::zero()) {
        return Err(Error::domain(
            "poisson_entropy_series",
            format!("tolerance must be positive, got {tol}"),
        ));
    }
    let lambda = params.lambda;
    if lambda > ceiling {
        return Err(Error::TooLarge {
            what: "lambda",
            value: lambda.as_f64(),
            cap: ceiling.as_f64(),
            hint: "use the asymptotic expansion for large means",
        });
    }
    let half_tol = tol * T::lit(0.5);
    let log_term = |k: u64| -> T {
        if k < 2 {
            T::neg_infinity()
        } else {
            poisson_log_pmf(params, k) + log_factorial::<T>(k).ln()
        }
    };

    let mut certified = T::zero();
    let mut start = 2u64;
    let skip_to = (lambda - T::lit(20.0) * lambda.sqrt()).floor();
    if skip_to > T::lit(3.0) {
        let k0 = skip_to.to_u64().unwrap_or(2);
        let skipped = T::from_count(k0 - 2) * log_term(k0 - 1).exp();
        if skipped <= half_tol {
            start = k0;
            certified = certified + skipped;
        }
    }

    let mut sum = T::zero();
    let mut k = start;
    loop {
        sum = sum + log_term(k).exp();
        if T::from_count(k) >= lambda {
            let next = k + 1;
            let ln_fact = log_factorial::<T>(k);
            let ratio =
                lambda / T::from_count(next) * (T::one() + T::from_count(next).ln() / ln_fact);
            if ratio < T::one() {
                let tail = log_term(next).exp() / (T::one() - ratio);
                if tail <= half_tol {
                    certified = certified + tail;
                    break;
                }
            }
        }
        k += 1;
    }
    let nats = lambda * (T::one() - lambda.ln()) + sum;
    Ok(EntropyValue {
        nats,
        certified_abs_error: certified,
        method: EntropyMethod::Series,
    })
}

/// `½ ln(2πeλ) - 1/(12λ) - 1/(24λ²)` for `λ ≥ 1`.
///
/// The error figure `1/λ³` is a heuristic label, not a proven remainder.
pub fn poisson_entropy_asymptotic<T: Real>(
    params: PoissonParams<T>,
) -> crate::Result<EntropyValue<T>> {
    let lambda = params.lambda;
    if lambda < T::one() {
        return Err(Error::domain(
            "poisson_entropy_asymptotic",
            format!("expansion needs lambda >= 1, got {lambda}"),
        ));
    }
    let two_pi_e = T::lit(2.0) * T::PI() * T::E();
    let nats = T::lit(0.5) * (two_pi_e * lambda).ln()
        - (T::lit(12.0) * lambda).recip()
        - (T::lit(24.0) * lambda * lambda).recip();
    Ok(EntropyValue {
        nats,
        certified_abs_error: lambda.powi(3).recip(),
        method: EntropyMethod::Asymptotic,
    })
}

/// Series for `λ ≤ 1000`, expansion above.
pub fn poisson_entropy<T: Real>(params: PoissonParams<T>, tol: T) -> crate::Result<EntropyValue<T>> {
    poisson_entropy_with(params, tol, &PoissonEntropyConfig::default())
}

pub fn poisson_entropy_with<T: Real>(
    params: PoissonParams<T>,
    tol: T,
    config: &PoissonEntropyConfig<T>,
) -> crate::Result<EntropyValue<T>> {
    if params.lambda <= config.switchover {
        poisson_entropy_series_with(params, tol, config.series_ceiling)
    } else {
        poisson_entropy_asymptotic(params)
    }
}

/// Entropy of `Binomial(n, p)` by direct summation over `k = 0..=n`.
pub fn binomial_entropy<T: Real>(n: u64, p: T) -> crate::Result<EntropyValue<T>> {
    if n == 0 {
        return Err(Error::domain("binomial_entropy", "n must be at least 1"));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::domain(
            "binomial_entropy",
            format!("p must lie in [0, 1], got {p}"),
        ));
    }
    let certified_abs_error = T::lit(1e-10) * T::from_count(n);
    if p == T::zero() || p == T::one() {
        return Ok(EntropyValue {
            nats: T::zero(),
            certified_abs_error,
            method: EntropyMethod::Exact,
        });
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mut h = T::zero();
    for k in 0..=n {
        let log_mass = log_binomial::<T>(n, k)?
            + T::from_count(k) * ln_p
            + T::from_count(n - k) * ln_q;
        let mass = log_mass.exp();
        if mass > T::zero() {
            h = h - mass * log_mass;
        }
    }
    Ok(EntropyValue {
        nats: h,
        certified_abs_error,
        method: EntropyMethod::Exact,
    })
}

/// `Σ_{k=0}^{cutoff} Po(λ)(k) (λ f(k+1) - k f(k))`.
///
/// Vanishes as `cutoff → ∞` for every bounded `f`; intended for `cutoff ≥ 10λ`.
pub fn chen_stein_residual<T, F>(params: PoissonParams<T>, f: F, cutoff: u64) -> T
where
    T: Real,
    F: Fn(u64) -> T,
{
    let lambda = params.lambda;
    (0..=cutoff)
        .map(|k| {
            let mass = poisson_log_pmf(params, k).exp();
            mass * (lambda * f(k + 1) - T::from_count(k) * f(k))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn po(lambda: f64) -> PoissonParams<f64> {
        PoissonParams::new(lambda).unwrap()
    }

    /// Oracle: plain summation of the displayed series, out to k = 200.
    fn series_oracle(lambda: f64) -> f64 {
        let mut log_fact = 0.0;
        let mut sum = 0.0;
        for k in 1..=200u64 {
            log_fact += (k as f64).ln();
            let log_pmf = k as f64 * lambda.ln() - lambda - log_fact;
            sum += log_pmf.exp() * log_fact;
        }
        lambda * (1.0 - lambda.ln()) + sum
    }

    #[test]
    fn params_reject_non_positive() {
        assert!(PoissonParams::new(0.0).is_err());
        assert!(PoissonParams::new(-1.0).is_err());
        assert!(PoissonParams::new(f64::INFINITY).is_err());
    }

    #[test]
    fn log_pmf_values() {
        assert_eq!(poisson_log_pmf(po(1.0), 0), -1.0);
        assert_relative_eq!(poisson_log_pmf(po(1.0), 1), -1.0, max_relative = 1e-15);
        // Near the mean the pmf is about 1/sqrt(2πλ).
        let at_mean = poisson_log_pmf(po(4060.0), 4060);
        assert_relative_eq!(at_mean, -5.073_428_184_954_08, max_relative = 1e-11);
        assert!((at_mean - (-0.5 * (2.0 * std::f64::consts::PI * 4060.0).ln())).abs() < 1e-4);
    }

    #[test]
    fn normalization_within_certified_tail() {
        for lambda in [0.1, 1.0, 10.0, 100.0] {
            let cutoff = (20.0 * lambda) as u64 + 50;
            let total: f64 = (0..=cutoff).map(|k| poisson_log_pmf(po(lambda), k).exp()).sum();
            let tail = poisson_tail_bound(po(lambda), cutoff);
            assert!(total <= 1.0 + 1e-12, "lambda={lambda}: {total}");
            assert!(total >= 1.0 - tail - 1e-12, "lambda={lambda}: {total} tail {tail}");
        }
    }

    #[test]
    fn series_matches_plain_summation() {
        for lambda in [0.1, 1.0, 10.0, 50.0] {
            let v = poisson_entropy_series(po(lambda), 1e-12).unwrap();
            assert!((v.nats - series_oracle(lambda)).abs() < 1e-11, "lambda={lambda}");
            assert!(v.certified_abs_error <= 1e-12);
        }
        let h1 = poisson_entropy_series(po(1.0), 1e-9).unwrap();
        assert!((h1.nats - 1.304_842_242_256_251_5).abs() < 1e-9);
        let h10 = poisson_entropy_series(po(10.0), 1e-9).unwrap();
        assert!((h10.nats - 2.561_409_935_274_909).abs() < 1e-9);
    }

    #[test]
    fn series_rejects_bad_inputs() {
        assert!(poisson_entropy_series(po(1.0), 0.0).is_err());
        match poisson_entropy_series(po(1e8), 1e-4) {
            Err(Error::TooLarge { .. }) => {}
            other => panic!("expected ceiling error, got {other:?}"),
        }
        assert!(poisson_entropy_series_with(po(1e6), 1e-4, 1e5).is_err());
    }

    #[test]
    fn series_and_expansion_agree_at_4060() {
        let s = poisson_entropy_series(po(4060.0), 1e-6).unwrap();
        let a = poisson_entropy_asymptotic(po(4060.0)).unwrap();
        assert!((s.nats - a.nats).abs() < 1e-4);
        assert!((s.nats - 5.573).abs() < 1e-3);
    }

    #[test]
    fn series_and_expansion_agree_on_grid() {
        for lambda in [50.0, 200.0, 1000.0] {
            let s = poisson_entropy_series(po(lambda), 1e-9).unwrap();
            let a = poisson_entropy_asymptotic(po(lambda)).unwrap();
            let gap = (s.nats - a.nats).abs();
            assert!(gap <= lambda.powi(-3) + 1e-6, "lambda={lambda}: gap {gap}");
        }
    }

    #[test]
    fn expansion_values() {
        let h = poisson_entropy_asymptotic(po(1e6)).unwrap();
        assert!((h.nats - 8.327).abs() < 5e-4);
        assert!(h.is_heuristic());
        assert_eq!(h.certified_abs_error, 1e-18);
        assert!((poisson_entropy_asymptotic(po(1e10)).unwrap().nats - 12.932).abs() < 5e-4);
        assert!((poisson_entropy_asymptotic(po(7.5288e7)).unwrap().nats - 10.487).abs() < 5e-4);
        assert!(poisson_entropy_asymptotic(po(0.5)).is_err());
    }

    #[test]
    fn dispatcher_routes_by_lambda() {
        let small = poisson_entropy(po(1.0), 1e-9).unwrap();
        assert_eq!(small.method, EntropyMethod::Series);
        assert!((small.nats - 1.304_842).abs() < 1e-6);
        let big = poisson_entropy(po(1225.0), 1e-9).unwrap();
        assert_eq!(big.method, EntropyMethod::Asymptotic);
        assert!((big.nats - 4.974).abs() < 1e-3);
        assert!((poisson_entropy(po(142_506.0), 1e-9).unwrap().nats - 7.353).abs() < 1e-3);
        let cfg = PoissonEntropyConfig {
            switchover: 10.0,
            ..Default::default()
        };
        assert_eq!(
            poisson_entropy_with(po(20.0), 1e-9, &cfg).unwrap().method,
            EntropyMethod::Asymptotic
        );
    }

    #[test]
    fn binomial_entropy_values() {
        let h = binomial_entropy(1, 0.5).unwrap();
        assert_relative_eq!(h.nats, 2f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(binomial_entropy(2, 0.5).unwrap().nats, 1.039_720_770_839_918, max_relative = 1e-13);
        assert_relative_eq!(binomial_entropy(20, 0.3).unwrap().nats, 2.132_538_641_661_49, max_relative = 1e-12);
        let near_poisson = binomial_entropy(10_000, 1e-4f64).unwrap();
        assert!((near_poisson.nats - 1.304_842_242_256_251_5).abs() < 2e-4);
        assert_eq!(binomial_entropy(5, 0.0).unwrap().nats, 0.0);
        assert!(binomial_entropy(0, 0.5).is_err());
        assert!(binomial_entropy(3, 1.5).is_err());
    }

    #[test]
    fn chen_stein_residual_examples() {
        assert!(chen_stein_residual(po(1.0), |_| 1.0, 40).abs() <= 1e-12);
        let indicator = |k: u64| if k == 3 { 1.0 } else { 0.0 };
        assert!(chen_stein_residual(po(2.0), indicator, 60).abs() <= 1e-10);
        assert!(chen_stein_residual(po(5.0), |k| k.min(7) as f64, 100).abs() <= 1e-8);
    }

    #[test]
    fn upper_tail_is_bracketed() {
        let (tail, rem) = poisson_upper_tail(po(0.1), 2, 1e-15);
        let exact = 1.0 - (-0.1f64).exp() - 0.1 * (-0.1f64).exp();
        assert!((tail - exact).abs() <= rem + 1e-16);
        let (whole, _) = poisson_upper_tail(po(30.0), 0, 1e-14);
        assert!((whole - 1.0).abs() < 1e-12);
    }
}
