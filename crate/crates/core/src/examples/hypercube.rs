use crate::chenstein::{ChenSteinCoefficients, IndexSetSize};
use crate::numerics::{log_binomial, LogScalar};
use crate::{Error, Real};

/// Random orientation of the `n 2^{n-1}` edges of `{0,1}^n`; `W` counts the
/// vertices with exactly `k` outward edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HypercubeSpec {
    pub n: u32,
    pub k: u32,
}

impl HypercubeSpec {
    pub fn new(n: u32, k: u32) -> crate::Result<Self> {
        if n == 0 || k > n {
            return Err(Error::domain(
                "HypercubeSpec",
                format!("need n >= 1 and 0 <= k <= n, got n = {n}, k = {k}"),
            ));
        }
        Ok(HypercubeSpec { n, k })
    }

    /// `(n, n - k)`, which has the same law of `W`.
    pub fn mirrored(&self) -> Self {
        HypercubeSpec {
            n: self.n,
            k: self.n - self.k,
        }
    }
}

/// `C(n, k)` as a log scalar, zero outside `0 <= k <= n`.
pub fn log_binomial_or_zero<T: Real>(n: i64, k: i64) -> LogScalar<T> {
    if n < 0 || k < 0 || k > n {
        return LogScalar::zero();
    }
    LogScalar::from_ln(log_binomial(n as u64, k as u64).expect("0 <= k <= n"))
}

/// Closed-form coefficients with `B_α` the vertex and its `n` neighbours:
///
/// - `λ = C(n, k)`
/// - `b1 = 2^{-n} (n + 1) C(n, k)²`
/// - `b2 = n 2^{2-n} C(n-1, k) C(n-1, k-1)`
/// - `b3 = 0`
/// - `m = 2^n`, kept as `log2 m = n`
pub fn hypercube_coefficients<T: Real>(spec: &HypercubeSpec) -> ChenSteinCoefficients<T> {
    let n = spec.n as i64;
    let k = spec.k as i64;
    let lambda = log_binomial_or_zero::<T>(n, k);
    let count = |x: i64| LogScalar::from_value(T::from_i64(x).expect("small integer"));
    let b1 = LogScalar::pow2(-n) * count(n + 1) * lambda.powi(2);
    let b2 = count(n)
        * LogScalar::pow2(2 - n)
        * (log_binomial_or_zero(n - 1, k) * log_binomial_or_zero(n - 1, k - 1));
    ChenSteinCoefficients {
        b1,
        b2,
        b3: LogScalar::zero(),
        lambda,
        m: IndexSetSize::Log2(T::from_i64(n).expect("small integer")),
    }
}

pub fn hypercube_symmetry_pair<T: Real>(
    spec: &HypercubeSpec,
) -> (ChenSteinCoefficients<T>, ChenSteinCoefficients<T>) {
    (
        hypercube_coefficients(spec),
        hypercube_coefficients(&spec.mirrored()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coeffs(n: u32, k: u32) -> ChenSteinCoefficients<f64> {
        hypercube_coefficients(&HypercubeSpec::new(n, k).unwrap())
    }

    #[test]
    fn row_30_27() {
        let c = coeffs(30, 27);
        assert_relative_eq!(c.lambda.value(), 4060.0, max_relative = 1e-13);
        // Oracle: exact integers, one power-of-two scaling.
        let b1 = (31u128 * 4060 * 4060) as f64 / 2f64.powi(30);
        let b2 = (30u128 * 4 * 406 * 3654) as f64 / 2f64.powi(30);
        assert_relative_eq!(c.b1.value(), b1, max_relative = 1e-12);
        assert_relative_eq!(c.b2.value(), b2, max_relative = 1e-12);
        assert!((c.b1.value() - 0.475_898).abs() < 1e-6);
        assert!((c.b2.value() - 0.165_797).abs() < 1e-6);
        assert!(c.b3.is_zero());
        assert_eq!(c.m, IndexSetSize::Log2(30.0));
    }

    #[test]
    fn row_50_44_and_large_n() {
        assert!((coeffs(50, 44).lambda.value() - 1.589e7).abs() < 0.001e7);
        assert_relative_eq!(coeffs(100, 70).lambda.value(), 2.937e25, max_relative = 1e-3);
    }

    #[test]
    fn degenerate_k() {
        let c = coeffs(12, 0);
        assert_eq!(c.lambda.value(), 1.0);
        assert!(c.b2.is_zero());
        assert_relative_eq!(c.b1.value(), 13.0 / 4096.0, max_relative = 1e-14);
        assert!(coeffs(12, 12).b2.is_zero());
        assert!(HypercubeSpec::new(3, 4).is_err());
        assert!(HypercubeSpec::new(0, 0).is_err());
    }

    #[test]
    fn symmetry_is_exact() {
        for (n, k) in [(30, 27), (50, 48), (100, 70), (7, 2)] {
            let (a, b) = hypercube_symmetry_pair::<f64>(&HypercubeSpec::new(n, k).unwrap());
            assert_eq!(a.lambda.value(), b.lambda.value(), "({n},{k})");
            assert_eq!(a.b1.value(), b.b1.value());
            assert_eq!(a.b2.value(), b.b2.value());
            assert_eq!(a.b3, b.b3);
        }
    }
}
