//! Chen-Stein dependency coefficients `b1, b2, b3` and total-variation bounds
//! for the Poisson approximation of a Bernoulli sum.
//!
//! Total variation is half the L1 distance throughout.

use std::collections::BTreeMap;

use crate::exactsum::BernoulliSystem;
use crate::numerics::{log1mexp, LogScalar};
use crate::{Error, Real};

/// Size `m = |I|` of the index set, either as a count or as `log2 m` for index
/// sets too large to enumerate (e.g. the `2^n` hypercube vertices).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexSetSize<T> {
    Count(u64),
    Log2(T),
}

impl<T: Real> IndexSetSize<T> {
    pub fn ln(&self) -> T {
        match *self {
            IndexSetSize::Count(m) => T::from_count(m).ln(),
            IndexSetSize::Log2(l) => l * T::LN_2(),
        }
    }

    /// `ln(m + 2)`; for the log form this is `ln m + ln1p(2/m)`.
    pub fn ln_plus_two(&self) -> T {
        match *self {
            IndexSetSize::Count(m) => T::from_count(m + 2).ln(),
            IndexSetSize::Log2(_) => {
                let ln_m = self.ln();
                let correction = (T::lit(2.0) * (-ln_m).exp()).ln_1p();
                if correction < T::lit(1e-300) {
                    ln_m
                } else {
                    ln_m + correction
                }
            }
        }
    }

    /// `m - 1` as a log-domain scalar.
    pub fn minus_one(&self) -> LogScalar<T> {
        match *self {
            IndexSetSize::Count(m) => LogScalar::from_value(T::from_count(m.saturating_sub(1))),
            IndexSetSize::Log2(_) => LogScalar::from_ln(self.ln()) - LogScalar::one(),
        }
    }

    pub fn value(&self) -> T {
        match *self {
            IndexSetSize::Count(m) => T::from_count(m),
            IndexSetSize::Log2(l) => l.exp2(),
        }
    }
}

/// Per-index `s_α` terms entering `b3`.
#[derive(Debug, Clone, PartialEq)]
pub enum B3Terms<T> {
    /// Structural zero: each `X_α` is independent of the indicators outside `B_α`.
    Zero,
    Explicit(Vec<T>),
}

/// Marginals, neighbourhoods of dependence and pair moments of a dependent
/// Bernoulli family indexed by `0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencySpec<T> {
    /// `p_α = P(X_α = 1) > 0`.
    pub marginals: Vec<T>,
    /// `B_α`, which must contain `α`.
    pub neighborhoods: Vec<Vec<usize>>,
    /// `p_αβ = E[X_α X_β]` for `β ∈ B_α \ {α}`.
    pub pair_expectations: BTreeMap<(usize, usize), T>,
    pub b3: B3Terms<T>,
}

impl<T: Real> DependencySpec<T> {
    pub fn m(&self) -> usize {
        self.marginals.len()
    }

    pub fn validate(&self) -> crate::Result<()> {
        let m = self.m();
        if m == 0 {
            return Err(Error::InvalidSpec("index set is empty".into()));
        }
        if self.neighborhoods.len() != m {
            return Err(Error::InvalidSpec(format!(
                "{} neighborhoods for {m} marginals",
                self.neighborhoods.len()
            )));
        }
        for (alpha, &p) in self.marginals.iter().enumerate() {
            if !(p > T::zero() && p <= T::one()) {
                return Err(Error::InvalidSpec(format!(
                    "marginal p[{alpha}] = {p} must lie in (0, 1]"
                )));
            }
        }
        for (alpha, hood) in self.neighborhoods.iter().enumerate() {
            if !hood.contains(&alpha) {
                return Err(Error::InvalidSpec(format!(
                    "neighborhood of {alpha} does not contain {alpha}"
                )));
            }
            if let Some(&beta) = hood.iter().find(|&&b| b >= m) {
                return Err(Error::InvalidSpec(format!(
                    "neighborhood of {alpha} names index {beta} outside 0..{m}"
                )));
            }
            for &beta in hood.iter().filter(|&&b| b != alpha) {
                let Some(&p_ab) = self.pair_expectations.get(&(alpha, beta)) else {
                    return Err(Error::InvalidSpec(format!(
                        "missing pair expectation for ({alpha}, {beta})"
                    )));
                };
                let cap = self.marginals[alpha].min(self.marginals[beta]);
                if !(p_ab >= T::zero() && p_ab <= cap) {
                    return Err(Error::InvalidSpec(format!(
                        "pair expectation ({alpha}, {beta}) = {p_ab} outside [0, {cap}]"
                    )));
                }
            }
        }
        if let B3Terms::Explicit(terms) = &self.b3 {
            if terms.len() != m {
                return Err(Error::InvalidSpec(format!(
                    "{} b3 terms for {m} indices",
                    terms.len()
                )));
            }
            if terms.iter().any(|&s| !(s >= T::zero()) || !s.is_finite()) {
                return Err(Error::InvalidSpec("b3 terms must be finite and non-negative".into()));
            }
        }
        Ok(())
    }
}

/// `(b1, b2, b3, λ, m)` for a Bernoulli family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChenSteinCoefficients<T> {
    pub b1: LogScalar<T>,
    pub b2: LogScalar<T>,
    pub b3: LogScalar<T>,
    pub lambda: LogScalar<T>,
    pub m: IndexSetSize<T>,
}

impl<T: Real> ChenSteinCoefficients<T> {
    /// Builds coefficients from plain values, rejecting negative entries.
    pub fn new(b1: T, b2: T, b3: T, lambda: T, m: IndexSetSize<T>) -> crate::Result<Self> {
        for (name, v) in [("b1", b1), ("b2", b2), ("b3", b3)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::domain(
                    "ChenSteinCoefficients",
                    format!("{name} must be finite and non-negative, got {v}"),
                ));
            }
        }
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::domain(
                "ChenSteinCoefficients",
                format!("lambda must lie in (0, inf), got {lambda}"),
            ));
        }
        Ok(ChenSteinCoefficients {
            b1: b1.into(),
            b2: b2.into(),
            b3: b3.into(),
            lambda: lambda.into(),
            m,
        })
    }
}

/// `b1 = Σ_α Σ_{β∈B_α} p_α p_β`, `b2 = Σ_α Σ_{β∈B_α, β≠α} p_αβ`, `b3 = Σ_α s_α`.
pub fn coefficients_from_spec<T: Real>(
    spec: &DependencySpec<T>,
) -> crate::Result<ChenSteinCoefficients<T>> {
    spec.validate()?;
    let p = |i: usize| LogScalar::from_value(spec.marginals[i]);
    let mut b1 = LogScalar::zero();
    let mut b2 = LogScalar::zero();
    for (alpha, hood) in spec.neighborhoods.iter().enumerate() {
        for &beta in hood {
            b1 = b1 + p(alpha) * p(beta);
            if beta != alpha {
                b2 = b2 + LogScalar::from_value(spec.pair_expectations[&(alpha, beta)]);
            }
        }
    }
    let b3 = match &spec.b3 {
        B3Terms::Zero => LogScalar::zero(),
        B3Terms::Explicit(terms) => terms.iter().map(|&s| LogScalar::from_value(s)).sum(),
    };
    let lambda = (0..spec.m()).map(p).sum();
    Ok(ChenSteinCoefficients {
        b1,
        b2,
        b3,
        lambda,
        m: IndexSetSize::Count(spec.m() as u64),
    })
}

/// Independent case, `B_α = {α}`: `b1 = Σ p_i²`, `b2 = b3 = 0`.
pub fn coefficients_independent<T: Real>(
    system: &BernoulliSystem<T>,
) -> crate::Result<ChenSteinCoefficients<T>> {
    let lambda = system.lambda();
    if !(lambda > T::zero()) {
        return Err(Error::domain(
            "coefficients_independent",
            "the probabilities sum to zero",
        ));
    }
    Ok(ChenSteinCoefficients {
        b1: system
            .probs()
            .iter()
            .map(|&p| LogScalar::from_value(p * p))
            .sum(),
        b2: LogScalar::zero(),
        b3: LogScalar::zero(),
        lambda: LogScalar::from_value(lambda),
        m: IndexSetSize::Count(system.len() as u64),
    })
}

/// `(1 - e^{-λ}) / λ` in the log domain.
pub(crate) fn poisson_smoothing_factor<T: Real>(lambda: LogScalar<T>) -> LogScalar<T> {
    let value = lambda.value();
    let ln_one_minus = if value.is_infinite() {
        T::zero()
    } else {
        log1mexp(value).expect("lambda is positive")
    };
    LogScalar::from_ln(ln_one_minus - lambda.logmag())
}

/// `((1 - e^{-λ}) / λ) Σ p_i²`.
pub fn tv_upper_barbour_hall<T: Real>(lambda: T, sum_p_squared: T) -> T {
    let factor = poisson_smoothing_factor(LogScalar::from_value(lambda));
    (factor * LogScalar::from_value(sum_p_squared)).value()
}

/// `(1/32) (1 ∧ 1/λ) Σ p_i²`.
pub fn tv_lower_barbour_hall<T: Real>(lambda: T, sum_p_squared: T) -> T {
    T::one().min(lambda.recip()) * sum_p_squared / T::lit(32.0)
}

/// `Σ p_i²`.
pub fn tv_upper_lecam<T: Real>(sum_p_squared: T) -> T {
    sum_p_squared
}

/// `(b1 + b2) (1 - e^{-λ})/λ + b3 (1 ∧ 1.4/√λ)`, unclamped.
pub fn tv_upper_agg<T: Real>(coeffs: &ChenSteinCoefficients<T>) -> LogScalar<T> {
    let smoothing = poisson_smoothing_factor(coeffs.lambda);
    let sqrt_lambda = coeffs.lambda.sqrt().expect("lambda is non-negative");
    let far = (LogScalar::from_value(T::lit(1.4)) / sqrt_lambda).min(LogScalar::one());
    (coeffs.b1 + coeffs.b2) * smoothing + coeffs.b3 * far
}

/// Total-variation bounds for one system.
///
/// The Barbour-Hall and Le Cam entries need `Σ p_i²` of an independent family
/// and are absent for dependent inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TvBoundReport<T> {
    pub lecam_upper: Option<T>,
    pub bh_upper: Option<T>,
    pub bh_lower: Option<T>,
    pub agg_upper: Option<LogScalar<T>>,
    pub method_notes: Vec<String>,
}

impl<T: Real> TvBoundReport<T> {
    pub fn independent(lambda: T, sum_p_squared: T) -> crate::Result<Self> {
        if !(lambda > T::zero()) || !(sum_p_squared >= T::zero()) {
            return Err(Error::domain(
                "TvBoundReport",
                format!("need lambda > 0 and sum p^2 >= 0, got {lambda} and {sum_p_squared}"),
            ));
        }
        let coeffs = ChenSteinCoefficients {
            b1: LogScalar::from_value(sum_p_squared),
            b2: LogScalar::zero(),
            b3: LogScalar::zero(),
            lambda: LogScalar::from_value(lambda),
            m: IndexSetSize::Count(0),
        };
        let mut report = TvBoundReport {
            lecam_upper: Some(tv_upper_lecam(sum_p_squared)),
            bh_upper: Some(tv_upper_barbour_hall(lambda, sum_p_squared)),
            bh_lower: Some(tv_lower_barbour_hall(lambda, sum_p_squared)),
            agg_upper: Some(tv_upper_agg(&coeffs)),
            method_notes: vec!["independent summands: B_a = {a}, b2 = b3 = 0".into()],
        };
        report.annotate_vacuous();
        Ok(report)
    }

    pub fn dependent(coeffs: &ChenSteinCoefficients<T>) -> Self {
        let mut report = TvBoundReport {
            lecam_upper: None,
            bh_upper: None,
            bh_lower: None,
            agg_upper: Some(tv_upper_agg(coeffs)),
            method_notes: vec![
                "dependent summands: only the neighborhood (b1, b2, b3) bound applies".into(),
            ],
        };
        report.annotate_vacuous();
        report
    }

    fn annotate_vacuous(&mut self) {
        let one = T::one();
        if self.lecam_upper.is_some_and(|v| v > one) {
            self.method_notes.push("Le Cam bound exceeds 1 (vacuous)".into());
        }
        if self.bh_upper.is_some_and(|v| v > one) {
            self.method_notes.push("Barbour-Hall upper bound exceeds 1 (vacuous)".into());
        }
        if let Some(agg) = self.agg_upper {
            if agg > LogScalar::one() {
                self.method_notes.push(format!(
                    "neighborhood bound {} exceeds 1 (vacuous); reported unclamped",
                    agg
                ));
            }
        }
    }
}
