//! Certified bounds on `|H(Z) - H(W)|`, where `W` is a sum of Bernoulli
//! variables and `Z ~ Po(λ)` has the same mean.
//!
//! Three bounds are provided:
//!
//! - [`entropy_bound_theorem4`]: general (possibly dependent) summands, driven
//!   by the Chen-Stein coefficients `(b1, b2, b3)`. Two-sided.
//! - [`entropy_bound_corollary`]: independent summands, driven by `λ` and
//!   `Σ p²`. One-sided: `0 ≤ H(Z) - H(W) ≤ ε`.
//! - [`entropy_bound_proposition`]: independent summands with the sharper
//!   coefficient [`g_of_p`]. One-sided.
//!
//! Each bound has explicit hypotheses. A violated hypothesis is reported as
//! [`Error::ConditionViolated`]; nothing is clamped into range.
//!
//! Entropies are in nats. Quantities such as `b(λ)` underflow any float for
//! realistic index sets, so all bound arithmetic is carried in [`LogScalar`].

use std::fmt;

use crate::chenstein::{poisson_smoothing_factor, tv_upper_agg, ChenSteinCoefficients, IndexSetSize};
use crate::exactsum::BernoulliSystem;
use crate::numerics::{log1mexp, LogScalar};
use crate::poisson::{poisson_entropy, EntropyValue, PoissonParams};
use crate::{Error, Real};

/// One hypothesis of a bound, with the value it was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: String,
    pub required: String,
    pub actual: f64,
    pub satisfied: bool,
}

impl fmt::Display for ConditionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (required {}, actual {:.6e})",
            self.name, self.required, self.actual
        )
    }
}

/// `λ`, `Σ p²` and `m` for an independent family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary<T> {
    pub lambda: LogScalar<T>,
    pub sum_p_squared: LogScalar<T>,
    pub m: IndexSetSize<T>,
}

impl<T: Real> MomentSummary<T> {
    pub fn new(lambda: T, sum_p_squared: T, m: IndexSetSize<T>) -> crate::Result<Self> {
        Self::from_log(lambda.into(), sum_p_squared.into(), m)
    }

    pub fn from_log(
        lambda: LogScalar<T>,
        sum_p_squared: LogScalar<T>,
        m: IndexSetSize<T>,
    ) -> crate::Result<Self> {
        if lambda <= LogScalar::zero() || !lambda.logmag().is_finite() {
            return Err(Error::domain("MomentSummary", format!("lambda must be positive, got {lambda}")));
        }
        if sum_p_squared < LogScalar::zero() {
            return Err(Error::domain("MomentSummary", "sum of p^2 must be non-negative"));
        }
        let summary = MomentSummary {
            lambda,
            sum_p_squared,
            m,
        };
        // Σ p² ≤ Σ p for probabilities, so θ ≤ 1 (up to rounding of the inputs).
        if summary.theta() > T::one() + T::lit(1e-12) {
            return Err(Error::domain(
                "MomentSummary",
                format!("theta = sum p^2 / lambda = {} exceeds 1", summary.theta()),
            ));
        }
        Ok(summary)
    }

    pub fn from_system(system: &BernoulliSystem<T>) -> crate::Result<Self> {
        Self::new(
            system.lambda(),
            system.sum_p_squared(),
            IndexSetSize::Count(system.len() as u64),
        )
    }

    /// `θ = Σ p² / λ`, between 0 and `max p`.
    pub fn theta(&self) -> T {
        (self.sum_p_squared / self.lambda).value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    Theorem4,
    Corollary1,
    Proposition1,
}

impl TheoremId {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Theorem4 => "theorem4",
            TheoremId::Corollary1 => "corollary1",
            TheoremId::Proposition1 => "proposition1",
        }
    }
}

/// Which bound the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRule {
    Theorem4,
    Corollary,
    Proposition,
    BestIndependent,
}

/// How `relative_error` relates to `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativeErrorConvention {
    /// Two-sided interval centred on `H(Z)`: `ε / H(Z)`.
    OverPoissonEntropy,
    /// One-sided interval `[H(Z) - ε, H(Z)]`: `(ε/2) / (H(Z) - ε/2)`.
    HalfWidthOverMidpoint,
}

impl RelativeErrorConvention {
    pub fn name(&self) -> &'static str {
        match self {
            RelativeErrorConvention::OverPoissonEntropy => "epsilon/H(Z)",
            RelativeErrorConvention::HalfWidthOverMidpoint => "(epsilon/2)/midpoint",
        }
    }
}

/// A certified interval for `H(W)` and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBoundReport<T> {
    pub theorem_id: TheoremId,
    pub rule: BoundRule,
    pub h_poisson: EntropyValue<T>,
    /// `a(λ)`, the corollary coefficient, or `g`, depending on the theorem.
    pub coefficient: LogScalar<T>,
    /// `coefficient · ln((m + 2) / coefficient)`.
    pub a_term: LogScalar<T>,
    /// `b(λ)`; its log magnitude survives underflow.
    pub b_term: LogScalar<T>,
    pub epsilon: LogScalar<T>,
    /// Lower and upper ends of the certified interval for `H(W)`, in nats.
    pub interval: (T, T),
    pub point_estimate: T,
    pub relative_error: LogScalar<T>,
    pub convention: RelativeErrorConvention,
    pub conditions: Vec<ConditionCheck>,
    pub notes: Vec<String>,
}

/// `a(λ) = 2[(b1 + b2)(1 - e^{-λ})/λ + b3 (1 ∧ 1.4/√λ)]`.
pub fn a_of_lambda<T: Real>(coeffs: &ChenSteinCoefficients<T>) -> LogScalar<T> {
    LogScalar::from_value(T::lit(2.0)) * tv_upper_agg(coeffs)
}

/// `b(λ) = [(λ ln(e/λ))_+ + λ² + (6 ln 2π + 1)/12] · exp{-[λ + (m-1) ln((m-1)/(λe))]}`.
///
/// Evaluated as a log: the exponent reaches `-10^30` for hypercube index sets.
pub fn b_of_lambda<T: Real>(lambda: LogScalar<T>, m: IndexSetSize<T>) -> LogScalar<T> {
    let lam = lambda.value();
    let ln_lambda = lambda.logmag();
    let entropy_part = if lam < T::E() {
        LogScalar::from_value(lam * (T::one() - ln_lambda))
    } else {
        LogScalar::zero()
    };
    let constant = (T::lit(6.0) * (T::lit(2.0) * T::PI()).ln() + T::one()) / T::lit(12.0);
    let bracket = entropy_part + lambda.powi(2) + LogScalar::from_value(constant);

    let m_minus_one = m.minus_one();
    let spread = if m_minus_one.is_zero() {
        T::zero()
    } else {
        let ln_ratio = m_minus_one.logmag() - ln_lambda - T::one();
        (m_minus_one * LogScalar::from_value(ln_ratio)).value()
    };
    let exponent = -(lam + spread);
    LogScalar::from_ln(bracket.logmag() + exponent)
}

/// `g = 2θ · min{1 - e^{-λ}, 3 / (4e (1 - √θ)^{3/2})}`, requires `θ < 1`.
pub fn g_of_p<T: Real>(moments: &MomentSummary<T>) -> crate::Result<T> {
    let theta = moments.theta();
    if !(theta < T::one()) {
        return Err(Error::domain("g_of_p", format!("requires theta < 1, got {theta}")));
    }
    let one_minus_exp = log1mexp(moments.lambda.value())?.exp();
    let shape = T::lit(3.0)
        / (T::lit(4.0) * T::E() * (T::one() - theta.sqrt()).powf(T::lit(1.5)));
    Ok(T::lit(2.0) * theta * one_minus_exp.min(shape))
}

// x · ln((m + 2)/x) with the 0 · ∞ limit taken as 0.
fn coefficient_term<T: Real>(x: LogScalar<T>, ln_m_plus_two: T) -> LogScalar<T> {
    if x.is_zero() {
        return LogScalar::zero();
    }
    let ln_ratio = ln_m_plus_two - x.logmag();
    x * LogScalar::from_value(ln_ratio)
}

fn check(name: &str, required: String, actual: LogScalar<impl Real>, satisfied: bool) -> ConditionCheck {
    ConditionCheck {
        name: name.to_string(),
        required,
        actual: actual.value().as_f64(),
        satisfied,
    }
}

fn half<T: Real>() -> LogScalar<T> {
    LogScalar::from_value(T::lit(0.5))
}

fn quarter<T: Real>() -> LogScalar<T> {
    LogScalar::from_value(T::lit(0.25))
}

fn lambda_within_index_set<T: Real>(lambda: LogScalar<T>, m: IndexSetSize<T>) -> ConditionCheck {
    let m_minus_one = m.minus_one();
    check(
        "lambda <= m - 1",
        match m {
            IndexSetSize::Count(c) => format!("<= {}", c.saturating_sub(1)),
            IndexSetSize::Log2(l) => format!("<= 2^{l} - 1"),
        },
        lambda,
        lambda <= m_minus_one,
    )
}

fn poisson_entropy_of<T: Real>(lambda: LogScalar<T>, tol: T) -> crate::Result<EntropyValue<T>> {
    poisson_entropy(PoissonParams::new(lambda.value())?, tol)
}

fn first_failure(checks: &[ConditionCheck]) -> Option<Error> {
    checks
        .iter()
        .find(|c| !c.satisfied)
        .map(|c| Error::ConditionViolated(c.clone()))
}

/// An evaluated bound: its hypotheses and, when they all hold, the report.
struct Assessment<T> {
    checks: Vec<ConditionCheck>,
    report: crate::Result<EntropyBoundReport<T>>,
}

#[allow(clippy::too_many_arguments)]
fn finish_report<T: Real>(
    theorem_id: TheoremId,
    rule: BoundRule,
    h_poisson: EntropyValue<T>,
    coefficient: LogScalar<T>,
    ln_m_plus_two: T,
    b_term: LogScalar<T>,
    conditions: Vec<ConditionCheck>,
    two_sided: bool,
) -> EntropyBoundReport<T> {
    let a_term = coefficient_term(coefficient, ln_m_plus_two);
    let epsilon = a_term + b_term;
    let eps = epsilon.value();
    let h = h_poisson.nats;
    let h_log = LogScalar::from_value(h);
    let (interval, point_estimate, relative_error, convention) = if two_sided {
        (
            (h - eps, h + eps),
            h,
            epsilon / h_log,
            RelativeErrorConvention::OverPoissonEntropy,
        )
    } else {
        let half_width = epsilon * half();
        let midpoint = h_log - half_width;
        let relative = if midpoint > LogScalar::zero() {
            half_width / midpoint
        } else {
            LogScalar::from_ln(T::infinity())
        };
        (
            (h - eps, h),
            midpoint.value(),
            relative,
            RelativeErrorConvention::HalfWidthOverMidpoint,
        )
    };
    let mut notes = Vec::new();
    if h_poisson.is_heuristic() {
        notes.push(format!(
            "H(Z) from the large-lambda expansion; its error estimate {:e} nats is heuristic",
            h_poisson.certified_abs_error
        ));
    }
    if b_term.value() == T::zero() && !b_term.is_zero() {
        notes.push(format!("b(lambda) underflows; ln b(lambda) = {}", b_term.logmag()));
    }
    EntropyBoundReport {
        theorem_id,
        rule,
        h_poisson,
        coefficient,
        a_term,
        b_term,
        epsilon,
        interval,
        point_estimate,
        relative_error,
        convention,
        conditions,
        notes,
    }
}

fn assess_theorem4<T: Real>(coeffs: &ChenSteinCoefficients<T>, tol: T) -> Assessment<T> {
    let a = a_of_lambda(coeffs);
    let checks = vec![
        check("a(lambda) <= 1/2", "<= 0.5".into(), a, a <= half()),
        lambda_within_index_set(coeffs.lambda, coeffs.m),
    ];
    let report = match first_failure(&checks) {
        Some(err) => Err(err),
        None => poisson_entropy_of(coeffs.lambda, tol).map(|h| {
            finish_report(
                TheoremId::Theorem4,
                BoundRule::Theorem4,
                h,
                a,
                coeffs.m.ln_plus_two(),
                b_of_lambda(coeffs.lambda, coeffs.m),
                checks.clone(),
                true,
            )
        }),
    };
    Assessment { checks, report }
}

fn corollary_coefficient<T: Real>(moments: &MomentSummary<T>) -> LogScalar<T> {
    LogScalar::from_value(T::lit(2.0)) * poisson_smoothing_factor(moments.lambda) * moments.sum_p_squared
}

fn corollary_checks<T: Real>(moments: &MomentSummary<T>) -> Vec<ConditionCheck> {
    let tv = corollary_coefficient(moments) * half();
    vec![
        check(
            "((1 - e^-lambda)/lambda) sum p^2 <= 1/4",
            "<= 0.25".into(),
            tv,
            tv <= quarter(),
        ),
        lambda_within_index_set(moments.lambda, moments.m),
    ]
}

fn assess_corollary<T: Real>(moments: &MomentSummary<T>, tol: T) -> Assessment<T> {
    let checks = corollary_checks(moments);
    let report = match first_failure(&checks) {
        Some(err) => Err(err),
        None => poisson_entropy_of(moments.lambda, tol).map(|h| {
            finish_report(
                TheoremId::Corollary1,
                BoundRule::Corollary,
                h,
                corollary_coefficient(moments),
                moments.m.ln_plus_two(),
                b_of_lambda(moments.lambda, moments.m),
                checks.clone(),
                false,
            )
        }),
    };
    Assessment { checks, report }
}

fn assess_proposition<T: Real>(moments: &MomentSummary<T>, tol: T) -> crate::Result<Assessment<T>> {
    let g = LogScalar::from_value(g_of_p(moments)?);
    let mut checks = corollary_checks(moments);
    checks.push(check("g(p) <= 1/2", "<= 0.5".into(), g, g <= half()));
    let report = match first_failure(&checks) {
        Some(err) => Err(err),
        None => poisson_entropy_of(moments.lambda, tol).map(|h| {
            finish_report(
                TheoremId::Proposition1,
                BoundRule::Proposition,
                h,
                g,
                moments.m.ln_plus_two(),
                b_of_lambda(moments.lambda, moments.m),
                checks.clone(),
                false,
            )
        }),
    };
    Ok(Assessment { checks, report })
}

/// `|H(Z) - H(W)| ≤ a(λ) ln((m+2)/a(λ)) + b(λ)`, valid when `a(λ) ≤ ½` and `λ ≤ m - 1`.
pub fn entropy_bound_theorem4<T: Real>(
    coeffs: &ChenSteinCoefficients<T>,
    tol: T,
) -> crate::Result<EntropyBoundReport<T>> {
    assess_theorem4(coeffs, tol).report
}

/// Independent summands: `0 ≤ H(Z) - H(W) ≤ b(λ) + c ln((m+2)/c)` with
/// `c = 2((1-e^{-λ})/λ) Σ p²`, valid when `c/2 ≤ ¼` and `λ ≤ m - 1`.
pub fn entropy_bound_corollary<T: Real>(
    moments: &MomentSummary<T>,
    tol: T,
) -> crate::Result<EntropyBoundReport<T>> {
    assess_corollary(moments, tol).report
}

/// Independent summands: `0 ≤ H(Z) - H(W) ≤ g ln((m+2)/g) + b(λ)`, valid under
/// the corollary's hypotheses and `g ≤ ½`.
pub fn entropy_bound_proposition<T: Real>(
    moments: &MomentSummary<T>,
    tol: T,
) -> crate::Result<EntropyBoundReport<T>> {
    assess_proposition(moments, tol)?.report
}

/// The smaller of the corollary and proposition bounds among those whose
/// hypotheses hold. Ties go to the corollary.
///
/// Since `g ≤ 2θ(1 - e^{-λ})`, which is the corollary coefficient, the
/// proposition never loses; it wins strictly only for small `θ`.
pub fn best_independent_bound<T: Real>(
    moments: &MomentSummary<T>,
    tol: T,
) -> crate::Result<EntropyBoundReport<T>> {
    let corollary = assess_corollary(moments, tol);
    let proposition = assess_proposition(moments, tol).ok();

    let mut failed: Vec<ConditionCheck> = corollary.checks.iter().filter(|c| !c.satisfied).cloned().collect();
    if let Some(p) = &proposition {
        for c in p.checks.iter().filter(|c| !c.satisfied) {
            if !failed.contains(c) {
                failed.push(c.clone());
            }
        }
    }

    let candidates: Vec<EntropyBoundReport<T>> = [Some(corollary.report), proposition.map(|p| p.report)]
        .into_iter()
        .flatten()
        .filter_map(|r| r.ok())
        .collect();
    let mut best: Option<EntropyBoundReport<T>> = None;
    for report in candidates {
        best = match best {
            Some(current) if current.epsilon <= report.epsilon => Some(current),
            _ => Some(report),
        };
    }
    match best {
        Some(mut report) => {
            report.rule = BoundRule::BestIndependent;
            report
                .notes
                .push(format!("selected {} as the tighter applicable bound", report.theorem_id.name()));
            Ok(report)
        }
        None => Err(Error::NoApplicableBound { failed }),
    }
}
