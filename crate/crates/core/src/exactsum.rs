//! Exact law of a sum of independent Bernoulli variables (the Poisson-binomial
//! distribution), its entropy, and its total-variation distance to `Po(λ)`.
//!
//! These routines are the ground truth the bounds in [`crate::entropybound`]
//! are checked against.

use crate::poisson::{poisson_log_pmf, poisson_upper_tail, EntropyMethod, EntropyValue, PoissonParams};
use crate::{Error, Real};

/// Default largest number of summands accepted by [`exact_distribution`].
pub const DEFAULT_EXACT_CAP: usize = 100_000;

/// Independent Bernoulli probabilities `p_1, ..., p_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliSystem<T> {
    probs: Vec<T>,
}

impl<T: Real> BernoulliSystem<T> {
    pub fn new(probs: Vec<T>) -> crate::Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("BernoulliSystem", "needs at least one probability"));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p >= T::zero() && p <= T::one()))
        {
            return Err(Error::domain(
                "BernoulliSystem",
                format!("p[{i}] = {p} is not a probability"),
            ));
        }
        Ok(BernoulliSystem { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn lambda(&self) -> T {
        self.probs.iter().copied().sum()
    }

    pub fn sum_p_squared(&self) -> T {
        self.probs.iter().map(|&p| p * p).sum()
    }

    pub fn max_prob(&self) -> T {
        self.probs.iter().copied().fold(T::zero(), T::max)
    }
}

/// Probability mass function on `{0, ..., n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    mass: Vec<T>,
}

impl<T: Real> Pmf<T> {
    pub fn new(mass: Vec<T>) -> crate::Result<Self> {
        if mass.is_empty() {
            return Err(Error::domain("Pmf", "empty support"));
        }
        if mass.iter().any(|&m| !(m >= T::zero())) {
            return Err(Error::domain("Pmf", "masses must be non-negative"));
        }
        let total: T = mass.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::domain("Pmf", format!("masses sum to {total}, not 1")));
        }
        Ok(Pmf { mass })
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    /// Largest point of the support, `n`.
    pub fn max_value(&self) -> usize {
        self.mass.len() - 1
    }

    pub fn mean(&self) -> T {
        self.mass
            .iter()
            .enumerate()
            .map(|(k, &m)| T::from_count(k as u64) * m)
            .sum()
    }
}

/// `(1-p_1, p_1) * ... * (1-p_n, p_n)` by repeated two-tap convolution, `O(n²)`.
pub fn exact_distribution<T: Real>(system: &BernoulliSystem<T>) -> crate::Result<Pmf<T>> {
    exact_distribution_with_cap(system, DEFAULT_EXACT_CAP)
}

pub fn exact_distribution_with_cap<T: Real>(
    system: &BernoulliSystem<T>,
    cap: usize,
) -> crate::Result<Pmf<T>> {
    let n = system.len();
    if n > cap {
        return Err(Error::TooLarge {
            what: "number of Bernoulli summands",
            value: n as f64,
            cap: cap as f64,
            hint: "use the Chen-Stein entropy bounds instead of the exact oracle",
        });
    }
    let mut mass = Vec::with_capacity(n + 1);
    mass.push(T::one());
    for &p in system.probs() {
        let q = T::one() - p;
        mass.push(T::zero());
        // In place, high to low, so mass[k - 1] is still the previous stage.
        for k in (1..mass.len()).rev() {
            mass[k] = mass[k] * q + mass[k - 1] * p;
        }
        mass[0] = mass[0] * q;
    }
    Ok(Pmf { mass })
}

/// `-Σ m_k ln m_k` with `0 ln 0 = 0`.
pub fn pmf_entropy<T: Real>(pmf: &Pmf<T>) -> EntropyValue<T> {
    let nats = pmf
        .mass
        .iter()
        .filter(|&&m| m > T::zero())
        .map(|&m| -m * m.ln())
        .sum();
    EntropyValue {
        nats,
        certified_abs_error: T::lit(1e-12) * T::from_count(pmf.mass.len() as u64),
        method: EntropyMethod::Exact,
    }
}

/// `½ (Σ_{k≤n} |P(k) - Po(λ)(k)| + Po(λ)({n+1, n+2, ...}))`.
///
/// The Poisson mass beyond the support is summed directly upward from `n + 1`
/// to additive accuracy `tol`, never as `1 - Σ_{k≤n}`.
pub fn tv_to_poisson<T: Real>(pmf: &Pmf<T>, lambda: T, tol: T) -> crate::Result<T> {
    let params = PoissonParams::new(lambda)?;
    let head: T = pmf
        .mass
        .iter()
        .enumerate()
        .map(|(k, &m)| (m - poisson_log_pmf(params, k as u64).exp()).abs())
        .sum();
    let (tail, _) = poisson_upper_tail(params, pmf.mass.len() as u64, tol);
    Ok((T::lit(0.5) * (head + tail)).min(T::one()))
}
