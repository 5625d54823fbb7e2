use crate::chenstein::IndexSetSize;
use crate::entropybound::MomentSummary;
use crate::{Error, Real};

/// Independent summands with `p_i = 2 a i`, `i = 1..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArithmeticSystemSpec<T> {
    pub a: T,
    pub n: u64,
}

impl<T: Real> ArithmeticSystemSpec<T> {
    pub fn new(a: T, n: u64) -> crate::Result<Self> {
        if !(a > T::zero()) || n == 0 {
            return Err(Error::domain(
                "ArithmeticSystemSpec",
                format!("need a > 0 and n >= 1, got a = {a}, n = {n}"),
            ));
        }
        if T::lit(2.0) * a * T::from_count(n) > T::one() {
            return Err(Error::domain(
                "ArithmeticSystemSpec",
                format!("largest probability 2an = {} exceeds 1", T::lit(2.0) * a * T::from_count(n)),
            ));
        }
        Ok(ArithmeticSystemSpec { a, n })
    }

    /// `λ = a n (n + 1)`.
    pub fn lambda(&self) -> T {
        let n = T::from_count(self.n);
        self.a * n * (n + T::one())
    }

    /// `θ = 2a(2n + 1)/3`.
    pub fn theta(&self) -> T {
        let n = T::from_count(self.n);
        T::lit(2.0) * self.a * (T::lit(2.0) * n + T::one()) / T::lit(3.0)
    }
}

/// Closed-form moments; the `n` probabilities are never materialised.
pub fn arithmetic_moments<T: Real>(spec: &ArithmeticSystemSpec<T>) -> MomentSummary<T> {
    let lambda = spec.lambda();
    MomentSummary {
        lambda: lambda.into(),
        sum_p_squared: (spec.theta() * lambda).into(),
        m: IndexSetSize::Count(spec.n),
    }
}
