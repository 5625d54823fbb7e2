//! Certified error bounds for approximating the entropy of a sum of Bernoulli
//! random variables by the entropy of a Poisson variable with the same mean.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: log-domain scalars and special functions (`ln Γ`, `ln C(n,k)`,
//!   log-sum-exp, `ln(1 - e^{-x})`).
//! - [`poisson`]: Poisson primitives and the entropy `H(Po(λ))` in nats.
//! - [`exactsum`]: the exact Poisson-binomial oracle (pmf, entropy, total variation).
//! - [`chenstein`]: dependency coefficients `b1, b2, b3` and total-variation bounds.
//! - [`entropybound`]: certified bounds on `|H(Z) - H(W)|`.
//! - [`examples`]: closed-form constructors for the arithmetic-probability and
//!   hypercube systems, a Monte Carlo simulator and the reproduction tables.
//!
//! Every numeric routine is generic over a [`Real`] scalar (`f32` or `f64`). The
//! aliases below fix the scalar to `f64`, which is what the accuracy targets assume.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chenstein;
pub mod entropybound;
mod error;
pub mod examples;
pub mod exactsum;
pub mod numerics;
pub mod poisson;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type LogF64 = numerics::LogScalar<f64>;
pub type LogF32 = numerics::LogScalar<f32>;
pub type PoissonParamsF64 = poisson::PoissonParams<f64>;
pub type EntropyValueF64 = poisson::EntropyValue<f64>;
pub type BernoulliSystemF64 = exactsum::BernoulliSystem<f64>;
pub type PmfF64 = exactsum::Pmf<f64>;
pub type DependencySpecF64 = chenstein::DependencySpec<f64>;
pub type CoefficientsF64 = chenstein::ChenSteinCoefficients<f64>;
pub type IndexSetSizeF64 = chenstein::IndexSetSize<f64>;
pub type TvBoundReportF64 = chenstein::TvBoundReport<f64>;
pub type MomentSummaryF64 = entropybound::MomentSummary<f64>;
pub type EntropyBoundReportF64 = entropybound::EntropyBoundReport<f64>;
