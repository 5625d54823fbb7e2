//! Extreme-range arithmetic and the special functions every bound is built on.
//!
//! Quantities such as `2^-100` or `C(100, 70)` leave the range where products of
//! plain floats are safe, so bound pipelines work on [`LogScalar`] values and
//! only convert to plain reals for display.

mod logscalar;
mod special;

pub use logscalar::{LogScalar, Sign};
pub use special::{
    exact_binomial, log1mexp, log_binomial, log_factorial, log_gamma, log_sum_exp,
    EXACT_BINOMIAL_MAX_N,
};
