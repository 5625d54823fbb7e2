//! Worked systems: independent summands with arithmetic probabilities and the
//! randomly oriented hypercube.

mod arithmetic;
mod hypercube;
mod montecarlo;
mod reproduce;

pub use arithmetic::{arithmetic_moments, ArithmeticSystemSpec};
pub use hypercube::{hypercube_coefficients, hypercube_symmetry_pair, log_binomial_or_zero, HypercubeSpec};
pub use montecarlo::{hypercube_monte_carlo, HypercubeSimulation, MonteCarloSpec, MAX_SIMULATED_DIMENSION};
pub use reproduce::{
    reproduce_example1, reproduce_table1, Example1Case, QuotedExample1Claims, QuotedTable1Row, Table1Row,
    TABLE1_ROWS,
};
