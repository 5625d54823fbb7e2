use thiserror::Error;

use crate::entropybound::ConditionCheck;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A hypothesis of a bound does not hold for the given input.
    #[error("condition violated: {0}")]
    ConditionViolated(ConditionCheck),

    /// None of the candidate bounds has its hypotheses satisfied.
    #[error("no applicable bound; failed conditions: {}", format_checks(.failed))]
    NoApplicableBound { failed: Vec<ConditionCheck> },

    /// A dependency specification is malformed.
    #[error("invalid dependency specification: {0}")]
    InvalidSpec(String),

    #[error("{what} = {value} exceeds the cap of {cap}; {hint}")]
    TooLarge {
        what: &'static str,
        value: f64,
        cap: f64,
        hint: &'static str,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

fn format_checks(checks: &[ConditionCheck]) -> String {
    checks
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
