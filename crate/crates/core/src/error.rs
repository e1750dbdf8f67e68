use crate::ptqm::PhaseClass;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("state vector has no nonzero component")]
    ZeroState,
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    /// The requested quantity only exists in the unbroken phase.
    #[error("{what} unavailable in the {phase} phase")]
    Phase {
        phase: PhaseClass,
        what: &'static str,
    },
    #[error("state is not normalized under the active inner product (norm = {norm})")]
    Normalization { norm: f64 },
    #[error("internal consistency check failed: {what} (deviation {deviation:e})")]
    Consistency { what: &'static str, deviation: f64 },
}
