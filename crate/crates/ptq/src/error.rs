use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("phase error: {0}")]
    Phase(ptq_core::Error),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl ExperimentError {
    /// Process exit status: 2 for configuration or phase problems, 3 for
    /// internal-consistency failures. Exit status 1 (invariant violated) is
    /// not an error; it comes from a report with `pass == false`.
    pub fn exit_code(&self) -> u8 {
        match self {
            ExperimentError::Consistency(_) => 3,
            _ => 2,
        }
    }
}

impl From<ptq_core::Error> for ExperimentError {
    fn from(e: ptq_core::Error) -> Self {
        use ptq_core::Error as E;
        match e {
            E::Phase { .. } => ExperimentError::Phase(e),
            E::Consistency { .. } => ExperimentError::Consistency(e.to_string()),
            E::NonFinite(_) | E::ZeroState | E::InvalidParams(_) | E::Normalization { .. } => {
                ExperimentError::Config(e.to_string())
            }
        }
    }
}
