use iterasym_core::extract::ExtractError;
use iterasym_core::maps::MapError;
use iterasym_core::orbit::OrbitError;
use iterasym_core::templates::TemplateError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(#[from] MapError),
    #[error("{stage} failed: {source}")]
    Extract {
        stage: String,
        #[source]
        source: ExtractError,
    },
    #[error("{0}")]
    Template(#[from] TemplateError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
    #[error("expansions differ")]
    ExpansionsDiffer,
    #[error("{0} table row(s) failed")]
    RowsFailed(usize),
    #[error("output: {0}")]
    Output(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    pub fn extract(stage: impl Into<String>, source: ExtractError) -> Self {
        match source {
            ExtractError::Orbit(OrbitError::Map(e)) => CliError::Spec(e),
            source => CliError::Extract {
                stage: stage.into(),
                source,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) => 2,
            CliError::Extract { source, .. } if exhausted(source) => 4,
            CliError::VerifyFailed(_) | CliError::ExpansionsDiffer => 1,
            _ => 3,
        }
    }
}

fn exhausted(e: &ExtractError) -> bool {
    matches!(
        e,
        ExtractError::PrecisionExhausted { .. }
            | ExtractError::Orbit(OrbitError::PrecisionExhausted(_))
    )
}
