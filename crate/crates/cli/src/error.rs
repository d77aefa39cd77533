use serde::Serialize;
use serde_json::json;

/// Failure of a subcommand, with a stable exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(atom_linewidth::Error),
    Strict(Vec<String>),
    Validation(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Validation(_) => 3,
            CliError::Strict(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Solver(_) => "solver",
            CliError::Strict(_) => "strict",
            CliError::Validation(_) => "validation",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let details: Vec<String> = match self {
            CliError::Strict(v) | CliError::Validation(v) => v.clone(),
            _ => Vec::new(),
        };
        json!({
            "error": ErrorBody { kind: self.kind(), exit_code: self.exit_code(), message: self.to_string(), details }
        })
    }
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    exit_code: i32,
    message: String,
    details: Vec<String>,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Strict(v) => write!(f, "validity checks failed: {}", v.join(", ")),
            CliError::Validation(v) => write!(f, "self-validation failed: {}", v.join(", ")),
        }
    }
}

impl std::error::Error for CliError {}

impl From<atom_linewidth::Error> for CliError {
    fn from(e: atom_linewidth::Error) -> Self {
        use atom_linewidth::Error as E;
        match e {
            E::InvalidParameter(_) | E::FeedbackWithoutMeasurement | E::SelfEnergyNotDominant { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("invalid config: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
