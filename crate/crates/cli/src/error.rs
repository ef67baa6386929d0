use congrulab::Error;
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}:{line}:{column}: {message}")]
    SpecParse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Lib(#[from] Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Internal(String),
}

pub fn kind_of(e: &Error) -> &'static str {
    match e {
        Error::NonOrthogonal(_) => "NonOrthogonal",
        Error::NotUnit(_) => "NotUnit",
        Error::IndexOutOfRange(..) => "IndexOutOfRange",
        Error::EmptyInput => "EmptyInput",
        Error::InvalidGrid(_) => "InvalidGrid",
        Error::NotOrthogonal(_) => "NotOrthogonal",
        Error::InvalidBody(_) => "InvalidBody",
        Error::UnsupportedKind(_) => "UnsupportedKind",
        Error::OriginOutside => "OriginOutside",
        Error::DegenerateBody => "DegenerateBody",
        Error::GridMismatch => "GridMismatch",
        Error::AsymmetricRings => "AsymmetricRings",
        Error::ConfigInvalid(_) => "ConfigInvalid",
        Error::DiameterHypothesisFailed(_) => "DiameterHypothesisFailed",
        Error::CongruenceHypothesisFailed { .. } => "CongruenceHypothesisFailed",
        Error::StarShapednessLost => "StarShapednessLost",
        Error::InsufficientData(_) => "InsufficientData",
        Error::DegenerateProjection(_) => "DegenerateProjection",
        Error::TooFewVertices(_) => "TooFewVertices",
        Error::BudgetExhausted(_) => "BudgetExhausted",
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(
                Error::DiameterHypothesisFailed(_)
                | Error::CongruenceHypothesisFailed { .. }
                | Error::StarShapednessLost,
            ) => EXIT_HYPOTHESIS,
            _ => EXIT_INTERNAL,
        }
    }

    pub fn payload(&self) -> String {
        let body = match self {
            CliError::Usage(m) => json!({ "kind": "UsageError", "message": m }),
            CliError::SpecParse {
                path,
                line,
                column,
                message,
            } => json!({
                "kind": "SpecParseError",
                "path": path,
                "line": line,
                "column": column,
                "message": message,
            }),
            CliError::Lib(e) => {
                let mut v = json!({ "kind": kind_of(e), "message": e.to_string() });
                if let Error::CongruenceHypothesisFailed { w, residual } = e {
                    v["w"] = json!(w);
                    v["residual"] = json!(residual);
                }
                v
            }
            CliError::Io { path, message } => json!({ "kind": "IoError", "path": path, "message": message }),
            CliError::Internal(m) => json!({ "kind": "InternalError", "message": m }),
        };
        json!({ "error": body }).to_string()
    }
}
