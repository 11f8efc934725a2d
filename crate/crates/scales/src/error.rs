use std::fmt;

use scales_core::ScaleError;

#[derive(Debug)]
pub enum HarnessError {
    Scale(ScaleError),
    Io(std::io::Error),
    Json(serde_json::Error),
    Csv(csv::Error),
    /// Brute force was asked for more elements than it can enumerate.
    TooLarge {
        n: usize,
        max: usize,
    },
    BadInput(String),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Scale(e) => write!(f, "{e}"),
            HarnessError::Io(e) => write!(f, "io: {e}"),
            HarnessError::Json(e) => write!(f, "json: {e}"),
            HarnessError::Csv(e) => write!(f, "csv: {e}"),
            HarnessError::TooLarge { n, max } => {
                write!(f, "n = {n} is too large to enumerate (max {max})")
            }
            HarnessError::BadInput(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl std::error::Error for HarnessError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            HarnessError::Scale(e) => Some(e),
            HarnessError::Io(e) => Some(e),
            HarnessError::Json(e) => Some(e),
            HarnessError::Csv(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ScaleError> for HarnessError {
    fn from(e: ScaleError) -> Self {
        HarnessError::Scale(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Json(e)
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e)
    }
}
