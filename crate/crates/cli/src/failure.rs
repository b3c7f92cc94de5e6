use std::process::ExitCode;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    BadArguments(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{message}")]
    Verification { message: String, failed: serde_json::Value },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::BadArguments(_) => 2,
            Failure::Numerical(_) | Failure::Verification { .. } => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::BadArguments(_) => "bad_arguments",
            Failure::Numerical(_) => "numerical_error",
            Failure::Verification { .. } => "verification_failed",
        }
    }

    /// Writes the JSON error object to stderr and returns the exit status.
    pub fn report(&self) -> ExitCode {
        let mut body = json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() });
        if let Failure::Verification { failed, .. } = self {
            body["failed"] = failed.clone();
        }
        eprintln!("{body}");
        ExitCode::from(self.exit_code())
    }
}

impl From<quartic::Error> for Failure {
    fn from(e: quartic::Error) -> Self {
        use quartic::Error as E;
        match e {
            E::InvalidRange { .. }
            | E::TooFewPoints { .. }
            | E::LengthMismatch { .. }
            | E::NonFinite(_)
            | E::InvalidKappa(_)
            | E::InvalidEigenvalue(_)
            | E::UnknownExample(_)
            | E::MissingK
            | E::InvalidArgument(_)
            | E::Json(_)
            | E::Io(_) => Failure::BadArguments(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::BadArguments(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}
