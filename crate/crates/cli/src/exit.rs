use std::fmt;
use std::process::ExitCode;

use seifert_core::dual::DualError;
use seifert_core::format::FormatError;
use seifert_core::generate::GenError;
use seifert_core::trees::TreeError;
use seifert_core::{ComplexError, LinkError, SeifertError};

/// Process exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Parse = 1,
    Topology = 2,
    NotBoundary = 3,
    Numeric = 4,
}

/// An error that knows which exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(status: Status, error: impl Into<anyhow::Error>) -> Self {
        Failure { status, error: error.into() }
    }

    pub fn context(self, msg: impl fmt::Display + Send + Sync + 'static) -> Self {
        Failure { status: self.status, error: self.error.context(msg) }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.status as u8)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(Status::Parse, e)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::new(Status::Parse, e)
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        Failure::new(Status::Topology, e)
    }
}

impl From<DualError> for Failure {
    fn from(e: DualError) -> Self {
        Failure::new(Status::Topology, e)
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure::new(Status::Topology, e)
    }
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        let status = match e {
            LinkError::NotACycle => Status::NotBoundary,
            _ => Status::Numeric,
        };
        Failure::new(status, e)
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::new(Status::Topology, e)
    }
}

impl From<SeifertError> for Failure {
    fn from(e: SeifertError) -> Self {
        match e {
            SeifertError::Link(l) => l.into(),
            SeifertError::Tree(t) => t.into(),
            SeifertError::NotACycle
            | SeifertError::CornerObstruction { .. }
            | SeifertError::VerificationFailed { .. } => Failure::new(Status::NotBoundary, e),
            other => Failure::new(Status::Topology, other),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::new(Status::Parse, e)
    }
}
