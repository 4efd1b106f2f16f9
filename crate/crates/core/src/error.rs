use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A point outside the domain of a group map (argument of `ln` or `sqrt`
/// not strictly positive).
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    pub generator: u8,
    /// Human-readable name of the offending expression, e.g. `exp(2rt) + eps4`.
    pub argument: &'static str,
    pub value: f64,
    /// Position in a pipeline, when the failure happened inside a chain.
    pub stage: Option<usize>,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}: {} = {} must be > 0", self.generator, self.argument, self.value)?;
        if let Some(stage) = self.stage {
            write!(f, " (pipeline stage {stage})")?;
        }
        Ok(())
    }
}

/// Syntax error in the solution-expression language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where the unexpected token starts.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: expected {}, found {}", self.offset, self.expected.join(" or "), self.found)
    }
}

/// Well-formed input naming an index or order that does not exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for SemanticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(DomainError),
    #[error("range error: {0}")]
    Range(String),
    #[error("parse error {0}")]
    Parse(ParseError),
    #[error("semantic error {0}")]
    Semantic(SemanticError),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }

    /// Tags a domain error with the pipeline stage it came from.
    pub(crate) fn at_stage(self, stage: usize) -> Self {
        match self {
            Error::Domain(mut d) => {
                d.stage = Some(stage);
                Error::Domain(d)
            }
            other => other,
        }
    }
}
