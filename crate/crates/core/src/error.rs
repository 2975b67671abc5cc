use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::discourse::DiscourseError;
use crate::executor::ExecError;
use crate::lexicon::LexiconError;
use crate::logic::{KbError, SolveError};
use crate::parser::ParseError;
use crate::translator::TranslateError;
use crate::SourcePos;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Discourse(#[from] DiscourseError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    SessionFile(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(e) => e.kind(),
            Error::Discourse(e) => e.kind(),
            Error::Translate(e) => e.kind(),
            Error::Kb(e) => e.kind(),
            Error::Solve(e) => e.kind(),
            Error::Lexicon(e) => e.kind(),
            Error::Exec(e) => e.kind(),
            Error::SessionFile(_) => "session-file",
        }
    }

    pub fn pos(&self) -> Option<SourcePos> {
        match self {
            Error::Parse(e) => Some(e.pos()),
            Error::Discourse(e) => Some(e.pos()),
            Error::Translate(e) => Some(e.pos()),
            Error::Solve(e) => e.pos(),
            Error::Exec(ExecError::Solve(e)) => e.pos(),
            _ => None,
        }
    }

    /// Unknown words, for the lexical editor.
    pub fn words(&self) -> &[String] {
        match self {
            Error::Parse(ParseError::UnknownWord { words, .. }) => words,
            _ => &[],
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            kind: self.kind().to_string(),
            message: self.to_string(),
            pos: self.pos(),
            words: self.words().to_vec(),
        }
    }
}

/// Serializable form of an [`Error`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub pos: Option<SourcePos>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
}

/// `error: <kind>: <detail> at <sentence>:<token>`.
impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}: {}", self.kind, self.message)?;
        if let Some(p) = self.pos {
            write!(f, " at {p}")?;
        }
        Ok(())
    }
}
