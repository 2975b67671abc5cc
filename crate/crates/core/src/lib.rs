//! Compiles specifications written in a controlled subset of English into
//! discourse representation structures, then into a logic knowledge base that
//! can be queried in the same language and executed as an ordered event
//! simulation.
//!
//! The pipeline, one module per stage:
//!
//! * [`lexicon`]: content words, the builtin function-word table, spell checking
//! * [`parser`]: tokenizer, top-down parser with feature unification, paraphrases
//! * [`discourse`]: DRS construction, anaphora resolution, cleanup
//! * [`logic`]: terms, clauses, knowledge base, SLD resolution with negation as failure
//! * [`translator`]: DRS to clauses, questions to goals, answers back to English
//! * [`executor`]: event plans, interface bindings, scaffolding prompts
//! * [`session`]: the stage-then-accept dialog tying the stages together
//! * [`batch`]: sentence-parallel parsing and query answering

pub mod batch;
pub mod discourse;
pub mod executor;
pub mod features;
pub mod fixtures;
pub mod lexicon;
pub mod logic;
pub mod parser;
pub mod session;
pub mod translator;

mod error;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use error::{Error, ErrorReport};

/// Position of a token: sentence index and token index within the sentence.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct SourcePos {
    pub sentence: usize,
    pub token: usize,
}

impl SourcePos {
    pub fn new(sentence: usize, token: usize) -> Self {
        SourcePos { sentence, token }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.sentence + 1, self.token)
    }
}

/// A non-fatal diagnostic attached to a sentence or an operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub pos: SourcePos,
    pub message: String,
}

impl Warning {
    pub fn new(pos: SourcePos, message: impl Into<String>) -> Self {
        Warning {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {} at {}", self.message, self.pos)
    }
}
