//! Independent sentences and questions processed in bulk.
//!
//! With the `parallel` feature the work is spread over a rayon pool,
//! otherwise it runs in order. Results are always in input order.

use crate::lexicon::Lexicon;
use crate::parser::{parse_text_at, ParseError, SyntaxTree};
use crate::session::{Answer, Session};
use crate::Error;

fn parse_one(lex: &Lexicon, i: usize, text: &str) -> Result<Vec<SyntaxTree>, ParseError> {
    parse_text_at(lex, text, i)
}

/// Tokenizes and parses each text on its own; text `i` is numbered as
/// sentence `i`.
pub fn parse_all(lex: &Lexicon, texts: &[String]) -> Vec<Result<Vec<SyntaxTree>, ParseError>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        texts
            .par_iter()
            .enumerate()
            .map(|(i, t)| parse_one(lex, i, t))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    parse_all_sequential(lex, texts)
}

pub fn parse_all_sequential(lex: &Lexicon, texts: &[String]) -> Vec<Result<Vec<SyntaxTree>, ParseError>> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_one(lex, i, t))
        .collect()
}

/// Answers each question against the accepted part of `session`.
pub fn answer_all(session: &Session, questions: &[String]) -> Vec<Result<Answer, Error>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        questions.par_iter().map(|q| session.query(q)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    answer_all_sequential(session, questions)
}

pub fn answer_all_sequential(session: &Session, questions: &[String]) -> Vec<Result<Answer, Error>> {
    questions.iter().map(|q| session.query(q)).collect()
}
