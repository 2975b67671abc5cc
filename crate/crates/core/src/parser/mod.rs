//! Tokenizer, parser and paraphraser.

mod grammar;
pub mod paraphrase;
pub mod token;
pub mod tree;

use thiserror::Error;

use crate::lexicon::Lexicon;
use crate::SourcePos;

pub use token::{tokenize, Token, TokenKind};
pub use tree::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown word(s): {}", words.join(", "))]
    UnknownWord { words: Vec<String>, pos: SourcePos },
    #[error("expected {expected}, found {found}")]
    Syntax {
        pos: SourcePos,
        expected: String,
        found: String,
    },
    #[error("{detail}")]
    Agreement { pos: SourcePos, detail: String },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::UnknownWord { .. } => "unknown-word",
            ParseError::Syntax { .. } => "syntax-error",
            ParseError::Agreement { .. } => "agreement-error",
        }
    }

    pub fn pos(&self) -> SourcePos {
        match self {
            ParseError::UnknownWord { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Agreement { pos, .. } => *pos,
        }
    }

    /// Same error, relocated to another sentence index.
    pub fn in_sentence(mut self, sentence: usize) -> Self {
        let (ParseError::UnknownWord { pos, .. }
        | ParseError::Syntax { pos, .. }
        | ParseError::Agreement { pos, .. }) = &mut self;
        pos.sentence = sentence;
        self
    }
}

/// Parses the tokens of one sentence, including its terminating `.` or `?`.
pub fn parse_sentence(lex: &Lexicon, tokens: &[Token]) -> Result<SyntaxTree, ParseError> {
    grammar::Parser::new(lex, tokens).parse()
}

/// Tokenizes and parses every sentence of `text`, stopping at the first error.
pub fn parse_text(lex: &Lexicon, text: &str) -> Result<Vec<SyntaxTree>, ParseError> {
    parse_text_at(lex, text, 0)
}

/// Like [`parse_text`], numbering sentences from `first`.
pub fn parse_text_at(lex: &Lexicon, text: &str, first: usize) -> Result<Vec<SyntaxTree>, ParseError> {
    let shift = |e: ParseError| {
        let n = e.pos().sentence + first;
        e.in_sentence(n)
    };
    let mut sentences = tokenize(lex, text).map_err(shift)?;
    for t in sentences.iter_mut().flatten() {
        t.pos.sentence += first;
    }
    sentences.iter().map(|s| parse_sentence(lex, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{simplemat_lexicon, SIMPLEMAT_TEXT};

    fn parse(text: &str) -> Result<SyntaxTree, ParseError> {
        let lex = simplemat_lexicon();
        let mut trees = parse_text(&lex, text)?;
        assert_eq!(trees.len(), 1);
        Ok(trees.remove(0))
    }

    #[test]
    fn simplemat_text_parses() {
        let trees = parse_text(&simplemat_lexicon(), SIMPLEMAT_TEXT).unwrap();
        assert_eq!(trees.len(), 2);
        let Root::Declarative(Sentence::Simple(c)) = &trees[0].root else {
            panic!("{}", trees[0].dump())
        };
        let VerbPhrase::Simple(vp) = &c.vp else {
            panic!()
        };
        assert!(matches!(
            vp.body,
            VpBody::Transitive {
                object: Some(NounPhrase::Coord {
                    kind: CoordKind::And,
                    ..
                }),
                ..
            }
        ));
        assert!(matches!(
            trees[1].root,
            Root::Declarative(Sentence::IfThen { .. })
        ));
    }

    #[test]
    fn object_relative_clause_has_gap() {
        let t = parse("The customer enters a personal code that SimpleMat checks.").unwrap();
        let dump = t.dump();
        assert!(dump.contains("rel-clause"), "{dump}");
        assert!(dump.contains("gap"), "{dump}");
    }

    #[test]
    fn subject_relative_clause() {
        let t = parse("A customer who enters a card waits.").unwrap();
        let Root::Declarative(Sentence::Simple(c)) = &t.root else {
            panic!("{}", t.dump())
        };
        let NounPhrase::Basic(b) = &c.subject else {
            panic!()
        };
        assert!(matches!(
            b.relative.as_deref().map(|r| &r.body),
            Some(RelBody::Subject(_))
        ));
    }

    #[test]
    fn object_coordination() {
        let t = parse("The customer enters a card and a personal code.").unwrap();
        let Root::Declarative(Sentence::Simple(c)) = &t.root else {
            panic!("{}", t.dump())
        };
        let VerbPhrase::Simple(vp) = &c.vp else {
            panic!()
        };
        assert!(matches!(
            vp.body,
            VpBody::Transitive {
                object: Some(NounPhrase::Coord { .. }),
                ..
            }
        ));
    }

    #[test]
    fn vp_coordination() {
        let t = parse("The customer enters a card and waits.").unwrap();
        let Root::Declarative(Sentence::Simple(c)) = &t.root else {
            panic!("{}", t.dump())
        };
        assert!(matches!(c.vp, VerbPhrase::Coord { .. }));
    }

    #[test]
    fn negated_copula_and_does_not() {
        parse("The personal code is not valid.").unwrap();
        parse("SimpleMat does not reject the card.").unwrap();
    }

    #[test]
    fn universal_and_negative_determiners() {
        parse("Every customer has a card.").unwrap();
        parse("No customer enters a blocked card.").unwrap();
    }

    #[test]
    fn disjunctions() {
        parse("The customer waits or SimpleMat rejects the card.").unwrap();
        parse("Either the customer waits or SimpleMat rejects the card.").unwrap();
        parse("Neither the customer waits nor SimpleMat rejects the card.").unwrap();
        parse("Either the customer or SimpleMat waits.").unwrap();
    }

    #[test]
    fn questions() {
        for q in [
            "Does SimpleMat check the personal code?",
            "Who enters a card?",
            "What does SimpleMat check?",
            "Which customer enters a card?",
            "Is the personal code valid?",
            "Is the card not valid?",
            "Do the customers enter a card?",
        ] {
            let t = parse(q).unwrap_or_else(|e| panic!("{q}: {e}"));
            assert!(t.is_question(), "{q}");
        }
        let t = parse("What does SimpleMat check?").unwrap();
        let Root::Question(q) = &t.root else { panic!() };
        assert!(q.wh_object.is_some());
    }

    #[test]
    fn subject_verb_agreement() {
        let err = parse("The customers enters a card.").unwrap_err();
        assert_eq!(err.kind(), "agreement-error");
        let err = parse("The customer enter a card.").unwrap_err();
        assert_eq!(err.kind(), "agreement-error");
        parse("The customers enter a card.").unwrap();
        parse("The customer and SimpleMat enter a card.").unwrap();
    }

    #[test]
    fn determiner_number_agreement() {
        let err = parse("A customers enter a card.").unwrap_err();
        assert_eq!(err.kind(), "agreement-error");
        assert_eq!(err.pos(), SourcePos::new(0, 1));
    }

    #[test]
    fn pronoun_case() {
        parse("He enters a card.").unwrap();
        let err = parse("Him enters a card.").unwrap_err();
        assert_eq!(err.kind(), "agreement-error");
        let err = parse("SimpleMat checks he.").unwrap_err();
        assert_eq!(err.kind(), "agreement-error");
    }

    #[test]
    fn syntax_error_points_at_furthest_token() {
        let err = parse("The customer enters.").unwrap_err();
        match err {
            ParseError::Syntax { pos, found, .. } => {
                assert_eq!(pos, SourcePos::new(0, 3));
                assert_eq!(found, "`.`");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_terminator() {
        let err = parse("The customer waits").unwrap_err();
        assert_eq!(err.kind(), "syntax-error");
    }

    #[test]
    fn comma_before_then() {
        parse("If the card is blocked, then SimpleMat rejects the card.").unwrap();
    }

    #[test]
    fn dump_shows_features_and_canonical() {
        let t = parse("SM rejects the card.").unwrap();
        let dump = t.dump();
        assert!(dump.starts_with("sentence[0..5]"), "{dump}");
        assert!(dump.contains("name[0..1] {} \"SM\" -> sm"), "{dump}");
        assert!(dump.contains("case:nom"), "{dump}");
    }
}
