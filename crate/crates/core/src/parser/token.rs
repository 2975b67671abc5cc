use serde::Serialize;

use crate::lexicon::Lexicon;
use crate::SourcePos;

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TokenKind {
    Word,
    Compound,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub pos: SourcePos,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind != TokenKind::Punct
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

enum Raw<'t> {
    Word(&'t str),
    Punct(char),
}

fn scan(text: &str) -> Result<Vec<Raw<'_>>, char> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() || (c == '-' && start.is_some()) {
            if start.is_none() {
                start = Some(i);
            }
            continue;
        }
        if let Some(s) = start.take() {
            out.push(Raw::Word(&text[s..i]));
        }
        match c {
            '.' | '?' | ',' => out.push(Raw::Punct(c)),
            c if c.is_whitespace() => {}
            other => return Err(other),
        }
    }
    if let Some(s) = start {
        out.push(Raw::Word(&text[s..]));
    }
    Ok(out)
}

/// Splits `text` into sentences of tokens. Multi-word lexicon forms are
/// joined by longest match.
pub fn tokenize(lex: &Lexicon, text: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let raw = scan(text).map_err(|c| ParseError::Syntax {
        pos: SourcePos::default(),
        expected: "a word or punctuation".into(),
        found: c.to_string(),
    })?;
    let max = lex.max_form_words();
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let sentence = sentences.len();
        let pos = SourcePos::new(sentence, current.len());
        match raw[i] {
            Raw::Punct(c) => {
                current.push(Token {
                    surface: c.to_string(),
                    pos,
                    kind: TokenKind::Punct,
                });
                i += 1;
                if c == '.' || c == '?' {
                    sentences.push(std::mem::take(&mut current));
                }
            }
            Raw::Word(_) => {
                let words: Vec<&str> = raw[i..]
                    .iter()
                    .map_while(|r| match r {
                        Raw::Word(w) => Some(*w),
                        Raw::Punct(_) => None,
                    })
                    .collect();
                let n = lex.longest_match(&words, max).max(1);
                current.push(Token {
                    surface: words[..n].join(" "),
                    pos,
                    kind: if n > 1 {
                        TokenKind::Compound
                    } else {
                        TokenKind::Word
                    },
                });
                i += n;
            }
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    let unknown = lex.spell_check(text);
    if !unknown.is_empty() {
        let pos = sentences
            .iter()
            .flatten()
            .find(|t| t.kind == TokenKind::Word && !lex.is_known(&t.surface))
            .map(|t| t.pos)
            .unwrap_or_default();
        return Err(ParseError::UnknownWord { words: unknown, pos });
    }
    Ok(sentences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::simplemat_lexicon;

    fn surfaces(s: &[Token]) -> Vec<&str> {
        s.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn simple_sentence() {
        let lex = simplemat_lexicon();
        let s = tokenize(&lex, "SM rejects the card.").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(surfaces(&s[0]), ["SM", "rejects", "the", "card", "."]);
        assert_eq!(s[0][4].kind, TokenKind::Punct);
    }

    #[test]
    fn compound_noun_is_one_token() {
        let lex = simplemat_lexicon();
        let s = tokenize(&lex, "The customer enters a numeric personal code.").unwrap();
        assert_eq!(
            surfaces(&s[0]),
            ["The", "customer", "enters", "a", "numeric", "personal code", "."]
        );
        assert_eq!(s[0][5].kind, TokenKind::Compound);
    }

    #[test]
    fn empty_text() {
        assert!(tokenize(&simplemat_lexicon(), "").unwrap().is_empty());
    }

    #[test]
    fn positions_increase() {
        let lex = simplemat_lexicon();
        let s = tokenize(&lex, "SM rejects the card. Does SM check the card?").unwrap();
        assert_eq!(s.len(), 2);
        let all: Vec<SourcePos> = s.iter().flatten().map(|t| t.pos).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s[1][0].pos, SourcePos::new(1, 0));
    }

    #[test]
    fn unknown_word_reported() {
        let err = tokenize(&simplemat_lexicon(), "The custmer enters a card.").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownWord {
                words: vec!["custmer".into()],
                pos: SourcePos::new(0, 1),
            }
        );
    }
}
