//! The SimpleMat automated-teller example shipped with the crate.

use crate::lexicon::Lexicon;

pub const SIMPLEMAT_LEXICON: &str = include_str!("../fixtures/simplemat.lex");
pub const SIMPLEMAT_TEXT: &str = include_str!("../fixtures/simplemat.ace");

pub fn simplemat_lexicon() -> Lexicon {
    Lexicon::load(SIMPLEMAT_LEXICON).expect("bundled lexicon is valid")
}
