//! Re-statement of a parsed sentence exposing the chosen interpretation.
//!
//! Abbreviations and synonyms are replaced by their representative
//! entries, resolved anaphors get a `[= antecedent, sentence N]` note and
//! an elided subject and verb is restored before each further object of
//! an `and`-coordinated object list.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;

use crate::discourse::{Referent, Resolution};
use crate::lexicon::{Lexicon, WordClass};

use super::tree::{np_leaves, BasicNp, CoordKind, Leaf, LeafKind, NounPhrase, NpKind, Root, Sentence, SyntaxTree, VerbPhrase, VpBody};
use super::Clause;

/// Removes every `[= ...]` annotation.
pub fn strip_annotations(text: &str) -> String {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\s*\[=[^\]]*\]").expect("valid pattern"))
        .replace_all(text, "")
        .into_owned()
}

/// Paraphrase of `tree`; `resolutions` are those of its own sentence.
pub fn paraphrase(tree: &SyntaxTree, lex: &Lexicon, resolutions: &[Resolution], referents: &[Referent]) -> String {
    let mut notes = BTreeMap::new();
    for r in resolutions.iter().filter(|r| r.anaphor.pos.sentence == tree.sentence) {
        if let Some(a) = r.antecedent.and_then(|a| referents.get(a)) {
            let text = match &a.name {
                Some(n) => name_display(lex, n, &a.text),
                None => a.text.clone(),
            };
            notes.insert(
                r.anaphor.pos.token,
                format!("[= {text}, sentence {}]", a.pos.sentence + 1),
            );
        }
    }

    let mut inserts: BTreeMap<usize, Vec<&Leaf>> = BTreeMap::new();
    match &tree.root {
        Root::Declarative(s) => ellipsis_in(s, &mut inserts),
        Root::Question(_) => {}
    }

    let mut words: Vec<String> = Vec::new();
    for l in tree.leaves() {
        words.push(render(lex, l));
        if let Some(n) = notes.get(&l.index) {
            words.push(n.clone());
        }
        for copy in inserts.get(&l.index).into_iter().flatten() {
            words.push(render(lex, copy));
        }
    }
    let mut out = capitalize(&words.join(" "));
    out.push(if tree.is_question() { '?' } else { '.' });
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn name_display(lex: &Lexicon, canonical: &str, fallback: &str) -> String {
    lex.get(WordClass::ProperName, canonical)
        .map(|e| lex.representative(e))
        .and_then(|e| e.display.clone())
        .unwrap_or_else(|| fallback.to_string())
}

fn render(lex: &Lexicon, l: &Leaf) -> String {
    let LeafKind::Content(class) = l.kind else {
        return l.word();
    };
    let Some(entry) = lex.get(class, &l.canonical) else {
        return l.surface.clone();
    };
    let rep = lex.representative(entry);
    if class == WordClass::ProperName {
        return rep.display.clone().unwrap_or_else(|| l.surface.clone());
    }
    if std::ptr::eq(rep, entry) {
        return l.surface.to_lowercase();
    }
    rep.form(l.number)
        .unwrap_or(rep.singular())
        .to_string()
}

/// Top-level clauses only: inside conditionals a repeated subject could
/// pick up a different antecedent.
fn ellipsis_in<'a>(s: &'a Sentence, inserts: &mut BTreeMap<usize, Vec<&'a Leaf>>) {
    match s {
        Sentence::Simple(c) => ellipsis(c, inserts),
        Sentence::Coord {
            kind: CoordKind::And,
            parts,
            ..
        } => {
            for p in parts {
                ellipsis_in(p, inserts);
            }
        }
        _ => {}
    }
}

/// `S V O1 and O2` becomes `S V O1 and S V O2` when repeating `S` refers
/// to the same thing: a name or definite noun phrase without relative
/// clause whose noun does not occur among the objects before it.
fn ellipsis<'a>(c: &'a Clause, inserts: &mut BTreeMap<usize, Vec<&'a Leaf>>) {
    let VerbPhrase::Simple(vp) = &c.vp else { return };
    if vp.aux.is_some() || vp.negation.is_some() {
        return;
    }
    let VpBody::Transitive {
        verb,
        object: Some(NounPhrase::Coord {
            kind: CoordKind::And,
            words,
            items,
            ..
        }),
    } = &vp.body
    else {
        return;
    };
    let NounPhrase::Basic(subject) = &c.subject else { return };
    if !repeatable(subject) {
        return;
    }
    let mut subject_leaves = Vec::new();
    np_leaves(&c.subject, &mut subject_leaves);
    for (word, prior) in words.iter().zip(1..) {
        let clash = items[..prior.min(items.len())].iter().any(|np| {
            let mut ls = Vec::new();
            np_leaves(np, &mut ls);
            ls.iter().any(|l| l.canonical == subject.head.canonical)
        });
        if clash {
            return;
        }
        let mut copy = subject_leaves.clone();
        copy.push(verb);
        inserts.insert(word.index, copy);
    }
}

fn repeatable(b: &BasicNp) -> bool {
    matches!(b.kind, NpKind::ProperName | NpKind::Definite) && b.relative.is_none()
}
