use std::collections::BTreeMap;

use crate::discourse::Referent;
use crate::lexicon::{Lexicon, WordClass};
use crate::logic::{KnowledgeBase, Subst, Term};
use crate::SourcePos;

use super::{QueryGoal, RefMap};

/// How the object behind a term was first mentioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intro {
    pub indefinite: bool,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Term(Term),
    Function(String),
}

fn key(t: &Term) -> Key {
    match t {
        Term::Func(name, _) => Key::Function(name.clone()),
        other => Key::Term(other.clone()),
    }
}

/// English descriptions of knowledge-base terms.
#[derive(Debug, Clone, Default)]
pub struct ReferentIndex {
    descriptions: BTreeMap<Term, String>,
    nouns: BTreeMap<Term, String>,
    intros: BTreeMap<Key, Intro>,
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn name_display(lex: &Lexicon, canonical: &str) -> String {
    lex.get(WordClass::ProperName, canonical)
        .map(|e| lex.representative(e))
        .and_then(|e| e.display.clone())
        .unwrap_or_else(|| capitalize(canonical))
}

impl ReferentIndex {
    pub fn build(kb: &KnowledgeBase, lex: &Lexicon, refs: &RefMap, referents: &[Referent]) -> Self {
        let mut idx = ReferentIndex::default();
        for r in referents {
            if let Some(t) = refs.get(&r.id) {
                idx.intros.entry(key(t)).or_insert(Intro {
                    indefinite: r.indefinite,
                    pos: r.pos,
                });
            }
        }
        idx.add_facts(kb, lex);
        idx
    }

    /// Harvests `named/2` and unary noun facts not seen before.
    pub fn add_facts(&mut self, kb: &KnowledgeBase, lex: &Lexicon) {
        let heads = kb
            .clauses()
            .iter()
            .filter(|c| c.body.is_empty())
            .filter_map(|c| c.head.as_ref())
            .filter(|h| h.is_ground());
        let mut nouns = Vec::new();
        for h in heads {
            match (h.pred.as_str(), h.args.as_slice()) {
                ("named", [t, Term::Const(c)]) => {
                    self.descriptions
                        .entry(t.clone())
                        .or_insert_with(|| name_display(lex, c));
                }
                (p, [t]) => {
                    let noun = lex
                        .entries()
                        .iter()
                        .find(|e| e.class.is_noun() && e.canonical == p);
                    if let Some(e) = noun {
                        nouns.push((t.clone(), e.singular().to_string()));
                    }
                }
                _ => {}
            }
        }
        for (t, sg) in nouns {
            self.nouns.entry(t.clone()).or_insert_with(|| sg.clone());
            if let Term::Const(c) = &t {
                let d = name_display(lex, c);
                self.descriptions.entry(t).or_insert(d);
            } else {
                self.descriptions.entry(t).or_insert(format!("the {sg}"));
            }
        }
    }

    /// `the customer`, `SimpleMat`, `John`, or `an unknown object`.
    pub fn describe(&self, t: &Term) -> String {
        match (self.descriptions.get(t), t) {
            (Some(d), _) => d.clone(),
            (None, Term::Const(c)) => capitalize(c),
            _ => "an unknown object".to_string(),
        }
    }

    /// Singular noun the term was introduced with, if any.
    pub fn noun(&self, t: &Term) -> Option<&str> {
        self.nouns.get(t).map(String::as_str)
    }

    /// Is the term a proper name rather than a described object?
    pub fn is_name(&self, t: &Term) -> bool {
        match self.descriptions.get(t) {
            Some(d) => !d.starts_with("the "),
            None => matches!(t, Term::Const(_)),
        }
    }

    pub fn intro(&self, t: &Term) -> Option<Intro> {
        self.intros.get(&key(t)).copied()
    }
}

/// Renders solver results as an English answer.
pub fn generate_answer(goal: &QueryGoal, results: &[Subst], incomplete: bool, idx: &ReferentIndex) -> String {
    let mut answer = if goal.is_yes_no() {
        if results.is_empty() { "No." } else { "Yes." }.to_string()
    } else {
        let mut seen: Vec<String> = Vec::new();
        for s in results {
            for (v, _) in &goal.wh {
                if let Some(t) = s.get(v) {
                    let d = idx.describe(t);
                    if !seen.contains(&d) {
                        seen.push(d);
                    }
                }
            }
        }
        if seen.is_empty() {
            "Nothing.".to_string()
        } else {
            format!("{}.", capitalize(&seen.join(" and ")))
        }
    };
    if incomplete {
        answer.push_str(" (search depth exceeded)");
    }
    answer
}
