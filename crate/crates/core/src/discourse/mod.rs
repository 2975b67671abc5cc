//! Discourse representation structures: construction from syntax trees,
//! anaphora resolution and cleanup.

mod build;
mod cleanup;
mod resolve;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::lexicon::{Gender, Lexicon, Number};
use crate::parser::SyntaxTree;
use crate::{SourcePos, Warning};

pub use cleanup::cleanup;
pub use resolve::{closest_antecedent, Mode};

pub type RefId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Ref(RefId),
    Sym(String),
}

#[derive(Debug, Clone)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Arg>,
    pub pos: SourcePos,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Arg>, pos: SourcePos) -> Self {
        Atom {
            pred: pred.into(),
            args,
            pos,
        }
    }

    pub fn refs(&self) -> impl Iterator<Item = RefId> + '_ {
        self.args.iter().filter_map(|a| match a {
            Arg::Ref(r) => Some(*r),
            Arg::Sym(_) => None,
        })
    }
}

// Source positions are annotations, not part of the logical content.
impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.pred == other.pred && self.args == other.args
    }
}

impl Eq for Atom {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Atomic(Atom),
    Gender(RefId, Gender),
    The(Atom),
    Synonym(Atom, Atom),
    /// `anaphor = antecedent`
    Eq(RefId, RefId),
    IfThen(Drs, Drs),
    Not(Drs),
    Or(Vec<Drs>),
    Query(Drs, Vec<RefId>),
    /// Placeholder for an anaphor awaiting resolution.
    Pending(RefId),
}

impl Condition {
    pub fn is_bookkeeping(&self) -> bool {
        matches!(
            self,
            Condition::Gender(..)
                | Condition::The(_)
                | Condition::Synonym(..)
                | Condition::Eq(..)
                | Condition::Pending(_)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Drs {
    pub referents: Vec<RefId>,
    pub conditions: Vec<Condition>,
}

/// Referent name in dumps: `A`..`Z`, then `A1`..`Z1`, and so on.
pub fn letter(id: RefId) -> String {
    let c = (b'A' + (id % 26) as u8) as char;
    match id / 26 {
        0 => c.to_string(),
        n => format!("{c}{n}"),
    }
}

impl Drs {
    pub fn dump(&self) -> String {
        let mut out = String::new();
        dump_drs(&mut out, self, &|r| letter(r));
        out
    }

    /// Dump with referents renamed in order of first appearance, so that
    /// structures differing only in referent numbering print identically.
    pub fn canonical_dump(&self) -> String {
        let mut order = Vec::new();
        self.visit_refs(&mut |r| {
            if !order.contains(&r) {
                order.push(r);
            }
        });
        let mut out = String::new();
        dump_drs(&mut out, self, &|r| {
            letter(order.iter().position(|x| *x == r).unwrap_or(r))
        });
        out
    }

    /// Calls `f` on every referent occurrence, declarations first per DRS.
    pub fn visit_refs(&self, f: &mut dyn FnMut(RefId)) {
        for r in &self.referents {
            f(*r);
        }
        for c in &self.conditions {
            match c {
                Condition::Atomic(a) | Condition::The(a) => a.refs().for_each(&mut *f),
                Condition::Synonym(a, b) => {
                    a.refs().for_each(&mut *f);
                    b.refs().for_each(&mut *f);
                }
                Condition::Gender(r, _) | Condition::Pending(r) => f(*r),
                Condition::Eq(a, b) => {
                    f(*a);
                    f(*b);
                }
                Condition::IfThen(a, b) => {
                    a.visit_refs(f);
                    b.visit_refs(f);
                }
                Condition::Not(d) => d.visit_refs(f),
                Condition::Or(ds) => ds.iter().for_each(|d| d.visit_refs(f)),
                Condition::Query(d, wh) => {
                    d.visit_refs(f);
                    wh.iter().for_each(|r| f(*r));
                }
            }
        }
    }

    /// Every atomic condition, depth first.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        for c in &self.conditions {
            match c {
                Condition::Atomic(a) => out.push(a),
                Condition::IfThen(a, b) => {
                    a.collect_atoms(out);
                    b.collect_atoms(out);
                }
                Condition::Not(d) | Condition::Query(d, _) => d.collect_atoms(out),
                Condition::Or(ds) => ds.iter().for_each(|d| d.collect_atoms(out)),
                _ => {}
            }
        }
    }
}

fn dump_atom(out: &mut String, a: &Atom, name: &dyn Fn(RefId) -> String) {
    let args: Vec<String> = a
        .args
        .iter()
        .map(|x| match x {
            Arg::Ref(r) => name(*r),
            Arg::Sym(s) => s.clone(),
        })
        .collect();
    let _ = write!(out, "{}({})", a.pred, args.join(","));
}

fn dump_drs(out: &mut String, d: &Drs, name: &dyn Fn(RefId) -> String) {
    let refs: Vec<String> = d.referents.iter().map(|r| name(*r)).collect();
    let _ = write!(out, "drs([{}],[", refs.join(","));
    for (i, c) in d.conditions.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        dump_condition(out, c, name);
    }
    out.push_str("])");
}

fn dump_condition(out: &mut String, c: &Condition, name: &dyn Fn(RefId) -> String) {
    match c {
        Condition::Atomic(a) => dump_atom(out, a, name),
        Condition::Gender(r, g) => {
            let _ = write!(out, "gender({},{})", name(*r), g.as_str());
        }
        Condition::The(a) => {
            out.push_str("the(");
            dump_atom(out, a, name);
            out.push(')');
        }
        Condition::Synonym(a, b) => {
            out.push_str("synonym(");
            dump_atom(out, a, name);
            out.push(',');
            dump_atom(out, b, name);
            out.push(')');
        }
        Condition::Eq(a, b) => {
            let _ = write!(out, "{}={}", name(*a), name(*b));
        }
        Condition::IfThen(a, b) => {
            out.push_str("ifthen(");
            dump_drs(out, a, name);
            out.push_str(", ");
            dump_drs(out, b, name);
            out.push(')');
        }
        Condition::Not(d) => {
            out.push_str("not(");
            dump_drs(out, d, name);
            out.push(')');
        }
        Condition::Or(ds) => {
            out.push_str("or(");
            for (i, d) in ds.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                dump_drs(out, d, name);
            }
            out.push(')');
        }
        Condition::Query(d, wh) => {
            out.push_str("query(");
            dump_drs(out, d, name);
            let wh: Vec<String> = wh.iter().map(|r| name(*r)).collect();
            let _ = write!(out, ", [{}])", wh.join(","));
        }
        Condition::Pending(r) => {
            let _ = write!(out, "pending({})", name(*r));
        }
    }
}

/// What the discourse knows about one referent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Referent {
    pub id: RefId,
    pub gender: Gender,
    pub number: Number,
    /// Noun predicates asserted of the referent, canonical after synonyms.
    pub nouns: Vec<String>,
    /// Canonical symbol when introduced by a proper name.
    pub name: Option<String>,
    /// The introducing noun phrase, e.g. `a numeric personal code`.
    pub text: String,
    pub indefinite: bool,
    pub pos: SourcePos,
    /// Set once resolution has bound this referent to an antecedent.
    pub alias_of: Option<RefId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnaphorKind {
    Definite { noun: String, adjectives: Vec<Atom> },
    Pronoun,
    /// An abbreviation or synonym of a proper name already in the discourse.
    Alias { surface: String, target: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anaphor {
    pub referent: RefId,
    pub kind: AnaphorKind,
    /// Accessible referents introduced before the anaphor, in id order.
    pub candidates: Vec<RefId>,
    /// Head token of the anaphoric noun phrase.
    pub pos: SourcePos,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub anaphor: Anaphor,
    /// `None` when a definite noun phrase was accommodated.
    pub antecedent: Option<RefId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscourseError {
    #[error("pronoun `{word}` has no accessible antecedent")]
    UnresolvedPronoun { word: String, pos: SourcePos },
    #[error("`{text}` does not refer to anything mentioned before")]
    UnresolvedReference { text: String, pos: SourcePos },
}

impl DiscourseError {
    pub fn kind(&self) -> &'static str {
        match self {
            DiscourseError::UnresolvedPronoun { .. } => "pronoun-unresolvable",
            DiscourseError::UnresolvedReference { .. } => "unresolved-reference",
        }
    }

    pub fn pos(&self) -> SourcePos {
        match self {
            DiscourseError::UnresolvedPronoun { pos, .. }
            | DiscourseError::UnresolvedReference { pos, .. } => *pos,
        }
    }
}

/// Outcome of adding one sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentenceAnalysis {
    pub resolutions: Vec<Resolution>,
    pub warnings: Vec<Warning>,
}

/// A question analysed against the discourse, which itself stays unchanged.
#[derive(Debug, Clone)]
pub struct QueryAnalysis {
    /// Cleaned question body.
    pub body: Drs,
    pub wh: Vec<RefId>,
    pub resolutions: Vec<Resolution>,
    /// Referent table including the question's own referents.
    pub referents: Vec<Referent>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiscourseState {
    pub drs: Drs,
    pub referents: Vec<Referent>,
    /// Canonical proper name to its top-level referent.
    pub names: BTreeMap<String, RefId>,
}

impl DiscourseState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn referent(&self, id: RefId) -> &Referent {
        &self.referents[id]
    }

    /// Appends the conditions of a declarative sentence to the top DRS and
    /// returns its anaphors, still unresolved.
    pub fn build(&mut self, lex: &Lexicon, tree: &SyntaxTree) -> Vec<Anaphor> {
        build::Builder::new(self, lex, tree.sentence).tree(tree).0
    }

    /// Builds and resolves one sentence. On error the state is unchanged.
    pub fn add_sentence(
        &mut self,
        lex: &Lexicon,
        tree: &SyntaxTree,
    ) -> Result<SentenceAnalysis, DiscourseError> {
        let mut next = self.clone();
        let anaphors = next.build(lex, tree);
        let analysis = next.resolve(anaphors, Mode::Statement)?;
        *self = next;
        Ok(analysis)
    }

    /// Analyses a question without changing the discourse.
    pub fn question(
        &self,
        lex: &Lexicon,
        tree: &SyntaxTree,
    ) -> Result<QueryAnalysis, DiscourseError> {
        let mut scratch = self.clone();
        let (anaphors, wh) = build::Builder::new(&mut scratch, lex, tree.sentence).tree(tree);
        let analysis = scratch.resolve(anaphors, Mode::Question)?;
        let body = match scratch.drs.conditions.pop() {
            Some(Condition::Query(body, _)) => body,
            other => unreachable!("question built {other:?}"),
        };
        let body = cleanup(&body);
        Ok(QueryAnalysis {
            body,
            wh,
            resolutions: analysis.resolutions,
            referents: scratch.referents,
        })
    }

    /// The full DRS after cleanup.
    pub fn cleaned(&self) -> Drs {
        cleanup(&self.drs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{simplemat_lexicon, SIMPLEMAT_TEXT};
    use crate::parser::parse_text;

    fn analyse(text: &str) -> (DiscourseState, Vec<SentenceAnalysis>) {
        let lex = simplemat_lexicon();
        let mut st = DiscourseState::new();
        let out = parse_text(&lex, text)
            .unwrap()
            .iter()
            .map(|t| st.add_sentence(&lex, t).unwrap())
            .collect();
        (st, out)
    }

    #[test]
    fn letters() {
        assert_eq!(letter(0), "A");
        assert_eq!(letter(25), "Z");
        assert_eq!(letter(26), "A1");
        assert_eq!(letter(53), "B2");
    }

    #[test]
    fn simplemat_first_sentence() {
        let (st, _) = analyse("The customer enters a card and a numeric personal code that SimpleMat checks.");
        assert_eq!(
            st.drs.dump(),
            "drs([A,B,C,D],[gender(A,masc), customer(A), gender(B,neut), card(B), enter(A,B), \
             numeric(C), gender(C,neut), personal_code(C), gender(D,neut), named(D,simplemat), \
             check(D,C), enter(A,C)])"
        );
    }

    #[test]
    fn simplemat_pre_cleanup() {
        let (st, analyses) = analyse(SIMPLEMAT_TEXT);
        let dump = st.drs.dump();
        assert!(dump.ends_with(
            "ifthen(drs([E],[gender(E,neut), the(personal_code(E)), E=C, not(drs([],[valid(E)]))]), \
             drs([F,G],[gender(F,neut), synonym(named(F,sm),named(F,simplemat)), F=D, \
             gender(G,neut), the(card(G)), G=B, reject(F,G)]))])"
        ), "{dump}");
        assert_eq!(analyses[0].warnings.len(), 1);
        assert!(analyses[1].warnings.is_empty());
    }

    #[test]
    fn simplemat_cleaned() {
        let (st, _) = analyse(SIMPLEMAT_TEXT);
        assert_eq!(
            st.cleaned().dump(),
            "drs([A,B,C,D],[customer(A), card(B), enter(A,B), numeric(C), personal_code(C), \
             named(D,simplemat), check(D,C), enter(A,C), \
             ifthen(drs([],[not(drs([],[valid(C)]))]), drs([],[reject(D,B)]))])"
        );
    }

    #[test]
    fn every_customer() {
        let (st, _) = analyse("Every customer has a card.");
        assert_eq!(
            st.cleaned().canonical_dump(),
            "drs([],[ifthen(drs([A],[customer(A)]), drs([B],[card(B), have(A,B)]))])"
        );
    }

    #[test]
    fn no_customer() {
        let (st, _) = analyse("No customer enters a card.");
        assert_eq!(
            st.cleaned().canonical_dump(),
            "drs([],[not(drs([A,B],[customer(A), card(B), enter(A,B)]))])"
        );
    }

    #[test]
    fn closest_card_wins() {
        let (st, analyses) =
            analyse("A customer enters a card. SimpleMat checks a card. SimpleMat rejects the card.");
        let r = &analyses[2].resolutions[0];
        assert_eq!(r.antecedent, Some(3));
        assert!(st.cleaned().dump().contains("reject(C,D)"));
    }

    #[test]
    fn negated_referent_is_inaccessible() {
        let lex = simplemat_lexicon();
        let mut st = DiscourseState::new();
        let trees = parse_text(
            &lex,
            "SimpleMat does not reject a customer. SimpleMat checks him.",
        )
        .unwrap();
        st.add_sentence(&lex, &trees[0]).unwrap();
        let err = st.add_sentence(&lex, &trees[1]).unwrap_err();
        assert_eq!(err.kind(), "pronoun-unresolvable");
    }

    #[test]
    fn pronoun_resolves_by_gender() {
        let (st, analyses) = analyse("A customer enters a card. He waits.");
        assert_eq!(analyses[1].resolutions[0].antecedent, Some(0));
        assert!(st.cleaned().dump().contains("wait(A)"));
    }

    #[test]
    fn abbreviation_without_antecedent_is_a_name() {
        let (st, analyses) = analyse("SM checks a card.");
        assert!(analyses[0].resolutions.is_empty());
        assert_eq!(
            st.drs.dump(),
            "drs([A,B],[gender(A,neut), named(A,simplemat), gender(B,neut), card(B), check(A,B)])"
        );
    }

    #[test]
    fn question_does_not_mutate() {
        let lex = simplemat_lexicon();
        let (st, _) = analyse(SIMPLEMAT_TEXT);
        let before = st.clone();
        let q = parse_text(&lex, "Who enters a card?").unwrap();
        let qa = st.question(&lex, &q[0]).unwrap();
        assert_eq!(st, before);
        assert_eq!(qa.wh.len(), 1);
        assert_eq!(
            qa.body.canonical_dump(),
            "drs([A,B],[card(B), enter(A,B)])"
        );
    }

    #[test]
    fn question_does_not_accommodate() {
        let lex = simplemat_lexicon();
        let st = DiscourseState::new();
        let q = parse_text(&lex, "Does SimpleMat check the card?").unwrap();
        let err = st.question(&lex, &q[0]).unwrap_err();
        assert_eq!(err.kind(), "unresolved-reference");
    }

    #[test]
    fn cleanup_is_idempotent_on_fixture() {
        let (st, _) = analyse(SIMPLEMAT_TEXT);
        let once = st.cleaned();
        assert_eq!(cleanup(&once), once);
    }
}
