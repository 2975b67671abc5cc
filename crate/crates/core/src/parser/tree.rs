//! Typed syntax trees and their indented textual dump.

use std::fmt::Write;

use crate::features::FeatureStructure;
use crate::lexicon::{Number, WordClass};

use super::token::Token;

/// Half-open range of token indices within one sentence.
pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeafKind {
    Content(WordClass),
    Function,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub surface: String,
    /// Predicate symbol for content words, lowercase surface for function words.
    pub canonical: String,
    pub kind: LeafKind,
    pub number: Number,
    pub index: usize,
}

impl Leaf {
    pub fn word(&self) -> String {
        self.surface.to_lowercase()
    }

    pub fn span(&self) -> Span {
        (self.index, self.index + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordKind {
    And,
    Or,
    EitherOr,
    NeitherNor,
}

impl CoordKind {
    fn label(self) -> &'static str {
        match self {
            CoordKind::And => "coord(and)",
            CoordKind::Or => "coord(or)",
            CoordKind::EitherOr => "coord(either-or)",
            CoordKind::NeitherNor => "coord(neither-nor)",
        }
    }

    pub fn is_disjunctive(self) -> bool {
        !matches!(self, CoordKind::And)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree {
    pub sentence: usize,
    pub tokens: Vec<Token>,
    pub root: Root,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Declarative(Sentence),
    Question(Question),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sentence {
    Simple(Clause),
    IfThen {
        if_word: Leaf,
        antecedent: Box<Sentence>,
        then_word: Leaf,
        consequent: Box<Sentence>,
        span: Span,
    },
    Coord {
        kind: CoordKind,
        words: Vec<Leaf>,
        parts: Vec<Sentence>,
        span: Span,
    },
}

impl Sentence {
    pub fn span(&self) -> Span {
        match self {
            Sentence::Simple(c) => c.span,
            Sentence::IfThen { span, .. } | Sentence::Coord { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub subject: NounPhrase,
    pub vp: VerbPhrase,
    pub span: Span,
    pub features: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    /// Fronted auxiliary or copula of a yes/no question or object wh-question.
    pub aux: Option<Leaf>,
    /// Fronted wh-phrase filling the object gap of `body`.
    pub wh_object: Option<NounPhrase>,
    pub body: Clause,
    pub span: Span,
}

impl Question {
    pub fn is_wh(&self) -> bool {
        self.wh_object.is_some() || self.body.subject.contains_wh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NpKind {
    Indefinite,
    Definite,
    Universal,
    Negative,
    ProperName,
    Pronoun,
    Wh,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicNp {
    pub kind: NpKind,
    pub det: Option<Leaf>,
    pub adjectives: Vec<Leaf>,
    pub head: Leaf,
    pub relative: Option<Box<RelClause>>,
    pub span: Span,
    pub features: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NounPhrase {
    Basic(BasicNp),
    Coord {
        kind: CoordKind,
        words: Vec<Leaf>,
        items: Vec<NounPhrase>,
        span: Span,
        features: FeatureStructure,
    },
}

impl NounPhrase {
    pub fn span(&self) -> Span {
        match self {
            NounPhrase::Basic(b) => b.span,
            NounPhrase::Coord { span, .. } => *span,
        }
    }

    pub fn features(&self) -> &FeatureStructure {
        match self {
            NounPhrase::Basic(b) => &b.features,
            NounPhrase::Coord { features, .. } => features,
        }
    }

    pub fn contains_wh(&self) -> bool {
        match self {
            NounPhrase::Basic(b) => b.kind == NpKind::Wh,
            NounPhrase::Coord { items, .. } => items.iter().any(NounPhrase::contains_wh),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelClause {
    pub pronoun: Leaf,
    pub body: RelBody,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelBody {
    /// The modified noun fills the subject: `who enters a card`.
    Subject(VerbPhrase),
    /// The modified noun fills the object gap: `that SimpleMat checks`.
    Object {
        subject: NounPhrase,
        vp: VerbPhrase,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerbPhrase {
    Simple(SimpleVp),
    Coord {
        kind: CoordKind,
        words: Vec<Leaf>,
        items: Vec<VerbPhrase>,
        span: Span,
        features: FeatureStructure,
    },
}

impl VerbPhrase {
    pub fn span(&self) -> Span {
        match self {
            VerbPhrase::Simple(v) => v.span,
            VerbPhrase::Coord { span, .. } => *span,
        }
    }

    pub fn features(&self) -> &FeatureStructure {
        match self {
            VerbPhrase::Simple(v) => &v.features,
            VerbPhrase::Coord { features, .. } => features,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleVp {
    /// `does`/`do` before a base-form verb, or the copula `is`/`are`.
    pub aux: Option<Leaf>,
    pub negation: Option<Leaf>,
    pub body: VpBody,
    pub span: Span,
    pub features: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VpBody {
    /// `object` is `None` for a gap bound by a relative pronoun or wh-phrase.
    Transitive {
        verb: Leaf,
        object: Option<NounPhrase>,
    },
    Intransitive {
        verb: Leaf,
    },
    CopulaAdj {
        adjective: Leaf,
    },
    CopulaNp {
        np: NounPhrase,
    },
}

impl SyntaxTree {
    /// Every leaf in surface order.
    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        match &self.root {
            Root::Declarative(s) => sentence_leaves(s, &mut out),
            Root::Question(q) => {
                out.extend(q.aux.iter());
                if let Some(w) = &q.wh_object {
                    np_leaves(w, &mut out);
                }
                clause_leaves(&q.body, &mut out);
            }
        }
        out.sort_by_key(|l| l.index);
        out
    }

    pub fn is_question(&self) -> bool {
        matches!(self.root, Root::Question(_))
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let n = self.tokens.len();
        match &self.root {
            Root::Declarative(s) => {
                line(&mut out, 0, "sentence", (0, n), None, None);
                dump_sentence(&mut out, 1, s);
            }
            Root::Question(q) => {
                line(&mut out, 0, "query", (0, n), None, None);
                if let Some(a) = &q.aux {
                    dump_leaf(&mut out, 1, "aux", a);
                }
                if let Some(w) = &q.wh_object {
                    dump_np(&mut out, 1, w);
                }
                dump_clause(&mut out, 1, &q.body);
            }
        }
        out
    }
}

fn sentence_leaves<'a>(s: &'a Sentence, out: &mut Vec<&'a Leaf>) {
    match s {
        Sentence::Simple(c) => clause_leaves(c, out),
        Sentence::IfThen {
            if_word,
            antecedent,
            then_word,
            consequent,
            ..
        } => {
            out.push(if_word);
            sentence_leaves(antecedent, out);
            out.push(then_word);
            sentence_leaves(consequent, out);
        }
        Sentence::Coord { words, parts, .. } => {
            out.extend(words.iter());
            for p in parts {
                sentence_leaves(p, out);
            }
        }
    }
}

fn clause_leaves<'a>(c: &'a Clause, out: &mut Vec<&'a Leaf>) {
    np_leaves(&c.subject, out);
    vp_leaves(&c.vp, out);
}

pub(crate) fn np_leaves<'a>(np: &'a NounPhrase, out: &mut Vec<&'a Leaf>) {
    match np {
        NounPhrase::Basic(b) => {
            out.extend(b.det.iter());
            out.extend(b.adjectives.iter());
            out.push(&b.head);
            if let Some(r) = &b.relative {
                out.push(&r.pronoun);
                match &r.body {
                    RelBody::Subject(vp) => vp_leaves(vp, out),
                    RelBody::Object { subject, vp } => {
                        np_leaves(subject, out);
                        vp_leaves(vp, out);
                    }
                }
            }
        }
        NounPhrase::Coord { words, items, .. } => {
            out.extend(words.iter());
            for i in items {
                np_leaves(i, out);
            }
        }
    }
}

fn vp_leaves<'a>(vp: &'a VerbPhrase, out: &mut Vec<&'a Leaf>) {
    match vp {
        VerbPhrase::Simple(v) => {
            out.extend(v.aux.iter());
            out.extend(v.negation.iter());
            match &v.body {
                VpBody::Transitive { verb, object } => {
                    out.push(verb);
                    if let Some(o) = object {
                        np_leaves(o, out);
                    }
                }
                VpBody::Intransitive { verb } => out.push(verb),
                VpBody::CopulaAdj { adjective } => out.push(adjective),
                VpBody::CopulaNp { np } => np_leaves(np, out),
            }
        }
        VerbPhrase::Coord { words, items, .. } => {
            out.extend(words.iter());
            for i in items {
                vp_leaves(i, out);
            }
        }
    }
}

fn line(
    out: &mut String,
    depth: usize,
    label: &str,
    span: Span,
    features: Option<&FeatureStructure>,
    leaf: Option<&Leaf>,
) {
    let _ = write!(out, "{}{}[{}..{}]", "  ".repeat(depth), label, span.0, span.1);
    let _ = write!(out, " {}", features.cloned().unwrap_or_default());
    if let Some(l) = leaf {
        let _ = write!(out, " \"{}\"", l.surface);
        if let LeafKind::Content(_) = l.kind {
            let _ = write!(out, " -> {}", l.canonical);
        }
    }
    out.push('\n');
}

fn dump_leaf(out: &mut String, depth: usize, label: &str, l: &Leaf) {
    line(out, depth, label, l.span(), None, Some(l));
}

fn dump_sentence(out: &mut String, depth: usize, s: &Sentence) {
    match s {
        Sentence::Simple(c) => dump_clause(out, depth, c),
        Sentence::IfThen {
            if_word,
            antecedent,
            then_word,
            consequent,
            span,
        } => {
            line(out, depth, "composite(if-then)", *span, None, None);
            dump_leaf(out, depth + 1, "conj", if_word);
            dump_sentence(out, depth + 1, antecedent);
            dump_leaf(out, depth + 1, "conj", then_word);
            dump_sentence(out, depth + 1, consequent);
        }
        Sentence::Coord {
            kind,
            words,
            parts,
            span,
        } => {
            line(out, depth, kind.label(), *span, None, None);
            for w in words {
                dump_leaf(out, depth + 1, "conj", w);
            }
            for p in parts {
                dump_sentence(out, depth + 1, p);
            }
        }
    }
}

fn dump_clause(out: &mut String, depth: usize, c: &Clause) {
    line(out, depth, "clause", c.span, Some(&c.features), None);
    dump_np(out, depth + 1, &c.subject);
    dump_vp(out, depth + 1, &c.vp);
}

fn dump_np(out: &mut String, depth: usize, np: &NounPhrase) {
    match np {
        NounPhrase::Basic(b) => {
            line(out, depth, "np", b.span, Some(&b.features), None);
            if let Some(d) = &b.det {
                dump_leaf(out, depth + 1, "det", d);
            }
            for a in &b.adjectives {
                dump_leaf(out, depth + 1, "adj", a);
            }
            let head = match b.kind {
                NpKind::ProperName => "name",
                NpKind::Pronoun => "pron",
                NpKind::Wh if b.det.is_none() => "wh",
                _ => "noun",
            };
            dump_leaf(out, depth + 1, head, &b.head);
            if let Some(r) = &b.relative {
                line(out, depth + 1, "rel-clause", r.span, None, None);
                dump_leaf(out, depth + 2, "relpro", &r.pronoun);
                match &r.body {
                    RelBody::Subject(vp) => dump_vp(out, depth + 2, vp),
                    RelBody::Object { subject, vp } => {
                        dump_np(out, depth + 2, subject);
                        dump_vp(out, depth + 2, vp);
                    }
                }
            }
        }
        NounPhrase::Coord {
            kind,
            words,
            items,
            span,
            features,
        } => {
            line(out, depth, &format!("np-{}", kind.label()), *span, Some(features), None);
            for w in words {
                dump_leaf(out, depth + 1, "conj", w);
            }
            for i in items {
                dump_np(out, depth + 1, i);
            }
        }
    }
}

fn dump_vp(out: &mut String, depth: usize, vp: &VerbPhrase) {
    match vp {
        VerbPhrase::Simple(v) => {
            line(out, depth, "vp", v.span, Some(&v.features), None);
            if let Some(a) = &v.aux {
                dump_leaf(out, depth + 1, "aux", a);
            }
            if let Some(n) = &v.negation {
                dump_leaf(out, depth + 1, "neg", n);
            }
            match &v.body {
                VpBody::Transitive { verb, object } => {
                    dump_leaf(out, depth + 1, "verb", verb);
                    match object {
                        Some(o) => dump_np(out, depth + 1, o),
                        None => {
                            let _ = writeln!(out, "{}gap", "  ".repeat(depth + 1));
                        }
                    }
                }
                VpBody::Intransitive { verb } => dump_leaf(out, depth + 1, "verb", verb),
                VpBody::CopulaAdj { adjective } => dump_leaf(out, depth + 1, "adj", adjective),
                VpBody::CopulaNp { np } => dump_np(out, depth + 1, np),
            }
        }
        VerbPhrase::Coord {
            kind,
            words,
            items,
            span,
            features,
        } => {
            line(out, depth, &format!("vp-{}", kind.label()), *span, Some(features), None);
            for w in words {
                dump_leaf(out, depth + 1, "conj", w);
            }
            for i in items {
                dump_vp(out, depth + 1, i);
            }
        }
    }
}
