//! DRS construction. Noun phrases are built with continuations, so a
//! quantified or coordinated noun phrase decides where the rest of its
//! clause ends up.

use std::mem;

use crate::lexicon::{Gender, Lexicon, Number, WordClass};
use crate::parser::*;
use crate::SourcePos;

use super::*;

struct Frame {
    drs: Drs,
    /// Referents accessible from here without being on the frame stack,
    /// i.e. those of the antecedent while building a consequent.
    extra: Vec<RefId>,
}

type K<'k, 's> = &'k mut dyn FnMut(&mut Builder<'s>, Arg);

pub(super) struct Builder<'s> {
    st: &'s mut DiscourseState,
    lex: &'s Lexicon,
    sentence: usize,
    frames: Vec<Frame>,
    anaphors: Vec<Anaphor>,
    wh: Vec<RefId>,
}

impl<'s> Builder<'s> {
    pub(super) fn new(st: &'s mut DiscourseState, lex: &'s Lexicon, sentence: usize) -> Self {
        let top = Frame {
            drs: mem::take(&mut st.drs),
            extra: Vec::new(),
        };
        Builder {
            st,
            lex,
            sentence,
            frames: vec![top],
            anaphors: Vec::new(),
            wh: Vec::new(),
        }
    }

    pub(super) fn tree(mut self, tree: &SyntaxTree) -> (Vec<Anaphor>, Vec<RefId>) {
        match &tree.root {
            Root::Declarative(s) => self.sentence(s),
            Root::Question(q) => {
                let body = self.with_frame(Vec::new(), |b| b.question(q));
                let wh = self.wh.clone();
                self.emit(Condition::Query(body, wh));
            }
        }
        let top = self.frames.pop().expect("top frame");
        self.st.drs = top.drs;
        (self.anaphors, self.wh)
    }

    fn at(&self, index: usize) -> SourcePos {
        SourcePos::new(self.sentence, index)
    }

    fn emit(&mut self, c: Condition) {
        self.frames.last_mut().expect("frame").drs.conditions.push(c);
    }

    fn with_frame(&mut self, extra: Vec<RefId>, f: impl FnOnce(&mut Self)) -> Drs {
        self.frames.push(Frame {
            drs: Drs::default(),
            extra,
        });
        f(self);
        self.frames.pop().expect("frame").drs
    }

    fn accessible(&self, before: RefId) -> Vec<RefId> {
        let mut out: Vec<RefId> = self
            .frames
            .iter()
            .flat_map(|f| f.drs.referents.iter().chain(f.extra.iter()).copied())
            .filter(|r| *r < before)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn alloc(&mut self, r: Referent, top: bool) -> RefId {
        let id = self.st.referents.len();
        self.st.referents.push(Referent { id, ..r });
        let frame = if top {
            self.frames.first_mut()
        } else {
            self.frames.last_mut()
        };
        frame.expect("frame").drs.referents.push(id);
        id
    }

    /// Predicate symbol of a content word, following synonym links.
    fn pred(&self, leaf: &Leaf) -> String {
        match leaf.kind {
            LeafKind::Content(class) => self
                .lex
                .get(class, &leaf.canonical)
                .map(|e| self.lex.representative(e).canonical.clone())
                .unwrap_or_else(|| leaf.canonical.clone()),
            LeafKind::Function => leaf.word(),
        }
    }

    fn noun_gender(&self, leaf: &Leaf) -> Gender {
        let class = match leaf.kind {
            LeafKind::Content(c) => c,
            LeafKind::Function => return Gender::Neut,
        };
        self.lex
            .get(class, &leaf.canonical)
            .and_then(|e| e.gender)
            .unwrap_or(Gender::Neut)
    }

    fn atom(&self, leaf: &Leaf, args: Vec<Arg>) -> Atom {
        Atom::new(self.pred(leaf), args, self.at(leaf.index))
    }

    fn np_text(b: &BasicNp) -> String {
        let mut words: Vec<String> = b.det.iter().map(Leaf::word).collect();
        words.extend(b.adjectives.iter().map(|a| a.surface.clone()));
        words.push(b.head.surface.clone());
        words.join(" ")
    }

    fn sentence(&mut self, s: &Sentence) {
        match s {
            Sentence::Simple(c) => self.clause(c, None),
            Sentence::IfThen {
                antecedent,
                consequent,
                ..
            } => {
                let ante = self.with_frame(Vec::new(), |b| b.sentence(antecedent));
                let extra = ante.referents.clone();
                let cons = self.with_frame(extra, |b| b.sentence(consequent));
                self.emit(Condition::IfThen(ante, cons));
            }
            Sentence::Coord { kind, parts, .. } => {
                self.coordinate(*kind, parts, &mut |b, p| b.sentence(p));
            }
        }
    }

    /// Conjunction in place, disjunction as `or`, neither-nor as `not(or)`.
    fn coordinate<T>(&mut self, kind: CoordKind, parts: &[T], each: &mut dyn FnMut(&mut Self, &T)) {
        match kind {
            CoordKind::And => parts.iter().for_each(|p| each(self, p)),
            CoordKind::Or | CoordKind::EitherOr => {
                let ds = parts
                    .iter()
                    .map(|p| self.with_frame(Vec::new(), |b| each(b, p)))
                    .collect();
                self.emit(Condition::Or(ds));
            }
            CoordKind::NeitherNor => {
                let d = self.with_frame(Vec::new(), |b| {
                    let ds = parts
                        .iter()
                        .map(|p| b.with_frame(Vec::new(), |b| each(b, p)))
                        .collect();
                    b.emit(Condition::Or(ds));
                });
                self.emit(Condition::Not(d));
            }
        }
    }

    fn clause(&mut self, c: &Clause, gap: Option<Arg>) {
        self.np(&c.subject, &mut |b, subj| b.vp(&c.vp, subj, gap.clone()));
    }

    fn question(&mut self, q: &Question) {
        match &q.wh_object {
            Some(w) => self.np(w, &mut |b, obj| b.clause(&q.body, Some(obj))),
            None => self.clause(&q.body, None),
        }
    }

    fn np(&mut self, np: &NounPhrase, k: K<'_, 's>) {
        match np {
            NounPhrase::Basic(b) => self.basic_np(b, k),
            NounPhrase::Coord { kind, items, .. } => {
                self.coordinate(*kind, items, &mut |b, item| b.np(item, &mut *k));
            }
        }
    }

    fn basic_np(&mut self, b: &BasicNp, k: K<'_, 's>) {
        match b.kind {
            NpKind::Indefinite => {
                let r = self.introduce(b, true);
                k(self, Arg::Ref(r));
            }
            NpKind::Universal => {
                let mut r = 0;
                let ante = self.with_frame(Vec::new(), |s| r = s.introduce(b, false));
                let extra = ante.referents.clone();
                let cons = self.with_frame(extra, |s| k(s, Arg::Ref(r)));
                self.emit(Condition::IfThen(ante, cons));
            }
            NpKind::Negative => {
                let d = self.with_frame(Vec::new(), |s| {
                    let r = s.introduce(b, false);
                    k(s, Arg::Ref(r));
                });
                self.emit(Condition::Not(d));
            }
            NpKind::Definite => {
                let r = self.definite(b);
                k(self, Arg::Ref(r));
            }
            NpKind::ProperName => {
                let r = self.proper_name(b);
                k(self, Arg::Ref(r));
            }
            NpKind::Pronoun => {
                let r = self.pronoun(b);
                k(self, Arg::Ref(r));
            }
            NpKind::Wh => {
                let r = self.wh_referent(b);
                self.wh.push(r);
                k(self, Arg::Ref(r));
            }
        }
    }

    /// New referent for a quantified noun phrase, in the current DRS.
    fn introduce(&mut self, b: &BasicNp, indefinite: bool) -> RefId {
        let noun = self.pred(&b.head);
        let gender = self.noun_gender(&b.head);
        let id = self.alloc(
            Referent {
                id: 0,
                gender,
                number: b.head.number,
                nouns: vec![noun],
                name: None,
                text: Self::np_text(b),
                indefinite,
                pos: self.at(b.head.index),
                alias_of: None,
            },
            false,
        );
        for a in &b.adjectives {
            let atom = self.atom(a, vec![Arg::Ref(id)]);
            self.emit(Condition::Atomic(atom));
        }
        self.emit(Condition::Gender(id, gender));
        let atom = self.atom(&b.head, vec![Arg::Ref(id)]);
        self.emit(Condition::Atomic(atom));
        if let Some(rel) = &b.relative {
            self.relative(rel, id);
        }
        id
    }

    fn wh_referent(&mut self, b: &BasicNp) -> RefId {
        if b.det.is_some() {
            return self.introduce(b, false);
        }
        let gender = if b.head.word() == "who" {
            Gender::Common
        } else {
            Gender::Neut
        };
        let id = self.alloc(
            Referent {
                id: 0,
                gender,
                number: Number::Sg,
                nouns: Vec::new(),
                name: None,
                text: b.head.word(),
                indefinite: false,
                pos: self.at(b.head.index),
                alias_of: None,
            },
            false,
        );
        self.emit(Condition::Gender(id, gender));
        id
    }

    fn anaphor(&mut self, b: &BasicNp, gender: Gender, number: Number, kind: AnaphorKind) -> RefId {
        let id = self.alloc(
            Referent {
                id: 0,
                gender,
                number,
                nouns: Vec::new(),
                name: None,
                text: Self::np_text(b),
                indefinite: false,
                pos: self.at(b.head.index),
                alias_of: None,
            },
            false,
        );
        self.emit(Condition::Gender(id, gender));
        self.emit(Condition::Pending(id));
        let candidates = self.accessible(id);
        self.anaphors.push(Anaphor {
            referent: id,
            kind,
            candidates,
            pos: self.at(b.head.index),
            text: Self::np_text(b),
        });
        id
    }

    fn definite(&mut self, b: &BasicNp) -> RefId {
        let noun = self.pred(&b.head);
        let gender = self.noun_gender(&b.head);
        // Adjectives are known before the referent exists; patch them in below.
        let placeholder = self.st.referents.len();
        let adjectives = b
            .adjectives
            .iter()
            .map(|a| self.atom(a, vec![Arg::Ref(placeholder)]))
            .collect();
        let id = self.anaphor(b, gender, b.head.number, AnaphorKind::Definite { noun, adjectives });
        debug_assert_eq!(id, placeholder);
        if let Some(rel) = &b.relative {
            self.relative(rel, id);
        }
        id
    }

    fn pronoun(&mut self, b: &BasicNp) -> RefId {
        let (gender, number) = match b.head.word().as_str() {
            "he" | "him" => (Gender::Masc, Number::Sg),
            "she" | "her" => (Gender::Fem, Number::Sg),
            "they" | "them" => (Gender::Common, Number::Pl),
            _ => (Gender::Neut, Number::Sg),
        };
        self.anaphor(b, gender, number, AnaphorKind::Pronoun)
    }

    fn proper_name(&mut self, b: &BasicNp) -> RefId {
        let entry = self.lex.get(WordClass::ProperName, &b.head.canonical);
        let rep = entry.map(|e| self.lex.representative(e));
        let target = rep
            .map(|e| e.canonical.clone())
            .unwrap_or_else(|| b.head.canonical.clone());
        let gender = entry.and_then(|e| e.gender).unwrap_or(Gender::Neut);
        let id = match self.st.names.get(&target).copied() {
            Some(_) if target != b.head.canonical => self.anaphor(
                b,
                gender,
                Number::Sg,
                AnaphorKind::Alias {
                    surface: b.head.canonical.clone(),
                    target: target.clone(),
                },
            ),
            Some(d) => d,
            None => {
                let display = rep
                    .and_then(|e| e.display.clone())
                    .unwrap_or_else(|| b.head.surface.clone());
                let gender = rep.and_then(|e| e.gender).unwrap_or(gender);
                let id = self.alloc(
                    Referent {
                        id: 0,
                        gender,
                        number: Number::Sg,
                        nouns: Vec::new(),
                        name: Some(target.clone()),
                        text: display,
                        indefinite: false,
                        pos: self.at(b.head.index),
                        alias_of: None,
                    },
                    true,
                );
                self.st.names.insert(target.clone(), id);
                let top = &mut self.frames[0].drs.conditions;
                top.push(Condition::Gender(id, gender));
                top.push(Condition::Atomic(Atom::new(
                    "named",
                    vec![Arg::Ref(id), Arg::Sym(target)],
                    SourcePos::new(self.sentence, b.head.index),
                )));
                id
            }
        };
        if let Some(rel) = &b.relative {
            self.relative(rel, id);
        }
        id
    }

    fn relative(&mut self, rel: &RelClause, head: RefId) {
        match &rel.body {
            RelBody::Subject(vp) => self.vp(vp, Arg::Ref(head), None),
            RelBody::Object { subject, vp } => {
                self.np(subject, &mut |b, subj| b.vp(vp, subj, Some(Arg::Ref(head))));
            }
        }
    }

    fn vp(&mut self, vp: &VerbPhrase, subj: Arg, gap: Option<Arg>) {
        match vp {
            VerbPhrase::Simple(v) if v.negation.is_some() => {
                let d = self.with_frame(Vec::new(), |b| b.vp_body(&v.body, subj, gap));
                self.emit(Condition::Not(d));
            }
            VerbPhrase::Simple(v) => self.vp_body(&v.body, subj, gap),
            VerbPhrase::Coord { kind, items, .. } => {
                self.coordinate(*kind, items, &mut |b, item| b.vp(item, subj.clone(), gap.clone()));
            }
        }
    }

    fn vp_body(&mut self, body: &VpBody, subj: Arg, gap: Option<Arg>) {
        match body {
            VpBody::Transitive { verb, object } => match object {
                Some(o) => self.np(o, &mut |b, obj| {
                    let atom = b.atom(verb, vec![subj.clone(), obj]);
                    b.emit(Condition::Atomic(atom));
                }),
                None => {
                    let obj = gap.expect("object gap is bound");
                    let atom = self.atom(verb, vec![subj, obj]);
                    self.emit(Condition::Atomic(atom));
                }
            },
            VpBody::Intransitive { verb } => {
                let atom = self.atom(verb, vec![subj]);
                self.emit(Condition::Atomic(atom));
            }
            VpBody::CopulaAdj { adjective } => {
                let atom = self.atom(adjective, vec![subj]);
                self.emit(Condition::Atomic(atom));
            }
            VpBody::CopulaNp { np } => {
                let NounPhrase::Basic(b) = np else {
                    return;
                };
                for a in &b.adjectives {
                    let atom = self.atom(a, vec![subj.clone()]);
                    self.emit(Condition::Atomic(atom));
                }
                let atom = self.atom(&b.head, vec![subj.clone()]);
                if let Arg::Ref(r) = subj {
                    let noun = atom.pred.clone();
                    let nouns = &mut self.st.referents[r].nouns;
                    if !nouns.contains(&noun) {
                        nouns.push(noun);
                    }
                }
                self.emit(Condition::Atomic(atom));
                if let (Some(rel), Arg::Ref(r)) = (&b.relative, subj) {
                    self.relative(rel, r);
                }
            }
        }
    }
}
