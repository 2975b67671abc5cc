//! Top-down recursive-descent parser for the controlled-English subset.
//!
//! The production set is documented in `docs/grammar.md`. Alternatives are
//! tried in order with local backtracking inside one sentence. Agreement
//! failures abort the sentence immediately instead of backtracking.

use crate::features::{FeatureStructure, AGR, CASE, GENDER};
use crate::lexicon::{LexEntry, Lexicon, Number, WordClass};
use crate::SourcePos;

use super::token::{Token, TokenKind};
use super::tree::*;
use super::ParseError;

enum Stop {
    NoMatch,
    Fatal(ParseError),
}

type P<T> = Result<T, Stop>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Subject,
    Object,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VerbForm {
    Finite,
    Base,
}

const THIRD_SG: &str = "third-sg";
const THIRD_PL: &str = "third-pl";

fn agr_of(n: Number) -> &'static str {
    if n == Number::Pl {
        THIRD_PL
    } else {
        THIRD_SG
    }
}

pub(super) struct Parser<'a> {
    lex: &'a Lexicon,
    tokens: &'a [Token],
    sentence: usize,
    pos: usize,
    furthest: usize,
    expected: String,
}

impl<'a> Parser<'a> {
    pub(super) fn new(lex: &'a Lexicon, tokens: &'a [Token]) -> Self {
        let sentence = tokens.first().map(|t| t.pos.sentence).unwrap_or(0);
        Parser {
            lex,
            tokens,
            sentence,
            pos: 0,
            furthest: 0,
            expected: String::new(),
        }
    }

    pub(super) fn parse(mut self) -> Result<SyntaxTree, ParseError> {
        let terminator = self
            .tokens
            .last()
            .filter(|t| t.kind == TokenKind::Punct && (t.surface == "." || t.surface == "?"))
            .map(|t| t.surface.clone());
        let Some(terminator) = terminator else {
            return Err(ParseError::Syntax {
                pos: SourcePos::new(self.sentence, self.tokens.len()),
                expected: "`.` or `?`".into(),
                found: "end of input".into(),
            });
        };
        let root = if terminator == "?" {
            self.question().map(Root::Question)
        } else {
            self.composite().map(Root::Declarative)
        };
        let root = match root {
            Ok(r) if self.pos + 1 == self.tokens.len() => r,
            Ok(_) => {
                self.miss(&format!("`{terminator}`"));
                return Err(self.syntax_error());
            }
            Err(Stop::Fatal(e)) => return Err(e),
            Err(Stop::NoMatch) => return Err(self.syntax_error()),
        };
        Ok(SyntaxTree {
            sentence: self.sentence,
            tokens: self.tokens.to_vec(),
            root,
        })
    }

    fn syntax_error(&self) -> ParseError {
        let found = self
            .tokens
            .get(self.furthest)
            .map(|t| format!("`{}`", t.surface))
            .unwrap_or_else(|| "end of input".into());
        ParseError::Syntax {
            pos: SourcePos::new(self.sentence, self.furthest),
            expected: if self.expected.is_empty() {
                "a sentence".into()
            } else {
                self.expected.clone()
            },
            found,
        }
    }

    fn miss(&mut self, expected: &str) -> Stop {
        if self.pos > self.furthest || self.expected.is_empty() {
            self.furthest = self.pos;
            self.expected = expected.to_string();
        } else if self.pos == self.furthest && !self.expected.contains(expected) {
            self.expected = format!("{} or {}", self.expected, expected);
        }
        Stop::NoMatch
    }

    fn agreement(&self, at: usize, detail: String) -> Stop {
        Stop::Fatal(ParseError::Agreement {
            pos: SourcePos::new(self.sentence, at),
            detail,
        })
    }

    fn word_at(&self, i: usize) -> Option<String> {
        self.tokens.get(i).filter(|t| t.is_word()).map(Token::lower)
    }

    fn word(&self) -> Option<String> {
        self.word_at(self.pos)
    }

    fn is(&self, w: &str) -> bool {
        self.word().as_deref() == Some(w)
    }

    fn entries_at(&self, i: usize) -> Vec<(&'a LexEntry, Number)> {
        match self.tokens.get(i) {
            Some(t) if t.is_word() => self.lex.lookup(&t.surface),
            _ => Vec::new(),
        }
    }

    fn function_leaf(&mut self) -> Leaf {
        let t = &self.tokens[self.pos];
        let leaf = Leaf {
            surface: t.surface.clone(),
            canonical: t.lower(),
            kind: LeafKind::Function,
            number: Number::NotApplicable,
            index: self.pos,
        };
        self.pos += 1;
        leaf
    }

    fn expect(&mut self, w: &str) -> P<Leaf> {
        if self.is(w) {
            Ok(self.function_leaf())
        } else {
            Err(self.miss(&format!("`{w}`")))
        }
    }

    fn content_leaf(&mut self, e: &LexEntry, n: Number) -> Leaf {
        let t = &self.tokens[self.pos];
        let leaf = Leaf {
            surface: t.surface.clone(),
            canonical: e.canonical.clone(),
            kind: LeafKind::Content(e.class),
            number: n,
            index: self.pos,
        };
        self.pos += 1;
        leaf
    }

    fn take_class(
        &mut self,
        accept: impl Fn(&LexEntry, Number) -> bool,
        expected: &str,
    ) -> P<(Leaf, &'a LexEntry)> {
        let found = self
            .entries_at(self.pos)
            .into_iter()
            .find(|(e, n)| accept(e, *n));
        match found {
            Some((e, n)) => Ok((self.content_leaf(e, n), e)),
            None => Err(self.miss(expected)),
        }
    }

    fn has_class(&self, i: usize, pred: impl Fn(WordClass) -> bool) -> bool {
        self.entries_at(i).iter().any(|(e, _)| pred(e.class))
    }

    fn starts_vp(&self, i: usize) -> bool {
        matches!(
            self.word_at(i).as_deref(),
            Some("does" | "do" | "is" | "are")
        ) || self.has_class(i, WordClass::is_verb)
    }

    // composite := 'if' composite [','] 'then' composite | disjunction
    fn composite(&mut self) -> P<Sentence> {
        let start = self.pos;
        if self.is("if") {
            let if_word = self.function_leaf();
            let antecedent = self.composite()?;
            if self.tokens.get(self.pos).map(|t| t.surface.as_str()) == Some(",") {
                self.pos += 1;
            }
            let then_word = self.expect("then")?;
            let consequent = self.composite()?;
            return Ok(Sentence::IfThen {
                if_word,
                antecedent: Box::new(antecedent),
                then_word,
                consequent: Box::new(consequent),
                span: (start, self.pos),
            });
        }
        self.disjunction()
    }

    // disjunction := 'either' conjunction 'or' conjunction
    //              | 'neither' conjunction 'nor' conjunction
    //              | conjunction ('or' conjunction)*
    fn disjunction(&mut self) -> P<Sentence> {
        let start = self.pos;
        for (first, second, kind) in [
            ("either", "or", CoordKind::EitherOr),
            ("neither", "nor", CoordKind::NeitherNor),
        ] {
            if self.is(first) {
                let w1 = self.function_leaf();
                let attempt = (|| -> P<Sentence> {
                    let a = self.conjunction()?;
                    let w2 = self.expect(second)?;
                    let b = self.conjunction()?;
                    Ok(Sentence::Coord {
                        kind,
                        words: vec![w1.clone(), w2],
                        parts: vec![a, b],
                        span: (start, self.pos),
                    })
                })();
                match attempt {
                    Err(Stop::NoMatch) => self.pos = start,
                    other => return other,
                }
            }
        }
        let first = self.conjunction()?;
        self.coordinate_sentences(first, "or", CoordKind::Or, start, Self::conjunction)
    }

    // conjunction := clause ('and' clause)*
    fn conjunction(&mut self) -> P<Sentence> {
        let start = self.pos;
        let first = Sentence::Simple(self.clause()?);
        self.coordinate_sentences(first, "and", CoordKind::And, start, |p| {
            p.clause().map(Sentence::Simple)
        })
    }

    fn coordinate_sentences(
        &mut self,
        first: Sentence,
        word: &str,
        kind: CoordKind,
        start: usize,
        mut next: impl FnMut(&mut Self) -> P<Sentence>,
    ) -> P<Sentence> {
        let mut parts = vec![first];
        let mut words = Vec::new();
        while self.is(word) {
            let save = self.pos;
            let w = self.function_leaf();
            match next(self) {
                Ok(s) => {
                    words.push(w);
                    parts.push(s);
                }
                Err(Stop::NoMatch) => {
                    self.pos = save;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if parts.len() == 1 {
            return Ok(parts.pop().unwrap());
        }
        Ok(Sentence::Coord {
            kind,
            words,
            parts,
            span: (start, self.pos),
        })
    }

    // clause := np_coord(nom) vp_coord
    fn clause(&mut self) -> P<Clause> {
        let start = self.pos;
        let subject = self.np_coord(Role::Subject)?;
        let vp = self.vp_coord(VerbForm::Finite)?;
        let features = self.subject_agreement(&subject, vp.features(), vp.span().0)?;
        Ok(Clause {
            subject,
            vp,
            span: (start, self.pos),
            features,
        })
    }

    fn subject_agreement(
        &self,
        subject: &NounPhrase,
        verb: &FeatureStructure,
        at: usize,
    ) -> P<FeatureStructure> {
        let want = FeatureStructure::new().with(CASE, "nom");
        let agr = verb.atom(AGR).map(|a| FeatureStructure::new().with(AGR, a));
        subject
            .features()
            .unify(&want)
            .and_then(|f| match &agr {
                Some(a) => f.unify(a),
                None => Some(f),
            })
            .ok_or_else(|| {
                self.agreement(
                    at,
                    format!(
                        "subject {} does not agree with verb {}",
                        subject.features(),
                        verb
                    ),
                )
            })
    }

    // np_coord := 'either' np 'or' np | 'neither' np 'nor' np
    //           | np ('and' np)* | np ('or' np)*
    fn np_coord(&mut self, role: Role) -> P<NounPhrase> {
        let start = self.pos;
        for (first, second, kind) in [
            ("either", "or", CoordKind::EitherOr),
            ("neither", "nor", CoordKind::NeitherNor),
        ] {
            if self.is(first) {
                let w1 = self.function_leaf();
                let a = self.np(role)?;
                let w2 = self.expect(second)?;
                let b = self.np(role)?;
                let features = coord_features(kind, &[&a, &b]);
                return Ok(NounPhrase::Coord {
                    kind,
                    words: vec![w1, w2],
                    items: vec![a, b],
                    span: (start, self.pos),
                    features,
                });
            }
        }
        let first = self.np(role)?;
        let (word, kind) = if self.is("and") {
            ("and", CoordKind::And)
        } else if self.is("or") {
            ("or", CoordKind::Or)
        } else {
            return Ok(first);
        };
        let mut items = vec![first];
        let mut words = Vec::new();
        while self.is(word) {
            let save = self.pos;
            let w = self.function_leaf();
            match self.np(role) {
                // An object conjunct followed by a verb is really the subject
                // of a coordinated sentence.
                Ok(_) if role == Role::Object && self.starts_vp(self.pos) => {
                    self.pos = save;
                    break;
                }
                Ok(n) => {
                    words.push(w);
                    items.push(n);
                }
                Err(Stop::NoMatch) => {
                    self.pos = save;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        let refs: Vec<&NounPhrase> = items.iter().collect();
        let features = coord_features(kind, &refs);
        Ok(NounPhrase::Coord {
            kind,
            words,
            items,
            span: (start, self.pos),
            features,
        })
    }

    // np := det adj* noun [rel] | proper-name | pronoun
    fn np(&mut self, role: Role) -> P<NounPhrase> {
        let start = self.pos;
        let case = match role {
            Role::Subject => "nom",
            Role::Object => "acc",
        };
        let w = self.word();
        let basic = match w.as_deref() {
            Some(d @ ("a" | "an" | "the" | "every" | "no")) => {
                let kind = match d {
                    "the" => NpKind::Definite,
                    "every" => NpKind::Universal,
                    "no" => NpKind::Negative,
                    _ => NpKind::Indefinite,
                };
                let det = self.function_leaf();
                self.noun_group(kind, Some(det), start)?
            }
            Some(p @ ("he" | "she" | "it" | "they" | "him" | "her" | "them")) => {
                let (pcase, agr, gender) = match p {
                    "he" => (Some("nom"), THIRD_SG, Some("masc")),
                    "him" => (Some("acc"), THIRD_SG, Some("masc")),
                    "she" => (Some("nom"), THIRD_SG, Some("fem")),
                    "her" => (Some("acc"), THIRD_SG, Some("fem")),
                    "it" => (None, THIRD_SG, Some("neut")),
                    "they" => (Some("nom"), THIRD_PL, None),
                    _ => (Some("acc"), THIRD_PL, None),
                };
                let head = self.function_leaf();
                let mut features = FeatureStructure::new().with(AGR, agr);
                if let Some(c) = pcase {
                    features = features.with(CASE, c);
                }
                if let Some(g) = gender {
                    features = features.with(GENDER, g);
                }
                BasicNp {
                    kind: NpKind::Pronoun,
                    det: None,
                    adjectives: Vec::new(),
                    head,
                    relative: None,
                    span: (start, self.pos),
                    features,
                }
            }
            _ => {
                let (head, entry) =
                    self.take_class(|e, _| e.class == WordClass::ProperName, "a noun phrase")?;
                let features = FeatureStructure::new()
                    .with(AGR, THIRD_SG)
                    .with(GENDER, entry.gender.map(|g| g.as_str()).unwrap_or("neut"));
                let mut np = BasicNp {
                    kind: NpKind::ProperName,
                    det: None,
                    adjectives: Vec::new(),
                    head,
                    relative: None,
                    span: (start, self.pos),
                    features,
                };
                np.relative = self.relative(&np.features)?.map(Box::new);
                np.span = (start, self.pos);
                np
            }
        };
        let with_case = FeatureStructure::new().with(CASE, case);
        let features = basic.features.unify(&with_case).ok_or_else(|| {
            self.agreement(
                start,
                format!("`{}` cannot appear in {} position", basic.head.surface, case),
            )
        })?;
        Ok(NounPhrase::Basic(BasicNp { features, ..basic }))
    }

    fn noun_group(&mut self, kind: NpKind, det: Option<Leaf>, start: usize) -> P<BasicNp> {
        let mut adjectives = Vec::new();
        while self.has_class(self.pos, |c| c == WordClass::Adjective)
            && !self.has_class(self.pos, WordClass::is_noun)
        {
            let (leaf, _) = self.take_class(|e, _| e.class == WordClass::Adjective, "an adjective")?;
            adjectives.push(leaf);
        }
        let noun_at = self.pos;
        let (head, entry) = self.take_class(|e, _| e.class.is_noun(), "a noun")?;
        let number = head.number;
        let det_word = det.as_ref().map(Leaf::word);
        if matches!(det_word.as_deref(), Some("a" | "an" | "every")) && number == Number::Pl {
            return Err(self.agreement(
                noun_at,
                format!(
                    "determiner `{}` needs a singular noun",
                    det_word.unwrap_or_default()
                ),
            ));
        }
        let features = FeatureStructure::new()
            .with(AGR, agr_of(number))
            .with(GENDER, entry.gender.map(|g| g.as_str()).unwrap_or("neut"));
        let relative = self.relative(&features)?.map(Box::new);
        Ok(BasicNp {
            kind,
            det,
            adjectives,
            head,
            relative,
            span: (start, self.pos),
            features,
        })
    }

    // rel := ('who'|'which'|'that') (vp | np_coord vp_gap)
    fn relative(&mut self, head: &FeatureStructure) -> P<Option<RelClause>> {
        if !matches!(self.word().as_deref(), Some("who" | "which" | "that")) {
            return Ok(None);
        }
        let start = self.pos;
        let pronoun = self.function_leaf();
        let attempt = if self.starts_vp(self.pos) {
            self.vp_simple(VerbForm::Finite, false).and_then(|vp| {
                let vp = VerbPhrase::Simple(vp);
                let subject_like = head.unify(&FeatureStructure::new().with(CASE, "nom"));
                let agr = vp.features().atom(AGR).unwrap_or(THIRD_SG);
                match subject_like.and_then(|f| f.unify(&FeatureStructure::new().with(AGR, agr))) {
                    Some(_) => Ok(RelBody::Subject(vp)),
                    None => Err(self.agreement(
                        vp.span().0,
                        format!("relative clause verb {} does not agree with {}", vp.features(), head),
                    )),
                }
            })
        } else {
            self.np_coord(Role::Subject).and_then(|subject| {
                let vp = VerbPhrase::Simple(self.vp_simple(VerbForm::Finite, true)?);
                self.subject_agreement(&subject, vp.features(), vp.span().0)?;
                Ok(RelBody::Object { subject, vp })
            })
        };
        match attempt {
            Ok(body) => Ok(Some(RelClause {
                pronoun,
                body,
                span: (start, self.pos),
            })),
            Err(Stop::NoMatch) => {
                self.pos = start;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    // vp_coord := vp ('and' vp)* | vp ('or' vp)*
    fn vp_coord(&mut self, form: VerbForm) -> P<VerbPhrase> {
        let start = self.pos;
        let first = VerbPhrase::Simple(self.vp_simple(form, false)?);
        let (word, kind) = if self.is("and") {
            ("and", CoordKind::And)
        } else if self.is("or") {
            ("or", CoordKind::Or)
        } else {
            return Ok(first);
        };
        let mut items = vec![first];
        let mut words = Vec::new();
        while self.is(word) {
            let save = self.pos;
            let w = self.function_leaf();
            match self.vp_simple(form, false) {
                Ok(v) => {
                    words.push(w);
                    items.push(VerbPhrase::Simple(v));
                }
                Err(Stop::NoMatch) => {
                    self.pos = save;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        let mut features = FeatureStructure::new();
        for item in &items {
            features = features.unify(item.features()).ok_or_else(|| {
                self.agreement(
                    item.span().0,
                    "coordinated verb phrases disagree in number".into(),
                )
            })?;
        }
        Ok(VerbPhrase::Coord {
            kind,
            words,
            items,
            span: (start, self.pos),
            features,
        })
    }

    // vp := ('does'|'do') 'not' verb-base [object]
    //     | ('is'|'are') ['not'] (adjective | indefinite-np)
    //     | verb-finite [object]
    fn vp_simple(&mut self, form: VerbForm, gap: bool) -> P<SimpleVp> {
        let start = self.pos;
        let mut aux = None;
        let mut negation = None;
        let mut agr = None;
        let w = self.word();
        match (form, w.as_deref()) {
            (VerbForm::Finite, Some(a @ ("does" | "do"))) => {
                agr = Some(if a == "does" { THIRD_SG } else { THIRD_PL });
                aux = Some(self.function_leaf());
                negation = Some(self.expect("not")?);
                return self.verb_body(VerbForm::Base, gap, aux, negation, agr, start);
            }
            (VerbForm::Finite, Some(c @ ("is" | "are"))) => {
                if gap {
                    return Err(self.miss("a transitive verb"));
                }
                agr = Some(if c == "is" { THIRD_SG } else { THIRD_PL });
                aux = Some(self.function_leaf());
                if self.is("not") {
                    negation = Some(self.function_leaf());
                }
                let body = self.copula_body()?;
                return Ok(self.finish_vp(aux, negation, body, agr, start));
            }
            (VerbForm::Base, _) if self.is("not") => {
                negation = Some(self.function_leaf());
            }
            _ => {}
        }
        self.verb_body(form, gap, aux, negation, agr, start)
    }

    fn copula_body(&mut self) -> P<VpBody> {
        if self.has_class(self.pos, |c| c == WordClass::Adjective) {
            let (adjective, _) =
                self.take_class(|e, _| e.class == WordClass::Adjective, "an adjective")?;
            return Ok(VpBody::CopulaAdj { adjective });
        }
        if matches!(self.word().as_deref(), Some("a" | "an")) {
            let np = self.np(Role::Object)?;
            return Ok(VpBody::CopulaNp { np });
        }
        Err(self.miss("an adjective or an indefinite noun phrase"))
    }

    fn verb_body(
        &mut self,
        form: VerbForm,
        gap: bool,
        aux: Option<Leaf>,
        negation: Option<Leaf>,
        agr: Option<&'static str>,
        start: usize,
    ) -> P<SimpleVp> {
        let wanted = |n: Number| match form {
            VerbForm::Base => n == Number::Pl,
            VerbForm::Finite => n == Number::Sg || n == Number::Pl,
        };
        let entries = self.entries_at(self.pos);
        let transitive = entries
            .iter()
            .find(|(e, n)| e.class == WordClass::TransitiveVerb && wanted(*n))
            .copied();
        let intransitive = entries
            .iter()
            .find(|(e, n)| e.class == WordClass::IntransitiveVerb && wanted(*n))
            .copied();
        let expected = match form {
            VerbForm::Base => "a verb in base form",
            VerbForm::Finite => "a verb",
        };
        if let Some((e, n)) = transitive {
            let save = self.pos;
            let verb = self.content_leaf(e, n);
            let agr = agr.unwrap_or(agr_of(n));
            if gap {
                return Ok(self.finish_vp(aux, negation, VpBody::Transitive { verb, object: None }, Some(agr), start));
            }
            match self.np_coord(Role::Object) {
                Ok(object) => {
                    let body = VpBody::Transitive {
                        verb,
                        object: Some(object),
                    };
                    return Ok(self.finish_vp(aux, negation, body, Some(agr), start));
                }
                Err(Stop::NoMatch) if intransitive.is_some() => self.pos = save,
                Err(e) => return Err(e),
            }
        }
        if let Some((e, n)) = intransitive {
            if gap {
                return Err(self.miss("a transitive verb"));
            }
            let verb = self.content_leaf(e, n);
            let agr = agr.unwrap_or(agr_of(n));
            return Ok(self.finish_vp(aux, negation, VpBody::Intransitive { verb }, Some(agr), start));
        }
        Err(self.miss(expected))
    }

    fn finish_vp(
        &self,
        aux: Option<Leaf>,
        negation: Option<Leaf>,
        body: VpBody,
        agr: Option<&str>,
        start: usize,
    ) -> SimpleVp {
        let mut features = FeatureStructure::new();
        if let Some(a) = agr {
            features = features.with(AGR, a);
        }
        SimpleVp {
            aux,
            negation,
            body,
            span: (start, self.pos),
            features,
        }
    }

    // question := ('does'|'do') np_coord vp-base '?'
    //           | ('is'|'are') np_coord ['not'] (adjective | indefinite-np) '?'
    //           | wh-np ('does'|'do') np_coord verb-base-with-gap '?'
    //           | wh-np vp_coord '?'
    fn question(&mut self) -> P<Question> {
        let start = self.pos;
        match self.word().as_deref() {
            Some(a @ ("does" | "do")) => {
                let agr = if a == "does" { THIRD_SG } else { THIRD_PL };
                let aux = self.function_leaf();
                let body = self.question_body(agr, false)?;
                Ok(Question {
                    aux: Some(aux),
                    wh_object: None,
                    body,
                    span: (start, self.pos),
                })
            }
            Some(c @ ("is" | "are")) => {
                let agr = if c == "is" { THIRD_SG } else { THIRD_PL };
                let aux = self.function_leaf();
                let subject = self.np_coord(Role::Subject)?;
                let vp_start = self.pos;
                let negation = if self.is("not") {
                    Some(self.function_leaf())
                } else {
                    None
                };
                let body = self.copula_body()?;
                let vp = VerbPhrase::Simple(self.finish_vp(None, negation, body, Some(agr), vp_start));
                let features = self.subject_agreement(&subject, vp.features(), aux.index)?;
                Ok(Question {
                    aux: Some(aux),
                    wh_object: None,
                    body: Clause {
                        subject,
                        vp,
                        span: (start + 1, self.pos),
                        features,
                    },
                    span: (start, self.pos),
                })
            }
            Some("who" | "what" | "which") => {
                let wh = self.wh_np()?;
                if let Some(a @ ("does" | "do")) = self.word().as_deref() {
                    let agr = if a == "does" { THIRD_SG } else { THIRD_PL };
                    let aux = self.function_leaf();
                    let body = self.question_body(agr, true)?;
                    return Ok(Question {
                        aux: Some(aux),
                        wh_object: Some(wh),
                        body,
                        span: (start, self.pos),
                    });
                }
                let vp = self.vp_coord(VerbForm::Finite)?;
                let features = self.subject_agreement(&wh, vp.features(), vp.span().0)?;
                Ok(Question {
                    aux: None,
                    wh_object: None,
                    body: Clause {
                        subject: wh,
                        vp,
                        span: (start, self.pos),
                        features,
                    },
                    span: (start, self.pos),
                })
            }
            _ => Err(self.miss("a question word or auxiliary")),
        }
    }

    fn question_body(&mut self, agr: &'static str, gap: bool) -> P<Clause> {
        let start = self.pos;
        let subject = self.np_coord(Role::Subject)?;
        let mut vp = self.vp_simple(VerbForm::Base, gap)?;
        vp.features = FeatureStructure::new().with(AGR, agr);
        let vp = VerbPhrase::Simple(vp);
        let features = self.subject_agreement(&subject, vp.features(), start.saturating_sub(1))?;
        Ok(Clause {
            subject,
            vp,
            span: (start, self.pos),
            features,
        })
    }

    // wh-np := 'who' | 'what' | 'which' adj* noun
    fn wh_np(&mut self) -> P<NounPhrase> {
        let start = self.pos;
        if self.is("which") {
            let det = self.function_leaf();
            return self
                .noun_group(NpKind::Wh, Some(det), start)
                .map(NounPhrase::Basic);
        }
        let head = match self.word().as_deref() {
            Some("who" | "what") => self.function_leaf(),
            _ => return Err(self.miss("a question word")),
        };
        let mut features = FeatureStructure::new().with(AGR, THIRD_SG);
        if head.word() == "what" {
            features = features.with(GENDER, "neut");
        }
        Ok(NounPhrase::Basic(BasicNp {
            kind: NpKind::Wh,
            det: None,
            adjectives: Vec::new(),
            head,
            relative: None,
            span: (start, self.pos),
            features,
        }))
    }
}

fn coord_features(kind: CoordKind, items: &[&NounPhrase]) -> FeatureStructure {
    let agr = match kind {
        CoordKind::And => THIRD_PL,
        _ => items
            .last()
            .and_then(|n| n.features().atom(AGR))
            .unwrap_or(THIRD_SG),
    };
    let mut features = FeatureStructure::new().with(AGR, agr);
    if let Some(c) = items.first().and_then(|n| n.features().atom(CASE)) {
        features = features.with(CASE, c);
    }
    features
}
