//! Content-word lexicon, function-word table and spelling checker.
//!
//! The lexicon is full-form: every surface string a word can take is stored
//! explicitly together with its number feature. Function words are fixed and
//! live in [`FUNCTION_WORDS`]; content entries may never shadow them.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WordClass {
    CommonNoun,
    CompoundNoun,
    TransitiveVerb,
    IntransitiveVerb,
    Adjective,
    ProperName,
}

impl WordClass {
    pub fn is_noun(self) -> bool {
        matches!(self, WordClass::CommonNoun | WordClass::CompoundNoun)
    }

    pub fn is_verb(self) -> bool {
        matches!(self, WordClass::TransitiveVerb | WordClass::IntransitiveVerb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Number {
    Sg,
    Pl,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    Masc,
    Fem,
    Common,
    Neut,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Masc => "masc",
            Gender::Fem => "fem",
            Gender::Common => "common",
            Gender::Neut => "neut",
        }
    }

    pub fn parse(s: &str) -> Option<Gender> {
        match s {
            "masc" => Some(Gender::Masc),
            "fem" => Some(Gender::Fem),
            "common" => Some(Gender::Common),
            "neut" => Some(Gender::Neut),
            _ => None,
        }
    }

    /// Agreement test: `common` is compatible with both masculine and feminine.
    pub fn agrees(self, other: Gender) -> bool {
        use Gender::*;
        match (self, other) {
            (a, b) if a == b => true,
            (Common, Masc) | (Common, Fem) | (Masc, Common) | (Fem, Common) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Countability {
    Count,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkKind {
    Synonym,
    Abbreviation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    pub class: WordClass,
    pub forms: Vec<(String, Number)>,
    pub gender: Option<Gender>,
    pub countability: Option<Countability>,
    pub canonical: String,
    /// Display capitalization, proper names only.
    pub display: Option<String>,
    pub links: Vec<(LinkKind, String)>,
    /// Entry exists only because of an `abbrev`/`syn` record naming a proper name.
    #[serde(default)]
    pub implicit: bool,
}

impl LexEntry {
    pub fn common_noun(sg: &str, pl: &str, gender: Gender, countability: Countability) -> Self {
        let class = if sg.contains(' ') {
            WordClass::CompoundNoun
        } else {
            WordClass::CommonNoun
        };
        let mut forms = vec![(normalize_surface(sg), Number::Sg)];
        if !pl.trim().is_empty() {
            forms.push((normalize_surface(pl), Number::Pl));
        }
        LexEntry {
            class,
            forms,
            gender: Some(gender),
            countability: Some(countability),
            canonical: canonical_symbol(sg),
            display: None,
            links: Vec::new(),
            implicit: false,
        }
    }

    pub fn verb(transitive: bool, base: &str, third_sg: &str) -> Self {
        LexEntry {
            class: if transitive {
                WordClass::TransitiveVerb
            } else {
                WordClass::IntransitiveVerb
            },
            forms: vec![
                (normalize_surface(third_sg), Number::Sg),
                (normalize_surface(base), Number::Pl),
            ],
            gender: None,
            countability: None,
            canonical: canonical_symbol(base),
            display: None,
            links: Vec::new(),
            implicit: false,
        }
    }

    pub fn adjective(word: &str) -> Self {
        LexEntry {
            class: WordClass::Adjective,
            forms: vec![(normalize_surface(word), Number::NotApplicable)],
            gender: None,
            countability: None,
            canonical: canonical_symbol(word),
            display: None,
            links: Vec::new(),
            implicit: false,
        }
    }

    pub fn proper_name(canonical: &str, display: &str, gender: Gender) -> Self {
        let mut forms = vec![(normalize_surface(display), Number::Sg)];
        let canon = canonical_symbol(canonical);
        if !forms.iter().any(|(s, _)| *s == canon) && !canon.contains('_') {
            forms.push((canon.clone(), Number::Sg));
        }
        LexEntry {
            class: WordClass::ProperName,
            forms,
            gender: Some(gender),
            countability: None,
            canonical: canon,
            display: Some(display.split_whitespace().collect::<Vec<_>>().join(" ")),
            links: Vec::new(),
            implicit: false,
        }
    }

    pub fn with_link(mut self, kind: LinkKind, target: &str) -> Self {
        self.links.push((kind, canonical_symbol(target)));
        self
    }

    /// Surface form with the given number, if stored.
    pub fn form(&self, number: Number) -> Option<&str> {
        self.forms
            .iter()
            .find(|(_, n)| *n == number)
            .map(|(s, _)| s.as_str())
    }

    pub fn singular(&self) -> &str {
        self.form(Number::Sg)
            .or_else(|| self.forms.first().map(|(s, _)| s.as_str()))
            .unwrap_or(&self.canonical)
    }

    /// Text used when the entry is re-emitted in a sentence.
    pub fn display_form(&self, number: Number) -> String {
        if let Some(d) = &self.display {
            return d.clone();
        }
        self.form(number).unwrap_or_else(|| self.singular()).to_string()
    }

    fn validate(&self) -> Result<(), LexiconError> {
        if self.forms.is_empty() || self.forms.iter().any(|(s, _)| s.is_empty()) {
            return Err(LexiconError::Malformed(format!(
                "entry `{}` has no forms",
                self.canonical
            )));
        }
        if self.canonical.is_empty() {
            return Err(LexiconError::Malformed("empty canonical symbol".into()));
        }
        if self.class.is_noun() {
            if self.gender.is_none() {
                return Err(LexiconError::Malformed(format!(
                    "noun `{}` has no gender",
                    self.canonical
                )));
            }
            if self.countability == Some(Countability::Count)
                && (self.form(Number::Sg).is_none() || self.form(Number::Pl).is_none())
            {
                return Err(LexiconError::Malformed(format!(
                    "count noun `{}` needs singular and plural forms",
                    self.canonical
                )));
            }
        }
        if self.class == WordClass::ProperName && self.gender.is_none() {
            return Err(LexiconError::Malformed(format!(
                "proper name `{}` has no gender",
                self.canonical
            )));
        }
        Ok(())
    }
}

/// Lowercase, collapse internal whitespace to single spaces.
pub fn normalize_surface(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Predicate symbol for a surface form: lowercase, spaces become underscores.
pub fn canonical_symbol(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join("_")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionWord {
    Determiner,
    Pronoun,
    Conjunction,
    RelativePronoun,
    Auxiliary,
    Negator,
    WhWord,
}

/// Builtin function words. A word may belong to several categories
/// (`who`, `which`, `that`).
pub const FUNCTION_WORDS: &[(&str, FunctionWord)] = &[
    ("a", FunctionWord::Determiner),
    ("an", FunctionWord::Determiner),
    ("the", FunctionWord::Determiner),
    ("every", FunctionWord::Determiner),
    ("no", FunctionWord::Determiner),
    ("he", FunctionWord::Pronoun),
    ("she", FunctionWord::Pronoun),
    ("it", FunctionWord::Pronoun),
    ("they", FunctionWord::Pronoun),
    ("him", FunctionWord::Pronoun),
    ("her", FunctionWord::Pronoun),
    ("them", FunctionWord::Pronoun),
    ("and", FunctionWord::Conjunction),
    ("or", FunctionWord::Conjunction),
    ("if", FunctionWord::Conjunction),
    ("then", FunctionWord::Conjunction),
    ("either", FunctionWord::Conjunction),
    ("neither", FunctionWord::Conjunction),
    ("nor", FunctionWord::Conjunction),
    ("who", FunctionWord::RelativePronoun),
    ("which", FunctionWord::RelativePronoun),
    ("that", FunctionWord::RelativePronoun),
    ("does", FunctionWord::Auxiliary),
    ("do", FunctionWord::Auxiliary),
    ("is", FunctionWord::Auxiliary),
    ("are", FunctionWord::Auxiliary),
    ("not", FunctionWord::Negator),
    ("who", FunctionWord::WhWord),
    ("what", FunctionWord::WhWord),
    ("which", FunctionWord::WhWord),
];

pub fn is_function_word(word: &str) -> bool {
    let w = word.to_lowercase();
    FUNCTION_WORDS.iter().any(|(s, _)| *s == w)
}

pub fn function_word_kinds(word: &str) -> Vec<FunctionWord> {
    let w = word.to_lowercase();
    FUNCTION_WORDS
        .iter()
        .filter(|(s, _)| *s == w)
        .map(|(_, k)| *k)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("`{surface}` already maps to `{existing}`, not `{new}`")]
    DuplicateFormConflict {
        surface: String,
        existing: String,
        new: String,
    },
    #[error("`{from}` links to unknown entry `{to}`")]
    DanglingLink { from: String, to: String },
    #[error("links from `{0}` do not resolve to one representative")]
    CyclicLink(String),
    #[error("`{0}` is a builtin function word")]
    ShadowsFunctionWord(String),
    #[error("{0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl LexiconError {
    pub fn kind(&self) -> &'static str {
        match self {
            LexiconError::DuplicateFormConflict { .. } => "duplicate-form-conflict",
            LexiconError::DanglingLink { .. } => "dangling-link",
            LexiconError::CyclicLink(_) => "cyclic-link",
            LexiconError::ShadowsFunctionWord(_) => "function-word-shadowing",
            LexiconError::Malformed(_) => "malformed-entry",
            LexiconError::Parse { .. } => "parse-error",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Returns a new lexicon containing `e`. An existing entry with the same
    /// class and canonical symbol is replaced.
    pub fn add_entry(&self, e: LexEntry) -> Result<Lexicon, LexiconError> {
        let mut next = self.clone();
        next.insert(e)?;
        Ok(next)
    }

    fn insert(&mut self, mut e: LexEntry) -> Result<(), LexiconError> {
        for (s, _) in e.forms.iter_mut() {
            *s = normalize_surface(s);
        }
        e.validate()?;
        for (surface, _) in &e.forms {
            if !surface.contains(' ') && is_function_word(surface) {
                return Err(LexiconError::ShadowsFunctionWord(surface.clone()));
            }
        }
        for (surface, _) in &e.forms {
            for other in &self.entries {
                if other.class == e.class
                    && other.canonical != e.canonical
                    && other.forms.iter().any(|(s, _)| s == surface)
                {
                    return Err(LexiconError::DuplicateFormConflict {
                        surface: surface.clone(),
                        existing: other.canonical.clone(),
                        new: e.canonical.clone(),
                    });
                }
            }
        }
        for (_, target) in &e.links {
            if !self.entries.iter().any(|x| &x.canonical == target) {
                return Err(LexiconError::DanglingLink {
                    from: e.canonical.clone(),
                    to: target.clone(),
                });
            }
        }
        let previous = self
            .entries
            .iter()
            .position(|x| x.class == e.class && x.canonical == e.canonical);
        let saved = match previous {
            Some(i) => Some(std::mem::replace(&mut self.entries[i], e.clone())),
            None => {
                self.entries.push(e.clone());
                None
            }
        };
        if let Err(err) = self.check_links(&e.canonical) {
            match (previous, saved) {
                (Some(i), Some(old)) => self.entries[i] = old,
                _ => {
                    self.entries.pop();
                }
            }
            return Err(err);
        }
        Ok(())
    }

    fn check_links(&self, start: &str) -> Result<(), LexiconError> {
        let mut reps = HashSet::new();
        let mut stack = vec![(start.to_string(), 0usize)];
        while let Some((cur, depth)) = stack.pop() {
            if depth > self.entries.len() {
                return Err(LexiconError::CyclicLink(start.to_string()));
            }
            let links: Vec<&String> = self
                .entries
                .iter()
                .filter(|x| x.canonical == cur)
                .flat_map(|x| x.links.iter().map(|(_, t)| t))
                .collect();
            if links.is_empty() {
                reps.insert(cur);
            } else {
                for t in links {
                    stack.push((t.clone(), depth + 1));
                }
            }
        }
        if reps.len() == 1 {
            Ok(())
        } else {
            Err(LexiconError::CyclicLink(start.to_string()))
        }
    }

    /// Records a synonym or abbreviation link. A missing source entry is
    /// created as a proper name when the target is a proper name.
    pub fn add_link(
        &self,
        kind: LinkKind,
        from: &str,
        target: &str,
    ) -> Result<Lexicon, LexiconError> {
        let from = canonical_symbol(from);
        let target = canonical_symbol(target);
        let target_entry = self
            .entries
            .iter()
            .find(|x| x.canonical == target)
            .ok_or_else(|| LexiconError::DanglingLink {
                from: from.clone(),
                to: target.clone(),
            })?;
        let entry = match self.entries.iter().find(|x| x.canonical == from) {
            Some(existing) => {
                let mut e = existing.clone();
                if !e.links.contains(&(kind, target.clone())) {
                    e.links.push((kind, target.clone()));
                }
                e
            }
            None if target_entry.class == WordClass::ProperName => {
                let display = match kind {
                    LinkKind::Abbreviation => from.to_uppercase(),
                    LinkKind::Synonym => capitalize(&from.replace('_', " ")),
                };
                let gender = target_entry.gender.unwrap_or(Gender::Neut);
                let mut e = LexEntry::proper_name(&from, &display, gender).with_link(kind, &target);
                e.implicit = true;
                e
            }
            None => {
                return Err(LexiconError::DanglingLink {
                    from: target,
                    to: from,
                })
            }
        };
        self.add_entry(entry)
    }

    /// All entries having `surface` among their forms, with the matched number.
    pub fn lookup(&self, surface: &str) -> Vec<(&LexEntry, Number)> {
        let key = normalize_surface(surface);
        self.entries
            .iter()
            .filter_map(|e| {
                e.forms
                    .iter()
                    .find(|(s, _)| *s == key)
                    .map(|(_, n)| (e, *n))
            })
            .collect()
    }

    pub fn get(&self, class: WordClass, canonical: &str) -> Option<&LexEntry> {
        self.entries
            .iter()
            .find(|e| e.class == class && e.canonical == canonical)
    }

    pub fn find_canonical(&self, canonical: &str) -> Option<&LexEntry> {
        self.entries.iter().find(|e| e.canonical == canonical)
    }

    /// Follows synonym/abbreviation links to the representative entry.
    pub fn representative<'a>(&'a self, entry: &'a LexEntry) -> &'a LexEntry {
        let mut cur = entry;
        for _ in 0..=self.entries.len() {
            match cur.links.first() {
                Some((_, t)) => match self.find_canonical(t) {
                    Some(next) => cur = next,
                    None => break,
                },
                None => break,
            }
        }
        cur
    }

    /// Longest number of words in any multi-word form.
    pub fn max_form_words(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| e.forms.iter())
            .map(|(s, _)| s.split(' ').count())
            .max()
            .unwrap_or(1)
    }

    pub fn is_known(&self, word: &str) -> bool {
        is_function_word(word) || !self.lookup(word).is_empty()
    }

    /// Unknown alphabetic tokens of `text`, in order of first appearance.
    pub fn spell_check(&self, text: &str) -> Vec<String> {
        let words: Vec<&str> = text
            .split(|c: char| !c.is_alphabetic())
            .filter(|w| !w.is_empty())
            .collect();
        let max = self.max_form_words();
        let mut unknown: Vec<String> = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let span = self.longest_match(&words[i..], max);
            if span > 0 {
                i += span;
                continue;
            }
            if !is_function_word(words[i]) && !unknown.iter().any(|u| u == words[i]) {
                unknown.push(words[i].to_string());
            }
            i += 1;
        }
        unknown
    }

    /// Number of leading words (≥ 1) forming one known item, or 0.
    pub(crate) fn longest_match(&self, words: &[&str], max: usize) -> usize {
        for n in (2..=max.min(words.len())).rev() {
            let joined = words[..n].join(" ");
            if !self.lookup(&joined).is_empty() {
                return n;
            }
        }
        if !words.is_empty() && self.is_known(words[0]) {
            1
        } else {
            0
        }
    }

    pub fn save(&self) -> String {
        let mut out = String::from("% lexicon\n");
        for e in &self.entries {
            if !e.implicit {
                out.push_str(&record_line(e));
                out.push('\n');
            }
            for (kind, target) in &e.links {
                let name = match kind {
                    LinkKind::Synonym => "syn",
                    LinkKind::Abbreviation => "abbrev",
                };
                out.push_str(&format!("{name}({}, {target}).\n", e.canonical));
            }
        }
        out
    }

    pub fn load(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::new();
        let mut links = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            match parse_record(raw).map_err(|message| LexiconError::Parse {
                line: line_no,
                message,
            })? {
                None => {}
                Some(Record::Entry(e)) => {
                    lex.insert(e).map_err(|err| at_line(err, line_no))?;
                }
                Some(Record::Link(kind, from, to)) => links.push((line_no, kind, from, to)),
            }
        }
        for (line_no, kind, from, to) in links {
            lex = lex
                .add_link(kind, &from, &to)
                .map_err(|err| at_line(err, line_no))?;
        }
        Ok(lex)
    }

    /// Applies one record line (entry or link) as the lexical editor does.
    pub fn apply_record(&self, line: &str) -> Result<Lexicon, LexiconError> {
        match parse_record(line).map_err(|message| LexiconError::Parse { line: 1, message })? {
            None => Err(LexiconError::Parse {
                line: 1,
                message: "empty record".into(),
            }),
            Some(Record::Entry(e)) => self.add_entry(e),
            Some(Record::Link(kind, from, to)) => self.add_link(kind, &from, &to),
        }
    }
}

fn at_line(err: LexiconError, line: usize) -> LexiconError {
    match err {
        LexiconError::Parse { .. } => err,
        other => LexiconError::Parse {
            line,
            message: other.to_string(),
        },
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn quote_if_needed(s: &str) -> String {
    if s.chars().all(|c| c.is_ascii_lowercase() || c == '_') && !s.is_empty() {
        s.to_string()
    } else {
        format!("\"{s}\"")
    }
}

fn countability_str(c: Option<Countability>) -> &'static str {
    match c {
        Some(Countability::Mass) => "mass",
        _ => "count",
    }
}

/// Single record line for an entry, without its links.
pub fn record_line(e: &LexEntry) -> String {
    let gender = e.gender.unwrap_or(Gender::Neut);
    match e.class {
        WordClass::CommonNoun => format!(
            "noun({}, {}, {}, {}).",
            quote_if_needed(e.form(Number::Sg).unwrap_or("")),
            quote_if_needed(e.form(Number::Pl).unwrap_or("")),
            gender,
            countability_str(e.countability)
        ),
        WordClass::CompoundNoun => format!(
            "cnoun(\"{}\", \"{}\", {}, {}).",
            e.form(Number::Sg).unwrap_or(""),
            e.form(Number::Pl).unwrap_or(""),
            gender,
            countability_str(e.countability)
        ),
        WordClass::TransitiveVerb | WordClass::IntransitiveVerb => format!(
            "{}({}, {}).",
            if e.class == WordClass::TransitiveVerb {
                "tverb"
            } else {
                "iverb"
            },
            quote_if_needed(e.form(Number::Pl).unwrap_or("")),
            quote_if_needed(e.form(Number::Sg).unwrap_or(""))
        ),
        WordClass::Adjective => format!("adj({}).", quote_if_needed(e.singular())),
        WordClass::ProperName => format!(
            "pname({}, \"{}\", {}).",
            e.canonical,
            e.display.as_deref().unwrap_or(&e.canonical),
            gender
        ),
    }
}

enum Record {
    Entry(LexEntry),
    Link(LinkKind, String, String),
}

fn parse_record(raw: &str) -> Result<Option<Record>, String> {
    let line = strip_comment(raw).trim();
    if line.is_empty() {
        return Ok(None);
    }
    let body = line
        .strip_suffix('.')
        .ok_or_else(|| "record must end with `.`".to_string())?;
    let open = body.find('(').ok_or("expected `(`")?;
    let close = body.rfind(')').ok_or("expected `)`")?;
    if close != body.len() - 1 || close < open {
        return Err("malformed record".into());
    }
    let functor = body[..open].trim();
    let args = split_args(&body[open + 1..close])?;
    let arity = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!(
                "`{functor}` expects {n} arguments, found {}",
                args.len()
            ))
        }
    };
    let gender = |s: &str| Gender::parse(s).ok_or_else(|| format!("unknown gender `{s}`"));
    let count = |s: &str| match s {
        "count" => Ok(Countability::Count),
        "mass" => Ok(Countability::Mass),
        _ => Err(format!("unknown countability `{s}`")),
    };
    let entry = match functor {
        "noun" | "cnoun" => {
            arity(4)?;
            let e = LexEntry::common_noun(&args[0], &args[1], gender(&args[2])?, count(&args[3])?);
            let want = if functor == "cnoun" {
                WordClass::CompoundNoun
            } else {
                WordClass::CommonNoun
            };
            if e.class != want {
                return Err(format!("`{functor}` form `{}` has the wrong shape", args[0]));
            }
            e
        }
        "tverb" | "iverb" => {
            arity(2)?;
            LexEntry::verb(functor == "tverb", &args[0], &args[1])
        }
        "adj" => {
            arity(1)?;
            LexEntry::adjective(&args[0])
        }
        "pname" => {
            arity(3)?;
            LexEntry::proper_name(&args[0], &args[1], gender(&args[2])?)
        }
        "syn" | "abbrev" => {
            arity(2)?;
            let kind = if functor == "syn" {
                LinkKind::Synonym
            } else {
                LinkKind::Abbreviation
            };
            return Ok(Some(Record::Link(kind, args[0].clone(), args[1].clone())));
        }
        other => return Err(format!("unknown record type `{other}`")),
    };
    Ok(Some(Record::Entry(entry)))
}

fn strip_comment(raw: &str) -> &str {
    let mut quoted = false;
    for (i, c) in raw.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '%' if !quoted => return &raw[..i],
            _ => {}
        }
    }
    raw
}

fn split_args(s: &str) -> Result<Vec<String>, String> {
    let mut args = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut was_quoted = false;
    for c in s.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                was_quoted = true;
            }
            ',' if !quoted => {
                args.push(finish_arg(&cur, was_quoted)?);
                cur.clear();
                was_quoted = false;
            }
            _ => cur.push(c),
        }
    }
    if quoted {
        return Err("unterminated string".into());
    }
    args.push(finish_arg(&cur, was_quoted)?);
    Ok(args)
}

fn finish_arg(raw: &str, quoted: bool) -> Result<String, String> {
    let t = raw.trim().to_string();
    if t.is_empty() && !quoted {
        return Err("empty argument".into());
    }
    if !quoted && t.contains(char::is_whitespace) {
        return Err(format!("unquoted argument `{t}` contains spaces"));
    }
    Ok(t)
}
