//! The stage-then-accept dialog over one specification.
//!
//! Submitted sentences are parsed, resolved and paraphrased into a staged
//! discourse. Accepting translates the staged part into clauses; discarding
//! drops it so the user can rephrase.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::discourse::{DiscourseState, Drs};
use crate::executor::{self, Env, ExecOptions, ExecResult};
use crate::lexicon::Lexicon;
use crate::logic::{solve, Atom, Clause, KnowledgeBase, DEFAULT_DEPTH_LIMIT};
use crate::parser::paraphrase::paraphrase;
use crate::parser::{parse_text_at, ParseError, SyntaxTree};
use crate::translator::{generate_answer, translate, translate_query, ReferentIndex, RefMap, Unit};
use crate::{Error, ErrorReport, SourcePos, Warning};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StagedSentence {
    pub text: String,
    pub paraphrase: String,
    pub warnings: Vec<Warning>,
}

/// Result of [`Session::submit`]. Sentences before the first failing one
/// stay staged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Submission {
    pub status: &'static str,
    pub sentences: Vec<StagedSentence>,
    /// Pre-cleanup DRS of the whole discourse including staged sentences.
    pub drs: String,
    pub error: Option<ErrorReport>,
}

impl Submission {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn paraphrase(&self) -> String {
        self.sentences
            .iter()
            .map(|s| s.paraphrase.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub answer: String,
    /// The goal in clause syntax.
    pub goal: String,
    /// Per solution, wh-variable to description.
    pub bindings: Vec<BTreeMap<String, String>>,
    pub incomplete: bool,
}

/// What a session file stores: enough to replay the session.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionFile {
    /// Lexicon records added on top of the base lexicon, in order.
    pub lexicon: Vec<String>,
    /// Accepted sentences, in order.
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone)]
struct Staged {
    discourse: DiscourseState,
    sentences: Vec<StagedSentence>,
}

#[derive(Debug, Clone)]
pub struct Session {
    lex: Lexicon,
    overlay: Vec<String>,
    discourse: DiscourseState,
    staged: Option<Staged>,
    refs: RefMap,
    kb: KnowledgeBase,
    units: Vec<Unit>,
    log: Vec<String>,
    warnings: Vec<Warning>,
    depth_limit: usize,
}

/// Splits after each `.` or `?`; a trailing fragment is kept.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        cur.push(c);
        if c == '.' || c == '?' {
            out.push(cur.trim().to_string());
            cur.clear();
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn single(lex: &Lexicon, text: &str, sentence: usize) -> Result<SyntaxTree, Error> {
    let mut trees = parse_text_at(lex, text, sentence)?;
    match trees.len() {
        1 => Ok(trees.remove(0)),
        n => Err(ParseError::Syntax {
            pos: SourcePos::new(sentence, 0),
            expected: "one sentence".into(),
            found: format!("{n}"),
        }
        .into()),
    }
}

impl Session {
    pub fn new(lex: Lexicon) -> Self {
        Session {
            lex,
            overlay: Vec::new(),
            discourse: DiscourseState::new(),
            staged: None,
            refs: RefMap::new(),
            kb: KnowledgeBase::new(),
            units: Vec::new(),
            log: Vec::new(),
            warnings: Vec::new(),
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }

    /// Bounds derivation depth for queries.
    pub fn set_depth_limit(&mut self, limit: usize) {
        self.depth_limit = limit;
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lex
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn discourse(&self) -> &DiscourseState {
        &self.discourse
    }

    pub fn refs(&self) -> &RefMap {
        &self.refs
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    /// Accepted sentences in order.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Warnings raised while accepting.
    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn has_staged(&self) -> bool {
        self.staged.is_some()
    }

    pub fn kb_dump(&self) -> String {
        self.kb.dump()
    }

    /// Accepted discourse after cleanup.
    pub fn drs(&self) -> Drs {
        self.discourse.cleaned()
    }

    fn current(&self) -> &DiscourseState {
        self.staged.as_ref().map_or(&self.discourse, |s| &s.discourse)
    }

    fn sentence_count(&self) -> usize {
        self.log.len() + self.staged.as_ref().map_or(0, |s| s.sentences.len())
    }

    /// Parses, resolves and stages every sentence of `text` in order,
    /// stopping at the first failure.
    pub fn submit(&mut self, text: &str) -> Submission {
        let mut staged = self.staged.take().unwrap_or_else(|| Staged {
            discourse: self.discourse.clone(),
            sentences: Vec::new(),
        });
        let mut added = Vec::new();
        let mut error = None;
        for s in split_sentences(text) {
            let n = self.log.len() + staged.sentences.len();
            match self.stage_one(&mut staged.discourse, &s, n) {
                Ok(st) => {
                    staged.sentences.push(st.clone());
                    added.push(st);
                }
                Err(e) => {
                    error = Some(e.report());
                    break;
                }
            }
        }
        if !staged.sentences.is_empty() {
            self.staged = Some(staged);
        }
        Submission {
            status: if error.is_none() { "ok" } else { "error" },
            sentences: added,
            drs: self.current().drs.dump(),
            error,
        }
    }

    fn stage_one(&self, d: &mut DiscourseState, text: &str, n: usize) -> Result<StagedSentence, Error> {
        let tree = single(&self.lex, text, n)?;
        if tree.is_question() {
            return Err(ParseError::Syntax {
                pos: SourcePos::new(n, tree.tokens.len().saturating_sub(1)),
                expected: "a declarative sentence".into(),
                found: "?".into(),
            }
            .into());
        }
        let a = d.add_sentence(&self.lex, &tree)?;
        Ok(StagedSentence {
            text: text.to_string(),
            paraphrase: paraphrase(&tree, &self.lex, &a.resolutions, &d.referents),
            warnings: a.warnings,
        })
    }

    /// Drops staged sentences.
    pub fn discard(&mut self) -> usize {
        self.staged.take().map_or(0, |s| s.sentences.len())
    }

    /// Translates the staged sentences and asserts their clauses. Returns
    /// the warnings raised, including violated integrity constraints.
    pub fn accept(&mut self) -> Result<Vec<Warning>, Error> {
        let Some(staged) = self.staged.take() else {
            return Ok(Vec::new());
        };
        match self.commit(&staged) {
            Ok(w) => Ok(w),
            Err(e) => {
                self.staged = Some(staged);
                Err(e)
            }
        }
    }

    fn commit(&mut self, staged: &Staged) -> Result<Vec<Warning>, Error> {
        let before = self.discourse.cleaned();
        let after = staged.discourse.cleaned();
        debug_assert!(after.conditions.starts_with(&before.conditions));
        let delta = Drs {
            referents: after
                .referents
                .iter()
                .filter(|r| !before.referents.contains(r))
                .copied()
                .collect(),
            conditions: after.conditions[before.conditions.len()..].to_vec(),
        };
        let mut refs = self.refs.clone();
        let mut kb = self.kb.clone();
        let tr = translate(&delta, &mut refs, &mut kb)?;
        for c in tr.clauses {
            kb.assert_clause(c)?;
        }
        let mut warnings: Vec<Warning> = staged
            .sentences
            .iter()
            .flat_map(|s| s.warnings.iter().cloned())
            .chain(tr.warnings)
            .collect();
        let first = SourcePos::new(self.log.len(), 0);
        for c in kb.violated_constraints() {
            warnings.push(Warning::new(first, format!("integrity constraint violated: {}", c.dump_line())));
        }
        self.refs = refs;
        self.kb = kb;
        self.units.extend(tr.units);
        self.discourse = staged.discourse.clone();
        self.log.extend(staged.sentences.iter().map(|s| s.text.clone()));
        self.warnings.extend(warnings.iter().cloned());
        Ok(warnings)
    }

    /// Submits and accepts in one step, failing on the first error.
    pub fn add(&mut self, text: &str) -> Result<Vec<Warning>, Error> {
        let sub = self.submit(text);
        if let Some(e) = sub.error {
            self.discard();
            return Err(resubmit_error(self, text, e));
        }
        self.accept()
    }

    /// Answers a question against the accepted sentences.
    pub fn query(&self, text: &str) -> Result<Answer, Error> {
        let n = self.sentence_count();
        let tree = single(&self.lex, text, n)?;
        if !tree.is_question() {
            return Err(ParseError::Syntax {
                pos: SourcePos::new(n, tree.tokens.len().saturating_sub(1)),
                expected: "a question".into(),
                found: ".".into(),
            }
            .into());
        }
        let qa = self.discourse.question(&self.lex, &tree)?;
        let goal = translate_query(&qa, &self.refs)?;
        let mut sols = solve(&self.kb, &goal.literals, self.depth_limit);
        let mut results = Vec::new();
        for s in sols.by_ref() {
            results.push(s?);
        }
        let incomplete = sols.incomplete();
        let idx = ReferentIndex::build(&self.kb, &self.lex, &self.refs, &qa.referents);
        let bindings = results
            .iter()
            .map(|s| {
                goal.wh
                    .iter()
                    .filter_map(|(v, _)| s.get(v).map(|t| (v.clone(), idx.describe(t))))
                    .collect()
            })
            .collect();
        Ok(Answer {
            answer: generate_answer(&goal, &results, incomplete, &idx),
            goal: goal.to_string(),
            bindings,
            incomplete,
        })
    }

    /// Runs the accepted specification. Scaffold sentences are added to a
    /// copy of the session first; those naming unknown individuals, like
    /// `John is a customer.`, become facts. The session is not changed.
    pub fn execute(&self, scaffold: Option<&str>, opts: &ExecOptions, env: &mut dyn Env) -> Result<ExecResult, Error> {
        let mut scratch = self.clone();
        scratch.discard();
        let mut extra: Vec<Atom> = Vec::new();
        for s in scaffold.map(split_sentences).unwrap_or_default() {
            if let Err(e) = scratch.add(&s) {
                match executor::interpret_answer(&s, "", &scratch.lex) {
                    Some(a) if !a.pred.is_empty() && s.contains(' ') => extra.push(a),
                    _ => return Err(e),
                }
            }
        }
        let mut kb = scratch.kb.clone();
        for a in extra {
            kb.assert_clause(Clause::fact(a))?;
        }
        let plan = executor::plan(&scratch.units, &scratch.lex);
        let idx = ReferentIndex::build(&kb, &scratch.lex, &scratch.refs, &scratch.discourse.referents);
        Ok(executor::run(&plan, &kb, &scratch.lex, idx, opts, env)?)
    }

    /// Adds one lexicon record. Staged sentences are kept; resubmit them to
    /// use the new entry.
    pub fn edit_lexicon(&mut self, record: &str) -> Result<(), Error> {
        self.lex = self.lex.apply_record(record)?;
        self.overlay.push(record.trim().to_string());
        Ok(())
    }

    pub fn save(&self) -> SessionFile {
        SessionFile {
            lexicon: self.overlay.clone(),
            sentences: self.log.clone(),
        }
    }

    pub fn save_json(&self) -> String {
        serde_json::to_string_pretty(&self.save()).expect("session file serializes")
    }

    /// Rebuilds a session by replaying `file` over `base`.
    pub fn load(base: Lexicon, file: &SessionFile) -> Result<Session, Error> {
        let mut s = Session::new(base);
        for r in &file.lexicon {
            s.edit_lexicon(r)?;
        }
        for t in &file.sentences {
            s.add(t)?;
        }
        Ok(s)
    }

    pub fn load_json(base: Lexicon, json: &str) -> Result<Session, Error> {
        Session::load(base, &serde_json::from_str(json)?)
    }
}

/// Recovers the typed error behind a failed submission.
fn resubmit_error(s: &Session, text: &str, report: ErrorReport) -> Error {
    let mut d = s.discourse.clone();
    for (i, t) in split_sentences(text).iter().enumerate() {
        if let Err(e) = s.stage_one(&mut d, t, s.log.len() + i) {
            return e;
        }
    }
    unreachable!("submission failed without error: {report}")
}
