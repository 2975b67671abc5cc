//! Event simulation of an accepted specification.
//!
//! Top-level verb facts become event steps in DRS order, other facts are
//! state. Conditionals become rules that are armed once the steps before
//! them have run and are swept after every step.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{canonical_symbol, Lexicon, Number, WordClass};
use crate::logic::{solve, Atom, Clause, KbError, KnowledgeBase, Literal, SolveError, Term, DEFAULT_DEPTH_LIMIT};
use crate::translator::{ReferentIndex, Unit};
use crate::SourcePos;

pub const FIRING_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Event,
    State,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub atom: Atom,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedRule {
    pub body: Vec<Literal>,
    pub consequent: Vec<Step>,
    /// Number of top-level steps that precede the rule.
    pub armed_after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecutionPlan {
    pub steps: Vec<Step>,
    pub rules: Vec<PlannedRule>,
}

impl ExecutionPlan {
    pub fn events(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.kind == StepKind::Event)
    }
}

fn is_event(lex: &Lexicon, pred: &str) -> bool {
    lex.get(WordClass::TransitiveVerb, pred).is_some()
        || lex.get(WordClass::IntransitiveVerb, pred).is_some()
}

fn step(lex: &Lexicon, atom: &Atom, pos: SourcePos) -> Step {
    Step {
        kind: if is_event(lex, &atom.pred) {
            StepKind::Event
        } else {
            StepKind::State
        },
        atom: atom.clone(),
        pos,
    }
}

pub fn plan(units: &[Unit], lex: &Lexicon) -> ExecutionPlan {
    let mut p = ExecutionPlan::default();
    for u in units {
        match u {
            Unit::Fact { atom, pos } => p.steps.push(step(lex, atom, *pos)),
            Unit::Rule { body, heads } => p.rules.push(PlannedRule {
                body: body.clone(),
                consequent: heads.iter().map(|(a, pos)| step(lex, a, *pos)).collect(),
                armed_after: p.steps.len(),
            }),
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Trace,
    Hook(String),
}

/// Actions per event predicate; unbound predicates trace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interface {
    bindings: BTreeMap<(String, usize), Action>,
}

impl Interface {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(mut self, pred: &str, arity: usize, action: Action) -> Self {
        self.bindings.insert((pred.to_string(), arity), action);
        self
    }

    pub fn action(&self, pred: &str, arity: usize) -> &Action {
        self.bindings
            .get(&(pred.to_string(), arity))
            .unwrap_or(&Action::Trace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    /// Unary predicate the answer will be asserted for.
    pub predicate: String,
    pub noun: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExecEvent {
    Trace { text: String },
    Hook { hook: String, args: Vec<serde_json::Value> },
    Prompt { text: String },
    Warning { text: String },
    Done,
    Error { text: String },
}

/// Where prompts are answered and events go.
pub trait Env {
    /// `None` refuses the prompt and aborts the run.
    fn answer(&mut self, prompt: &Prompt) -> Option<String>;
    fn emit(&mut self, event: ExecEvent);
}

/// Answers from a fixed list, consumed in prompt order.
#[derive(Debug, Clone, Default)]
pub struct ScriptedEnv {
    answers: VecDeque<String>,
    pub events: Vec<ExecEvent>,
}

impl ScriptedEnv {
    pub fn new<S: Into<String>>(answers: impl IntoIterator<Item = S>) -> Self {
        ScriptedEnv {
            answers: answers.into_iter().map(Into::into).collect(),
            events: Vec::new(),
        }
    }
}

impl Env for ScriptedEnv {
    fn answer(&mut self, _: &Prompt) -> Option<String> {
        self.answers.pop_front()
    }

    fn emit(&mut self, event: ExecEvent) {
        self.events.push(event);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("no answer to `{prompt}`")]
    PromptRefused { prompt: String },
    #[error("more than {0} rule firings")]
    CapExceeded(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Kb(#[from] KbError),
}

impl ExecError {
    pub fn kind(&self) -> &'static str {
        match self {
            ExecError::PromptRefused { .. } => "prompt-refused",
            ExecError::CapExceeded(_) => "cap-exceeded",
            ExecError::Solve(e) => e.kind(),
            ExecError::Kb(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExecOptions {
    pub interface: Interface,
    /// Print raw terms instead of English descriptions.
    pub raw: bool,
    pub cap: usize,
    pub depth_limit: usize,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            interface: Interface::new(),
            raw: false,
            cap: FIRING_CAP,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExecResult {
    pub trace: Vec<String>,
    /// Facts asserted during the run, in order, duplicates included once.
    pub asserted: Vec<Atom>,
    pub kb: KnowledgeBase,
}

/// Reads an answer as a fact: `John` or `John is a customer.`.
pub fn interpret_answer(text: &str, predicate: &str, lex: &Lexicon) -> Option<Atom> {
    let text = text.trim().trim_end_matches('.').trim();
    if text.is_empty() {
        return None;
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    if let Some(i) = words.iter().position(|w| *w == "is") {
        let (name, rest) = (&words[..i], &words[i + 1..]);
        let noun = match rest {
            ["a" | "an", noun @ ..] if !noun.is_empty() && !name.is_empty() => noun.join(" "),
            _ => return None,
        };
        let entry = lex
            .lookup(&noun)
            .into_iter()
            .find(|(e, n)| e.class.is_noun() && *n == Number::Sg)
            .map(|(e, _)| lex.representative(e))?;
        return Some(Atom::new(
            entry.canonical.clone(),
            vec![Term::Const(canonical_symbol(&name.join(" ")))],
        ));
    }
    if words.iter().all(|w| w.chars().all(|c| c.is_alphanumeric() || c == '-')) {
        return Some(Atom::new(predicate, vec![Term::Const(canonical_symbol(text))]));
    }
    None
}

fn article(noun: &str) -> &'static str {
    match noun.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

fn hook_arg(t: &Term) -> serde_json::Value {
    match t {
        Term::Skolem(n) => serde_json::Value::from(*n),
        Term::Const(c) => serde_json::Value::from(c.clone()),
        other => serde_json::Value::from(other.to_string()),
    }
}

struct Run<'a> {
    lex: &'a Lexicon,
    opts: &'a ExecOptions,
    env: &'a mut dyn Env,
    idx: ReferentIndex,
    kb: KnowledgeBase,
    trace: Vec<String>,
    asserted: Vec<Atom>,
    mentioned: BTreeSet<Term>,
    fired: BTreeSet<(usize, Vec<Term>)>,
    ever_fired: BTreeSet<usize>,
    firings: usize,
    warned_incomplete: bool,
}

impl Run<'_> {
    fn assert(&mut self, atom: Atom) -> Result<(), ExecError> {
        if !self.kb.has_fact(&atom) {
            self.kb.assert_clause(Clause::fact(atom.clone()))?;
            self.asserted.push(atom);
            self.idx.add_facts(&self.kb, self.lex);
        }
        Ok(())
    }

    fn describe_object(&self, t: &Term, event_pos: SourcePos) -> String {
        let first_indefinite = !self.mentioned.contains(t)
            && !self.idx.is_name(t)
            && self.idx.intro(t).is_some_and(|i| {
                i.indefinite && i.pos.sentence == event_pos.sentence && i.pos.token > event_pos.token
            });
        match (first_indefinite, self.idx.noun(t)) {
            (true, Some(noun)) => format!("{} {noun}", article(noun)),
            _ => self.idx.describe(t),
        }
    }

    fn line(&mut self, atom: &Atom, pos: SourcePos) -> String {
        if self.opts.raw {
            return format!("event: {atom}");
        }
        let verb = self
            .lex
            .get(WordClass::TransitiveVerb, &atom.pred)
            .or_else(|| self.lex.get(WordClass::IntransitiveVerb, &atom.pred))
            .and_then(|e| e.form(Number::Sg))
            .unwrap_or(&atom.pred)
            .to_string();
        let mut words = vec![];
        if let Some(s) = atom.args.first() {
            words.push(self.idx.describe(s));
        }
        words.push(verb);
        for o in atom.args.iter().skip(1) {
            words.push(self.describe_object(o, pos));
        }
        self.mentioned.extend(atom.args.iter().cloned());
        format!("event: {}", words.join(" "))
    }

    fn execute(&mut self, s: &Step) -> Result<(), ExecError> {
        if s.kind == StepKind::Event {
            match self.opts.interface.action(&s.atom.pred, s.atom.args.len()).clone() {
                Action::Trace => {
                    let text = self.line(&s.atom, s.pos);
                    self.trace.push(text.clone());
                    self.env.emit(ExecEvent::Trace { text });
                }
                Action::Hook(hook) => self.env.emit(ExecEvent::Hook {
                    hook,
                    args: s.atom.args.iter().map(hook_arg).collect(),
                }),
            }
        }
        self.assert(s.atom.clone())
    }

    fn bindings(&mut self, body: &[Literal]) -> Result<Vec<crate::logic::Subst>, ExecError> {
        let mut sols = solve(&self.kb, body, self.opts.depth_limit);
        let mut out = Vec::new();
        for s in sols.by_ref() {
            out.push(s?);
        }
        if sols.incomplete() && !self.warned_incomplete {
            self.warned_incomplete = true;
            self.env.emit(ExecEvent::Warning {
                text: "search depth exceeded while checking a rule".into(),
            });
        }
        Ok(out)
    }

    /// Fires armed rules until nothing new fires.
    fn sweep(&mut self, rules: &[PlannedRule], steps_done: usize) -> Result<(), ExecError> {
        loop {
            let mut fired_any = false;
            for (i, rule) in rules.iter().enumerate() {
                if rule.armed_after > steps_done {
                    continue;
                }
                for s in self.bindings(&rule.body)? {
                    let key: Vec<Term> = s.iter().map(|(_, t)| t.clone()).collect();
                    if !self.fired.insert((i, key)) {
                        continue;
                    }
                    self.firings += 1;
                    if self.firings > self.opts.cap {
                        return Err(ExecError::CapExceeded(self.opts.cap));
                    }
                    self.ever_fired.insert(i);
                    fired_any = true;
                    for c in &rule.consequent {
                        let grounded = Step {
                            atom: s.apply_atom(&c.atom),
                            ..c.clone()
                        };
                        self.execute(&grounded)?;
                    }
                }
            }
            if !fired_any {
                return Ok(());
            }
        }
    }

    /// A never-fired rule with an unprovable unary antecedent literal.
    fn next_prompt(&self, rules: &[PlannedRule], asked: &BTreeSet<usize>) -> Option<(usize, Prompt)> {
        rules.iter().enumerate().find_map(|(i, r)| {
            if self.ever_fired.contains(&i) || asked.contains(&i) {
                return None;
            }
            r.body.iter().find_map(|l| {
                let unary_var = l.positive && l.atom.args.len() == 1 && matches!(l.atom.args[0], Term::Var(_));
                if !unary_var || solve(&self.kb, std::slice::from_ref(l), self.opts.depth_limit).next().is_some() {
                    return None;
                }
                let noun = self
                    .lex
                    .entries()
                    .iter()
                    .find(|e| e.class.is_noun() && e.canonical == l.atom.pred)?
                    .singular()
                    .to_string();
                Some((i, Prompt {
                    predicate: l.atom.pred.clone(),
                    text: format!("Please enter {} {noun}:", article(&noun)),
                    noun,
                }))
            })
        })
    }

    fn ask(&mut self, prompt: &Prompt) -> Result<(), ExecError> {
        loop {
            self.env.emit(ExecEvent::Prompt {
                text: prompt.text.clone(),
            });
            let Some(answer) = self.env.answer(prompt) else {
                return Err(ExecError::PromptRefused {
                    prompt: prompt.text.clone(),
                });
            };
            match interpret_answer(&answer, &prompt.predicate, self.lex) {
                Some(atom) => return self.assert(atom),
                None => self.env.emit(ExecEvent::Warning {
                    text: format!("cannot read `{}` as a name or `<Name> is a <noun>.`", answer.trim()),
                }),
            }
        }
    }

    fn all(&mut self, plan: &ExecutionPlan) -> Result<(), ExecError> {
        self.sweep(&plan.rules, 0)?;
        for (n, s) in plan.steps.iter().enumerate() {
            self.execute(s)?;
            self.sweep(&plan.rules, n + 1)?;
        }
        let mut asked = BTreeSet::new();
        while let Some((i, prompt)) = self.next_prompt(&plan.rules, &asked) {
            asked.insert(i);
            self.ask(&prompt)?;
            self.sweep(&plan.rules, plan.steps.len())?;
        }
        Ok(())
    }
}

/// Runs `plan` against `kb`, which should be the knowledge base the plan
/// was translated into. Its top-level event facts are removed first and
/// re-asserted as the events happen.
pub fn run(
    plan: &ExecutionPlan,
    kb: &KnowledgeBase,
    lex: &Lexicon,
    idx: ReferentIndex,
    opts: &ExecOptions,
    env: &mut dyn Env,
) -> Result<ExecResult, ExecError> {
    let events: Vec<&Atom> = plan.events().map(|s| &s.atom).collect();
    let mut working = kb.clone();
    working.retain(|c| !(c.body.is_empty() && c.head.as_ref().is_some_and(|h| events.contains(&h))));
    let mut r = Run {
        lex,
        opts,
        env,
        idx,
        kb: working,
        trace: Vec::new(),
        asserted: Vec::new(),
        mentioned: BTreeSet::new(),
        fired: BTreeSet::new(),
        ever_fired: BTreeSet::new(),
        firings: 0,
        warned_incomplete: false,
    };
    match r.all(plan) {
        Ok(()) => {
            r.env.emit(ExecEvent::Done);
            Ok(ExecResult {
                trace: r.trace,
                asserted: r.asserted,
                kb: r.kb,
            })
        }
        Err(e) => {
            r.env.emit(ExecEvent::Error {
                text: format!("{}: {e}", e.kind()),
            });
            Err(e)
        }
    }
}
