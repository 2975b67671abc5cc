use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::SourcePos;

use super::{Atom, KnowledgeBase, Literal, Subst, Term};

pub const DEFAULT_DEPTH_LIMIT: usize = 1000;

/// Resolution steps one search may take, negated sub-searches included.
/// Depth alone does not bound rules like `p(f(X)) :- p(X)` that enumerate
/// ever deeper terms.
pub const DEFAULT_STEP_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("negated goal `{goal}` is not ground when selected")]
    NongroundNegation { goal: String, pos: Option<SourcePos> },
}

impl SolveError {
    pub fn kind(&self) -> &'static str {
        "nonground-negation"
    }

    pub fn pos(&self) -> Option<SourcePos> {
        match self {
            SolveError::NongroundNegation { pos, .. } => *pos,
        }
    }
}

struct Goal {
    lit: Literal,
    depth: usize,
}

struct Node {
    goals: Vec<Goal>,
    /// Trail length when the node was created; later bindings belong to
    /// descendants and are undone on return.
    mark: usize,
    /// Index into the candidate list of the first goal still to try.
    next: usize,
}

/// Triangular bindings with a trail. Binding is constant time, which
/// matters once Skolem functions build deep terms.
#[derive(Default)]
struct Bindings {
    map: HashMap<String, Term>,
    trail: Vec<String>,
}

impl Bindings {
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| self.resolve(a)).collect()),
            other => other.clone(),
        }
    }

    fn resolve_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.resolve(t)).collect(),
        }
    }

    fn occurs(&self, var: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => v == var,
            Term::Func(_, args) => args.iter().any(|a| self.occurs(var, a)),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(x, t) {
                    return false;
                }
                self.map.insert(x.clone(), t.clone());
                self.trail.push(x.clone());
                true
            }
            (Term::Func(f, xs), Term::Func(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => a == b,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail entry");
            self.map.remove(&v);
        }
    }
}

fn rename_term(t: &Term, n: usize) -> Term {
    match t {
        Term::Var(v) => Term::Var(format!("{v}#{n}")),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| rename_term(a, n)).collect()),
        other => other.clone(),
    }
}

fn rename_atom(a: &Atom, n: usize) -> Atom {
    Atom {
        pred: a.pred.clone(),
        args: a.args.iter().map(|t| rename_term(t, n)).collect(),
    }
}

/// Lazy SLD derivation: left-to-right selection, clauses in assertion
/// order, negation as failure on ground goals.
pub struct Solutions<'kb> {
    kb: &'kb KnowledgeBase,
    stack: Vec<Node>,
    bindings: Bindings,
    limit: usize,
    vars: BTreeSet<String>,
    renames: usize,
    steps: usize,
    budget: usize,
    incomplete: bool,
}

/// Solutions of the conjunction `goal`, each projected onto its variables.
pub fn solve<'kb>(kb: &'kb KnowledgeBase, goal: &[Literal], limit: usize) -> Solutions<'kb> {
    let mut vars = BTreeSet::new();
    for l in goal {
        l.atom.vars(&mut vars);
    }
    Solutions {
        kb,
        stack: vec![Node {
            goals: goal
                .iter()
                .map(|l| Goal {
                    lit: l.clone(),
                    depth: 0,
                })
                .collect(),
            mark: 0,
            next: 0,
        }],
        bindings: Bindings::default(),
        limit: limit.max(1),
        vars,
        renames: 0,
        steps: 0,
        budget: DEFAULT_STEP_BUDGET,
        incomplete: false,
    }
}

impl Solutions<'_> {
    /// True once some branch was cut off by the depth limit or the search
    /// ran out of steps.
    pub fn incomplete(&self) -> bool {
        self.incomplete
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn answer(&self) -> Subst {
        self.vars
            .iter()
            .filter_map(|v| {
                let t = self.bindings.resolve(&Term::Var(v.clone()));
                (t != Term::Var(v.clone())).then(|| (v.clone(), t))
            })
            .collect()
    }
}

impl Iterator for Solutions<'_> {
    type Item = Result<Subst, SolveError>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(node) = self.stack.last() {
            let mark = node.mark;
            self.bindings.undo(mark);
            let Some(first) = node.goals.first() else {
                let answer = self.answer();
                self.stack.pop();
                return Some(Ok(answer));
            };
            let depth = first.depth;
            let lit = first.lit.clone();

            if !lit.positive {
                let atom = self.bindings.resolve_atom(&lit.atom);
                if !atom.is_ground() {
                    self.stack.clear();
                    return Some(Err(SolveError::NongroundNegation {
                        goal: atom.to_string(),
                        pos: lit.pos,
                    }));
                }
                let remaining = self.limit.saturating_sub(depth).max(1);
                let mut sub = solve(self.kb, &[Literal::pos(atom)], remaining)
                    .with_step_budget(self.budget.saturating_sub(self.steps));
                let first = sub.next();
                self.steps += sub.steps;
                match first {
                    Some(Err(e)) => {
                        self.stack.clear();
                        return Some(Err(e));
                    }
                    Some(Ok(_)) => {
                        self.stack.pop();
                    }
                    None if sub.incomplete() => {
                        self.incomplete = true;
                        self.stack.pop();
                    }
                    None => {
                        // Nothing was bound, so the node can be advanced in place.
                        let node = self.stack.last_mut().expect("node");
                        node.goals.remove(0);
                    }
                }
                continue;
            }

            if depth >= self.limit {
                self.incomplete = true;
                self.stack.pop();
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                self.incomplete = true;
                self.stack.clear();
                return None;
            }

            let start = node.next;
            let kb = self.kb;
            let mut expanded = None;
            for (i, c) in kb
                .candidates(&lit.atom.pred, lit.atom.args.len())
                .enumerate()
                .skip(start)
            {
                self.renames += 1;
                let n = self.renames;
                let head = rename_atom(c.head.as_ref().expect("definite clause"), n);
                let unified = head
                    .args
                    .iter()
                    .zip(&lit.atom.args)
                    .all(|(h, g)| self.bindings.unify(h, g));
                if !unified {
                    self.bindings.undo(mark);
                    continue;
                }
                let node = self.stack.last().expect("node");
                let goals = c
                    .body
                    .iter()
                    .map(|l| Goal {
                        lit: Literal {
                            atom: rename_atom(&l.atom, n),
                            ..l.clone()
                        },
                        depth: depth + 1,
                    })
                    .chain(node.goals[1..].iter().map(|g| Goal {
                        lit: g.lit.clone(),
                        depth: g.depth,
                    }))
                    .collect();
                expanded = Some((i, Node {
                    goals,
                    mark: self.bindings.trail.len(),
                    next: 0,
                }));
                break;
            }
            match expanded {
                Some((i, child)) => {
                    self.stack.last_mut().expect("node").next = i + 1;
                    self.stack.push(child);
                }
                None => {
                    self.stack.pop();
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Clause;

    fn sk(n: u32) -> Term {
        Term::Skolem(n)
    }

    fn a(p: &str, args: Vec<Term>) -> Atom {
        Atom::new(p, args)
    }

    fn paper_kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for f in [
            a("customer", vec![sk(0)]),
            a("card", vec![sk(1)]),
            a("enter", vec![sk(0), sk(1)]),
            a("numeric", vec![sk(2)]),
            a("personal_code", vec![sk(2)]),
            a("named", vec![sk(3), Term::Const("simplemat".into())]),
            a("check", vec![sk(3), sk(2)]),
            a("enter", vec![sk(0), sk(2)]),
        ] {
            kb.assert_clause(Clause::fact(f)).unwrap();
        }
        kb.assert_clause(Clause::rule(
            a("reject", vec![sk(3), sk(1)]),
            vec![Literal::neg(a("valid", vec![sk(2)]))],
        ))
        .unwrap();
        kb
    }

    fn count(kb: &KnowledgeBase, goal: &[Literal]) -> usize {
        solve(kb, goal, DEFAULT_DEPTH_LIMIT)
            .collect::<Result<Vec<_>, _>>()
            .unwrap()
            .len()
    }

    #[test]
    fn facts_and_naf() {
        let mut kb = paper_kb();
        assert_eq!(count(&kb, &[Literal::pos(a("check", vec![sk(3), sk(2)]))]), 1);
        assert_eq!(count(&kb, &[Literal::pos(a("check", vec![sk(3), sk(1)]))]), 0);
        assert_eq!(count(&kb, &[Literal::pos(a("reject", vec![sk(3), sk(1)]))]), 1);
        kb.assert_clause(Clause::fact(a("valid", vec![sk(2)]))).unwrap();
        assert_eq!(count(&kb, &[Literal::pos(a("reject", vec![sk(3), sk(1)]))]), 0);
    }

    #[test]
    fn bindings_in_clause_order() {
        let kb = paper_kb();
        let goal = [Literal::pos(a("enter", vec![sk(0), Term::var("K")]))];
        let got: Vec<Term> = solve(&kb, &goal, 10)
            .map(|s| s.unwrap().get("K").cloned().unwrap())
            .collect();
        assert_eq!(got, vec![sk(1), sk(2)]);
    }

    #[test]
    fn unknown_predicate_has_no_solutions() {
        assert_eq!(count(&paper_kb(), &[Literal::pos(a("fly", vec![sk(0)]))]), 0);
    }

    #[test]
    fn nonground_negation_is_an_error() {
        let kb = paper_kb();
        let goal = [Literal::neg(a("valid", vec![Term::var("X")]))];
        let r = solve(&kb, &goal, 10).next().unwrap();
        assert_eq!(r.unwrap_err().kind(), "nonground-negation");
    }

    #[test]
    fn depth_limit_marks_incomplete() {
        let mut kb = KnowledgeBase::new();
        kb.assert_clause(Clause::rule(
            a("p", vec![Term::var("X")]),
            vec![Literal::pos(a("p", vec![Term::var("X")]))],
        ))
        .unwrap();
        let mut s = solve(&kb, &[Literal::pos(a("p", vec![sk(0)]))], 50);
        assert!(s.next().is_none());
        assert!(s.incomplete());
    }

    #[test]
    fn step_budget_stops_infinite_domains() {
        let mut kb = KnowledgeBase::new();
        let x = Term::var("X");
        kb.assert_clause(Clause::fact(a("p", vec![sk(0)]))).unwrap();
        kb.assert_clause(Clause::rule(
            a("p", vec![Term::Func("f".into(), vec![x.clone()])]),
            vec![Literal::pos(a("p", vec![x]))],
        ))
        .unwrap();
        let goal = [
            Literal::pos(a("p", vec![Term::var("Y")])),
            Literal::pos(a("q", vec![Term::var("Y")])),
        ];
        let mut s = solve(&kb, &goal, DEFAULT_DEPTH_LIMIT).with_step_budget(2_000);
        assert!(s.next().is_none());
        assert!(s.incomplete());
    }

    #[test]
    fn incomplete_naf_prunes() {
        let mut kb = KnowledgeBase::new();
        kb.assert_clause(Clause::rule(
            a("p", vec![Term::var("X")]),
            vec![Literal::pos(a("p", vec![Term::var("X")]))],
        ))
        .unwrap();
        kb.assert_clause(Clause::fact(a("q", vec![sk(0)]))).unwrap();
        let goal = [
            Literal::pos(a("q", vec![Term::var("X")])),
            Literal::neg(a("p", vec![Term::var("X")])),
        ];
        let mut s = solve(&kb, &goal, 20);
        assert!(s.next().is_none());
        assert!(s.incomplete());
    }

    #[test]
    fn rules_with_skolem_functions() {
        let mut kb = KnowledgeBase::new();
        let x = Term::var("X");
        let f = Term::Func("sk1".into(), vec![x.clone()]);
        kb.assert_clause(Clause::rule(
            a("have", vec![x.clone(), f.clone()]),
            vec![Literal::pos(a("customer", vec![x.clone()]))],
        ))
        .unwrap();
        kb.assert_clause(Clause::fact(a("customer", vec![Term::Const("john".into())])))
            .unwrap();
        let goal = [Literal::pos(a("have", vec![Term::var("W"), Term::var("C")]))];
        let s = solve(&kb, &goal, 10).next().unwrap().unwrap();
        assert_eq!(s.get("W"), Some(&Term::Const("john".into())));
        assert_eq!(
            s.get("C"),
            Some(&Term::Func("sk1".into(), vec![Term::Const("john".into())]))
        );
        assert_eq!(s.len(), 2);
    }
}
