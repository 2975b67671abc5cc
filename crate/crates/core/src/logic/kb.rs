use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::solve::{solve, DEFAULT_DEPTH_LIMIT};
use super::{Atom, Clause};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("variable {var} in negated literal of `{clause}` is not bound by a positive literal")]
    SafetyViolation { var: String, clause: String },
    #[error("predicate {pred} used with {found} arguments, previously {expected}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
}

impl KbError {
    pub fn kind(&self) -> &'static str {
        match self {
            KbError::SafetyViolation { .. } => "safety-violation",
            KbError::ArityMismatch { .. } => "arity-mismatch",
        }
    }
}

/// Clauses in assertion order plus the Skolem counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    clauses: Vec<Clause>,
    arities: BTreeMap<String, usize>,
    next_skolem: u32,
    next_function: u32,
    next_aux: u32,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn fresh_skolem(&mut self) -> u32 {
        self.next_skolem += 1;
        self.next_skolem - 1
    }

    pub fn next_skolem(&self) -> u32 {
        self.next_skolem
    }

    /// Next Skolem function name: `sk1`, `sk2`, ...
    pub fn fresh_function(&mut self) -> String {
        self.next_function += 1;
        format!("sk{}", self.next_function)
    }

    /// Next auxiliary predicate name for negated compound conditions.
    pub fn fresh_aux(&mut self) -> String {
        self.next_aux += 1;
        format!("aux{}", self.next_aux)
    }

    fn check_arity(&self, a: &Atom, seen: &mut BTreeMap<String, usize>) -> Result<(), KbError> {
        let known = self.arities.get(&a.pred).or_else(|| seen.get(&a.pred));
        match known {
            Some(&n) if n != a.args.len() => Err(KbError::ArityMismatch {
                pred: a.pred.clone(),
                expected: n,
                found: a.args.len(),
            }),
            _ => {
                seen.insert(a.pred.clone(), a.args.len());
                Ok(())
            }
        }
    }

    /// Checks safety and arity without asserting.
    pub fn check(&self, c: &Clause) -> Result<(), KbError> {
        let mut bound = BTreeSet::new();
        if let Some(h) = &c.head {
            h.vars(&mut bound);
        }
        for l in c.body.iter().filter(|l| l.positive) {
            l.atom.vars(&mut bound);
        }
        for l in c.body.iter().filter(|l| !l.positive) {
            let mut vs = BTreeSet::new();
            l.atom.vars(&mut vs);
            if let Some(v) = vs.difference(&bound).next() {
                return Err(KbError::SafetyViolation {
                    var: v.clone(),
                    clause: c.to_string(),
                });
            }
        }
        let mut seen = BTreeMap::new();
        for a in c.head.iter().chain(c.body.iter().map(|l| &l.atom)) {
            self.check_arity(a, &mut seen)?;
        }
        Ok(())
    }

    /// Appends `c`. Identical clauses are stored once.
    pub fn assert_clause(&mut self, c: Clause) -> Result<(), KbError> {
        self.check(&c)?;
        for a in c.head.iter().chain(c.body.iter().map(|l| &l.atom)) {
            self.arities.insert(a.pred.clone(), a.args.len());
        }
        if !self.clauses.contains(&c) {
            self.clauses.push(c);
        }
        Ok(())
    }

    /// Clauses whose head could match `pred/arity`, in assertion order.
    pub(crate) fn candidates(&self, pred: &str, arity: usize) -> impl Iterator<Item = &Clause> {
        let pred = pred.to_string();
        self.clauses.iter().filter(move |c| {
            c.head
                .as_ref()
                .is_some_and(|h| h.pred == pred && h.args.len() == arity)
        })
    }

    /// Integrity constraints whose body is currently provable.
    pub fn violated_constraints(&self) -> Vec<&Clause> {
        self.clauses
            .iter()
            .filter(|c| c.head.is_none())
            .filter(|c| matches!(solve(self, &c.body, DEFAULT_DEPTH_LIMIT).next(), Some(Ok(_))))
            .collect()
    }

    /// Keeps only the clauses satisfying `keep`; counters are unchanged.
    pub fn retain(&mut self, keep: impl FnMut(&Clause) -> bool) {
        self.clauses.retain(keep);
    }

    /// Is the ground atom stored as a fact?
    pub fn has_fact(&self, a: &Atom) -> bool {
        self.clauses
            .iter()
            .any(|c| c.body.is_empty() && c.head.as_ref() == Some(a))
    }

    /// The listing format: a `% fact/1` header, then one clause per line.
    pub fn dump(&self) -> String {
        let mut out = String::from("% fact/1\n");
        for c in &self.clauses {
            out.push_str(&c.dump_line());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Literal, Term};
    use super::*;

    #[test]
    fn unsafe_negation_rejected() {
        let c = Clause::rule(
            Atom::new("p", vec![Term::var("X")]),
            vec![Literal::neg(Atom::new("q", vec![Term::var("Y")]))],
        );
        let err = KnowledgeBase::new().assert_clause(c).unwrap_err();
        assert_eq!(err.kind(), "safety-violation");
    }

    #[test]
    fn arity_is_fixed() {
        let mut kb = KnowledgeBase::new();
        kb.assert_clause(Clause::fact(Atom::new("p", vec![Term::Skolem(0)])))
            .unwrap();
        let err = kb
            .assert_clause(Clause::fact(Atom::new(
                "p",
                vec![Term::Skolem(0), Term::Skolem(1)],
            )))
            .unwrap_err();
        assert_eq!(err.kind(), "arity-mismatch");
    }

    #[test]
    fn counters() {
        let mut kb = KnowledgeBase::new();
        assert_eq!(kb.fresh_skolem(), 0);
        assert_eq!(kb.fresh_skolem(), 1);
        assert_eq!(kb.fresh_function(), "sk1");
        assert_eq!(kb.fresh_function(), "sk2");
    }

    #[test]
    fn constraint_violation_detected() {
        let mut kb = KnowledgeBase::new();
        kb.assert_clause(Clause::constraint(vec![Literal::pos(Atom::new(
            "blocked",
            vec![Term::Skolem(0)],
        ))]))
        .unwrap();
        assert!(kb.violated_constraints().is_empty());
        kb.assert_clause(Clause::fact(Atom::new("blocked", vec![Term::Skolem(0)])))
            .unwrap();
        assert_eq!(kb.violated_constraints().len(), 1);
    }
}
