//! Terms, clauses, the knowledge base and a depth-bounded SLD resolution
//! engine with negation as failure.

mod kb;
mod solve;
mod unify;

use std::collections::BTreeSet;
use std::fmt;

use crate::SourcePos;

pub use kb::{KbError, KnowledgeBase};
pub use solve::{solve, SolveError, Solutions, DEFAULT_DEPTH_LIMIT, DEFAULT_STEP_BUDGET};
pub use unify::{unify, unify_atoms, Subst};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Skolem(u32),
    Const(String),
    Func(String, Vec<Term>),
    Var(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.vars(out)),
            _ => {}
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Func(_, args) => args.iter().any(|a| a.occurs(var)),
            _ => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Skolem(n) => write!(f, "{n}"),
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => f.write_str(v),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|a| a.vars(out));
    }

    pub fn key(&self) -> (&str, usize) {
        (&self.pred, self.args.len())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_list(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
    pub pos: Option<SourcePos>,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            positive: true,
            atom,
            pos: None,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            positive: false,
            atom,
            pos: None,
        }
    }

    pub fn at(mut self, pos: SourcePos) -> Self {
        self.pos = Some(pos);
        self
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "neg({})", self.atom)
        }
    }
}

/// A definite clause, or an integrity constraint when `head` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Option<Atom>,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head: Some(head),
            body: Vec::new(),
        }
    }

    pub fn rule(head: Atom, body: Vec<Literal>) -> Self {
        Clause {
            head: Some(head),
            body,
        }
    }

    pub fn constraint(body: Vec<Literal>) -> Self {
        Clause { head: None, body }
    }

    pub fn is_fact(&self) -> bool {
        self.head.is_some() && self.body.is_empty()
    }

    /// The line this clause contributes to a knowledge-base dump.
    pub fn dump_line(&self) -> String {
        if self.is_fact() {
            format!("fact({self}).")
        } else {
            format!("fact(({self})).")
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Some(h) => write!(f, "{h}")?,
            None => f.write_str("false")?,
        }
        if !self.body.is_empty() {
            f.write_str(":-")?;
            write_list(f, &self.body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sk(n: u32) -> Term {
        Term::Skolem(n)
    }

    #[test]
    fn display_formats() {
        let fact = Clause::fact(Atom::new("enter", vec![sk(0), sk(1)]));
        assert_eq!(fact.dump_line(), "fact(enter(0, 1)).");
        let rule = Clause::rule(
            Atom::new("reject", vec![sk(3), sk(1)]),
            vec![Literal::neg(Atom::new("valid", vec![sk(2)]))],
        );
        assert_eq!(rule.dump_line(), "fact((reject(3, 1):-neg(valid(2)))).");
        let named = Clause::fact(Atom::new("named", vec![sk(3), Term::Const("simplemat".into())]));
        assert_eq!(named.dump_line(), "fact(named(3, simplemat)).");
        let f = Term::Func("sk1".into(), vec![Term::Const("john".into())]);
        assert_eq!(f.to_string(), "sk1(john)");
        let c = Clause::constraint(vec![Literal::pos(Atom::new("p", vec![sk(0)]))]);
        assert_eq!(c.dump_line(), "fact((false:-p(0))).");
    }

    #[test]
    fn groundness() {
        assert!(Term::Func("f".into(), vec![sk(0)]).is_ground());
        assert!(!Term::Func("f".into(), vec![Term::var("X")]).is_ground());
    }
}
