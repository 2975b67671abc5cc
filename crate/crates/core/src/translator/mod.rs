//! Cleaned DRSs to clauses, questions to goals, and bindings back to English.

mod answer;
mod query;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::discourse::{self, Arg, Condition, Drs, RefId};
use crate::logic::{Atom, Clause, KnowledgeBase, Literal, Term};
use crate::{SourcePos, Warning};

pub use answer::{generate_answer, Intro, ReferentIndex};
pub use query::{translate_query, QueryGoal};

/// Discourse referent to the term standing for it in the knowledge base.
pub type RefMap = BTreeMap<RefId, Term>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("{detail}")]
    UntranslatableNesting { pos: SourcePos, detail: String },
    #[error("`{text}` does not refer to anything in the knowledge base")]
    UnresolvedReference { pos: SourcePos, text: String },
}

impl TranslateError {
    pub fn kind(&self) -> &'static str {
        match self {
            TranslateError::UntranslatableNesting { .. } => "untranslatable-nesting",
            TranslateError::UnresolvedReference { .. } => "unresolved-reference",
        }
    }

    pub fn pos(&self) -> SourcePos {
        match self {
            TranslateError::UntranslatableNesting { pos, .. }
            | TranslateError::UnresolvedReference { pos, .. } => *pos,
        }
    }
}

/// Structured view of the translation, in DRS order, for the executor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unit {
    Fact {
        atom: Atom,
        pos: SourcePos,
    },
    /// Consequent atoms of one conditional, all sharing `body`.
    Rule {
        body: Vec<Literal>,
        heads: Vec<(Atom, SourcePos)>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Translation {
    pub clauses: Vec<Clause>,
    pub units: Vec<Unit>,
    pub warnings: Vec<Warning>,
}

/// Variable names in allocation order: X, Y, Z, U, V, W, X1, Y1, ...
pub fn var_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
    match i / NAMES.len() {
        0 => NAMES[i].to_string(),
        n => format!("{}{}", NAMES[i % NAMES.len()], n),
    }
}

fn first_pos(d: &Drs) -> SourcePos {
    d.atoms().first().map(|a| a.pos).unwrap_or_default()
}

struct Tr<'a> {
    refs: &'a mut RefMap,
    kb: &'a mut KnowledgeBase,
    out: Translation,
    vars: usize,
}

/// Translates a cleaned DRS. Top-level referents receive fresh Skolem
/// constants in order; referents already in `refs` keep their terms.
pub fn translate(
    drs: &Drs,
    refs: &mut RefMap,
    kb: &mut KnowledgeBase,
) -> Result<Translation, TranslateError> {
    let mut tr = Tr {
        refs,
        kb,
        out: Translation::default(),
        vars: 0,
    };
    tr.top(drs)?;
    Ok(tr.out)
}

impl Tr<'_> {
    fn term(&self, a: &Arg, pos: SourcePos) -> Result<Term, TranslateError> {
        match a {
            Arg::Sym(s) => Ok(Term::Const(s.clone())),
            Arg::Ref(r) => self.refs.get(r).cloned().ok_or_else(|| {
                TranslateError::UnresolvedReference {
                    pos,
                    text: discourse::letter(*r),
                }
            }),
        }
    }

    fn atom(&self, a: &discourse::Atom) -> Result<Atom, TranslateError> {
        let args = a
            .args
            .iter()
            .map(|x| self.term(x, a.pos))
            .collect::<Result<_, _>>()?;
        Ok(Atom::new(a.pred.clone(), args))
    }

    fn bind_vars(&mut self, referents: &[RefId]) -> Vec<Term> {
        referents
            .iter()
            .map(|r| {
                let v = Term::Var(var_name(self.vars));
                self.vars += 1;
                self.refs.insert(*r, v.clone());
                v
            })
            .collect()
    }

    fn top(&mut self, drs: &Drs) -> Result<(), TranslateError> {
        for r in &drs.referents {
            if !self.refs.contains_key(r) {
                let k = self.kb.fresh_skolem();
                self.refs.insert(*r, Term::Skolem(k));
            }
        }
        for c in &drs.conditions {
            match c {
                Condition::Atomic(a) => {
                    let atom = self.atom(a)?;
                    self.out.clauses.push(Clause::fact(atom.clone()));
                    self.out.units.push(Unit::Fact { atom, pos: a.pos });
                }
                Condition::IfThen(ante, cons) => {
                    self.vars = 0;
                    self.conditional(ante, cons, Vec::new(), Vec::new())?;
                }
                Condition::Not(d) => {
                    self.vars = 0;
                    self.bind_vars(&d.referents);
                    let body = self.literals(d)?;
                    self.out.clauses.push(Clause::constraint(body));
                }
                Condition::Or(ds) => {
                    self.out.warnings.push(Warning::new(
                        ds.first().map(first_pos).unwrap_or_default(),
                        "disjunction is asserted as the conjunction of its parts",
                    ));
                    for d in ds {
                        self.top(d)?;
                    }
                }
                Condition::Query(..) => {}
                c if c.is_bookkeeping() => {}
                _ => unreachable!(),
            }
        }
        Ok(())
    }

    fn conditional(
        &mut self,
        ante: &Drs,
        cons: &Drs,
        mut body: Vec<Literal>,
        mut vars: Vec<Term>,
    ) -> Result<(), TranslateError> {
        vars.extend(self.bind_vars(&ante.referents));
        body.extend(self.literals(ante)?);
        self.consequent(cons, &body, &vars)
    }

    fn consequent(&mut self, cons: &Drs, body: &[Literal], vars: &[Term]) -> Result<(), TranslateError> {
        for r in &cons.referents {
            let t = if vars.is_empty() {
                Term::Skolem(self.kb.fresh_skolem())
            } else {
                Term::Func(self.kb.fresh_function(), vars.to_vec())
            };
            self.refs.insert(*r, t);
        }
        let mut heads = Vec::new();
        for c in &cons.conditions {
            match c {
                Condition::Atomic(a) => {
                    let h = self.atom(a)?;
                    self.out.clauses.push(if body.is_empty() {
                        Clause::fact(h.clone())
                    } else {
                        Clause::rule(h.clone(), body.to_vec())
                    });
                    heads.push((h, a.pos));
                }
                Condition::IfThen(a2, c2) => {
                    self.conditional(a2, c2, body.to_vec(), vars.to_vec())?;
                }
                Condition::Or(ds) => {
                    self.out.warnings.push(Warning::new(
                        ds.first().map(first_pos).unwrap_or_default(),
                        "disjunctive consequence is asserted as the conjunction of its parts",
                    ));
                    for d in ds {
                        self.consequent(d, body, vars)?;
                    }
                }
                Condition::Not(d) => {
                    return Err(TranslateError::UntranslatableNesting {
                        pos: first_pos(d),
                        detail: "a negation in the consequent of a conditional cannot be translated"
                            .into(),
                    })
                }
                _ => {}
            }
        }
        if !heads.is_empty() {
            self.out.units.push(Unit::Rule {
                body: body.to_vec(),
                heads,
            });
        }
        Ok(())
    }

    /// Body literals for the conditions of an antecedent or a negated DRS.
    fn literals(&mut self, d: &Drs) -> Result<Vec<Literal>, TranslateError> {
        let mut out = Vec::new();
        for c in &d.conditions {
            match c {
                Condition::Atomic(a) => out.push(Literal::pos(self.atom(a)?).at(a.pos)),
                Condition::Not(inner) => out.push(self.negation(inner)?),
                Condition::IfThen(a, _) => {
                    return Err(TranslateError::UntranslatableNesting {
                        pos: first_pos(a),
                        detail: "a conditional inside a condition cannot be translated".into(),
                    })
                }
                Condition::Or(ds) => {
                    return Err(TranslateError::UntranslatableNesting {
                        pos: ds.first().map(first_pos).unwrap_or_default(),
                        detail: "a disjunction inside a condition cannot be translated".into(),
                    })
                }
                _ => {}
            }
        }
        Ok(out)
    }

    fn negation(&mut self, inner: &Drs) -> Result<Literal, TranslateError> {
        let pos = first_pos(inner);
        let atoms: Vec<&discourse::Atom> = inner
            .conditions
            .iter()
            .filter_map(|c| match c {
                Condition::Atomic(a) => Some(a),
                _ => None,
            })
            .collect();
        if atoms.len() != inner.conditions.len() {
            return Err(TranslateError::UntranslatableNesting {
                pos,
                detail: "only simple conditions can be negated inside a condition".into(),
            });
        }
        if inner.referents.is_empty() && atoms.len() == 1 {
            return Ok(Literal::neg(self.atom(atoms[0])?).at(pos));
        }
        // neg over an auxiliary predicate defined by the negated conditions
        let local: BTreeSet<String> = self
            .bind_vars(&inner.referents)
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v),
                _ => None,
            })
            .collect();
        let body: Vec<Literal> = atoms
            .iter()
            .map(|a| Ok(Literal::pos(self.atom(a)?).at(a.pos)))
            .collect::<Result<_, TranslateError>>()?;
        let mut shared = Vec::new();
        for l in &body {
            let mut vs = BTreeSet::new();
            l.atom.vars(&mut vs);
            for v in vs {
                let t = Term::Var(v.clone());
                if !local.contains(&v) && !shared.contains(&t) {
                    shared.push(t);
                }
            }
        }
        let head = Atom::new(self.kb.fresh_aux(), shared);
        self.out.clauses.push(Clause::rule(head.clone(), body));
        Ok(Literal::neg(head).at(pos))
    }
}
