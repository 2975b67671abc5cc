use std::collections::BTreeMap;
use std::fmt;

use crate::discourse::{Arg, Condition, QueryAnalysis};
use crate::logic::{Atom, Literal, Term};

use super::{first_pos, var_name, RefMap, TranslateError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGoal {
    pub literals: Vec<Literal>,
    /// Variables standing for the wh-phrases, with the phrase text.
    pub wh: Vec<(String, String)>,
}

impl QueryGoal {
    pub fn is_yes_no(&self) -> bool {
        self.wh.is_empty()
    }
}

impl fmt::Display for QueryGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<String> = self.literals.iter().map(Literal::to_string).collect();
        write!(f, "?- {}.", lits.join(", "))
    }
}

/// Builds the goal for an analysed question. Referents of the question
/// itself become variables; everything else must already have a term.
pub fn translate_query(q: &QueryAnalysis, refs: &RefMap) -> Result<QueryGoal, TranslateError> {
    let mut local: BTreeMap<usize, Term> = BTreeMap::new();
    for (i, r) in q.body.referents.iter().enumerate() {
        local.insert(*r, Term::Var(var_name(i)));
    }
    let term = |a: &Arg, pos| -> Result<Term, TranslateError> {
        match a {
            Arg::Sym(s) => Ok(Term::Const(s.clone())),
            Arg::Ref(r) => local
                .get(r)
                .or_else(|| refs.get(r).filter(|t| t.is_ground()))
                .cloned()
                .ok_or_else(|| TranslateError::UnresolvedReference {
                    pos,
                    text: q
                        .referents
                        .get(*r)
                        .map(|x| x.text.clone())
                        .unwrap_or_default(),
                }),
        }
    };
    let atom = |a: &crate::discourse::Atom| -> Result<Atom, TranslateError> {
        let args = a
            .args
            .iter()
            .map(|x| term(x, a.pos))
            .collect::<Result<_, _>>()?;
        Ok(Atom::new(a.pred.clone(), args))
    };
    let mut literals = Vec::new();
    for c in &q.body.conditions {
        match c {
            Condition::Atomic(a) => literals.push(Literal::pos(atom(a)?).at(a.pos)),
            Condition::Not(d) if d.referents.is_empty() && d.conditions.len() == 1 => {
                let Condition::Atomic(a) = &d.conditions[0] else {
                    return Err(nesting(first_pos(d)));
                };
                literals.push(Literal::neg(atom(a)?).at(a.pos));
            }
            Condition::Not(d) => return Err(nesting(first_pos(d))),
            Condition::IfThen(a, _) => return Err(nesting(first_pos(a))),
            Condition::Or(ds) => return Err(nesting(ds.first().map(first_pos).unwrap_or_default())),
            _ => {}
        }
    }
    let wh = q
        .wh
        .iter()
        .filter_map(|r| match local.get(r) {
            Some(Term::Var(v)) => Some((v.clone(), q.referents[*r].text.clone())),
            _ => None,
        })
        .collect();
    Ok(QueryGoal { literals, wh })
}

fn nesting(pos: crate::SourcePos) -> TranslateError {
    TranslateError::UntranslatableNesting {
        pos,
        detail: "questions may only contain simple and singly negated conditions".into(),
    }
}
