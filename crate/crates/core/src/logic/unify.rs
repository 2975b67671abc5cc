use std::collections::BTreeMap;

use super::{Atom, Term};

/// An idempotent substitution: no bound variable occurs in any binding.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subst {
    map: BTreeMap<String, Term>,
}

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Func(name, args) => {
                Term::Func(name.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.apply(t)).collect(),
        }
    }

    /// Adds `var := t`, where `t` is already fully applied and does not
    /// contain `var`.
    fn bind(&mut self, var: &str, t: Term) {
        let single = Subst {
            map: BTreeMap::from([(var.to_string(), t.clone())]),
        };
        for v in self.map.values_mut() {
            *v = single.apply(v);
        }
        self.map.insert(var.to_string(), t);
    }

    /// Restriction to the given variables.
    pub fn project<'a>(&self, vars: impl IntoIterator<Item = &'a String>) -> Subst {
        Subst {
            map: vars
                .into_iter()
                .filter_map(|v| self.map.get(v).map(|t| (v.clone(), t.clone())))
                .collect(),
        }
    }
}

impl FromIterator<(String, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Subst {
            map: iter.into_iter().collect(),
        }
    }
}

/// Most general unifier of `a` and `b` extending `s`, with occurs check.
pub fn unify(a: &Term, b: &Term, s: &Subst) -> Option<Subst> {
    let mut out = s.clone();
    unify_into(a, b, &mut out).then_some(out)
}

pub fn unify_atoms(a: &Atom, b: &Atom, s: &Subst) -> Option<Subst> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut out = s.clone();
    a.args
        .iter()
        .zip(&b.args)
        .all(|(x, y)| unify_into(x, y, &mut out))
        .then_some(out)
}

fn unify_into(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let a = s.apply(a);
    let b = s.apply(b);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if t.occurs(x) {
                return false;
            }
            s.bind(x, t.clone());
            true
        }
        (Term::Func(f, xs), Term::Func(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_into(x, y, s))
        }
        _ => a == b,
    }
}
