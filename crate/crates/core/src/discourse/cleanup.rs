use std::collections::BTreeMap;

use super::*;

/// Performs every `E=C` substitution, drops bookkeeping conditions and the
/// referents they made redundant, and removes duplicate conditions.
pub fn cleanup(drs: &Drs) -> Drs {
    let mut eqs = BTreeMap::new();
    collect_eqs(drs, &mut eqs);
    clean(drs, &eqs)
}

fn collect_eqs(drs: &Drs, out: &mut BTreeMap<RefId, RefId>) {
    for c in &drs.conditions {
        match c {
            Condition::Eq(a, b) => {
                out.insert(*a, *b);
            }
            Condition::IfThen(a, b) => {
                collect_eqs(a, out);
                collect_eqs(b, out);
            }
            Condition::Not(d) | Condition::Query(d, _) => collect_eqs(d, out),
            Condition::Or(ds) => ds.iter().for_each(|d| collect_eqs(d, out)),
            _ => {}
        }
    }
}

fn find(eqs: &BTreeMap<RefId, RefId>, mut r: RefId) -> RefId {
    // Eq chains point backwards in introduction order, so this terminates;
    // the bound guards against malformed input.
    for _ in 0..=eqs.len() {
        match eqs.get(&r) {
            Some(next) if *next != r => r = *next,
            _ => break,
        }
    }
    r
}

fn subst_atom(a: &Atom, eqs: &BTreeMap<RefId, RefId>) -> Atom {
    Atom {
        pred: a.pred.clone(),
        args: a
            .args
            .iter()
            .map(|x| match x {
                Arg::Ref(r) => Arg::Ref(find(eqs, *r)),
                other => other.clone(),
            })
            .collect(),
        pos: a.pos,
    }
}

fn clean(drs: &Drs, eqs: &BTreeMap<RefId, RefId>) -> Drs {
    let referents = drs
        .referents
        .iter()
        .copied()
        .filter(|r| !eqs.contains_key(r))
        .collect();
    let mut conditions: Vec<Condition> = Vec::new();
    for c in &drs.conditions {
        let cleaned = match c {
            c if c.is_bookkeeping() => continue,
            Condition::Atomic(a) => Condition::Atomic(subst_atom(a, eqs)),
            Condition::IfThen(a, b) => Condition::IfThen(clean(a, eqs), clean(b, eqs)),
            Condition::Not(d) => Condition::Not(clean(d, eqs)),
            Condition::Or(ds) => Condition::Or(ds.iter().map(|d| clean(d, eqs)).collect()),
            Condition::Query(d, wh) => {
                Condition::Query(clean(d, eqs), wh.iter().map(|r| find(eqs, *r)).collect())
            }
            _ => unreachable!("bookkeeping handled above"),
        };
        if !conditions.contains(&cleaned) {
            conditions.push(cleaned);
        }
    }
    Drs {
        referents,
        conditions,
    }
}
