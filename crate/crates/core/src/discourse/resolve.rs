use std::collections::BTreeMap;

use crate::lexicon::Number;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Unresolvable definite noun phrases are accommodated with a warning.
    Statement,
    /// Every definite noun phrase must refer to something already known.
    Question,
}

/// The latest introduced candidate satisfying `matches`.
pub fn closest_antecedent(candidates: &[RefId], matches: impl Fn(RefId) -> bool) -> Option<RefId> {
    candidates.iter().rev().copied().find(|r| matches(*r))
}

impl DiscourseState {
    /// Resolves the anaphors of one sentence in order, replacing their
    /// placeholders in the DRS.
    pub fn resolve(
        &mut self,
        anaphors: Vec<Anaphor>,
        mode: Mode,
    ) -> Result<SentenceAnalysis, DiscourseError> {
        let mut replacements: BTreeMap<RefId, Vec<Condition>> = BTreeMap::new();
        let mut out = SentenceAnalysis::default();
        for a in anaphors {
            let e = a.referent;
            let me = self.referents[e].clone();
            let refs = &self.referents;
            let usable = |r: RefId| r != e && refs[r].alias_of.is_none();
            let found = match &a.kind {
                AnaphorKind::Definite { noun, .. } => closest_antecedent(&a.candidates, |r| {
                    usable(r)
                        && refs[r].nouns.contains(noun)
                        && refs[r].gender.agrees(me.gender)
                        && refs[r].number == me.number
                }),
                AnaphorKind::Pronoun => closest_antecedent(&a.candidates, |r| {
                    usable(r)
                        && refs[r].number == me.number
                        && (me.number == Number::Pl || refs[r].gender.agrees(me.gender))
                }),
                AnaphorKind::Alias { target, .. } => closest_antecedent(&a.candidates, |r| {
                    usable(r) && refs[r].name.as_deref() == Some(target.as_str())
                }),
            };
            let conditions = match (found, &a.kind) {
                (Some(c), AnaphorKind::Definite { noun, .. }) => vec![
                    Condition::The(Atom::new(noun.clone(), vec![Arg::Ref(e)], a.pos)),
                    Condition::Eq(e, c),
                ],
                (Some(c), AnaphorKind::Pronoun) => vec![Condition::Eq(e, c)],
                (Some(c), AnaphorKind::Alias { surface, target }) => vec![
                    Condition::Synonym(
                        Atom::new("named", vec![Arg::Ref(e), Arg::Sym(surface.clone())], a.pos),
                        Atom::new("named", vec![Arg::Ref(e), Arg::Sym(target.clone())], a.pos),
                    ),
                    Condition::Eq(e, c),
                ],
                (None, AnaphorKind::Definite { noun, adjectives }) if mode == Mode::Statement => {
                    self.referents[e].nouns.push(noun.clone());
                    out.warnings.push(Warning::new(
                        a.pos,
                        format!("`{}` has no antecedent and introduces a new object", a.text),
                    ));
                    adjectives
                        .iter()
                        .cloned()
                        .chain([Atom::new(noun.clone(), vec![Arg::Ref(e)], a.pos)])
                        .map(Condition::Atomic)
                        .collect()
                }
                (None, AnaphorKind::Pronoun) => {
                    return Err(DiscourseError::UnresolvedPronoun {
                        word: a.text.clone(),
                        pos: a.pos,
                    })
                }
                (None, _) => {
                    return Err(DiscourseError::UnresolvedReference {
                        text: a.text.clone(),
                        pos: a.pos,
                    })
                }
            };
            self.referents[e].alias_of = found;
            replacements.insert(e, conditions);
            out.resolutions.push(Resolution {
                anaphor: a,
                antecedent: found,
            });
        }
        replace_pending(&mut self.drs, &mut replacements);
        Ok(out)
    }
}

fn replace_pending(drs: &mut Drs, with: &mut BTreeMap<RefId, Vec<Condition>>) {
    if with.is_empty() {
        return;
    }
    let old = std::mem::take(&mut drs.conditions);
    for mut c in old {
        match &mut c {
            Condition::Pending(e) => {
                if let Some(cs) = with.remove(e) {
                    drs.conditions.extend(cs);
                    continue;
                }
            }
            Condition::IfThen(a, b) => {
                replace_pending(a, with);
                replace_pending(b, with);
            }
            Condition::Not(d) | Condition::Query(d, _) => replace_pending(d, with),
            Condition::Or(ds) => ds.iter_mut().for_each(|d| replace_pending(d, with)),
            _ => {}
        }
        drs.conditions.push(c);
    }
}
