//! Feature structures and their unification.
//!
//! A missing feature and an explicitly [`FeatureValue::Unbound`] one behave the
//! same way: both unify with anything. The `gender` feature has one extra rule,
//! `common` unifies with `masc` and `fem` and yields the more specific value.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FeatureValue {
    Atom(String),
    Unbound,
    Nested(FeatureStructure),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureStructure {
    features: BTreeMap<String, FeatureValue>,
}

pub const CASE: &str = "case";
pub const AGR: &str = "agr";
pub const GENDER: &str = "gender";

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: &str) -> Self {
        self.features
            .insert(name.to_string(), FeatureValue::Atom(value.to_string()));
        self
    }

    pub fn with_value(mut self, name: &str, value: FeatureValue) -> Self {
        self.features.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&FeatureValue> {
        self.features.get(name)
    }

    pub fn atom(&self, name: &str) -> Option<&str> {
        match self.features.get(name) {
            Some(FeatureValue::Atom(a)) => Some(a),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FeatureValue)> {
        self.features.iter()
    }

    /// Symmetric unification. `None` means the structures clash.
    pub fn unify(&self, other: &FeatureStructure) -> Option<FeatureStructure> {
        let mut out = self.features.clone();
        for (name, right) in &other.features {
            let merged = match out.get(name) {
                None => right.clone(),
                Some(left) => unify_values(name, left, right)?,
            };
            out.insert(name.clone(), merged);
        }
        Some(FeatureStructure { features: out })
    }
}

fn unify_values(name: &str, a: &FeatureValue, b: &FeatureValue) -> Option<FeatureValue> {
    use FeatureValue::*;
    match (a, b) {
        (Unbound, x) | (x, Unbound) => Some(x.clone()),
        (Atom(x), Atom(y)) if x == y => Some(a.clone()),
        (Atom(x), Atom(y)) if name == GENDER => unify_gender(x, y).map(|g| Atom(g.to_string())),
        (Nested(x), Nested(y)) => x.unify(y).map(Nested),
        _ => None,
    }
}

fn unify_gender<'a>(x: &'a str, y: &'a str) -> Option<&'a str> {
    match (x, y) {
        ("common", g @ ("masc" | "fem")) | (g @ ("masc" | "fem"), "common") => Some(g),
        _ => None,
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.features.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Atom(a) => f.write_str(a),
            FeatureValue::Unbound => f.write_str("_"),
            FeatureValue::Nested(n) => write!(f, "{n}"),
        }
    }
}
