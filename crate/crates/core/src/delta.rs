//! Signed multisets of tuples and the bags they are applied to.

use std::collections::HashMap;

use crate::error::EngineError;
use crate::value::Tuple;

/// A bag of tuples: every stored multiplicity is positive.
pub type TupleBag = HashMap<Tuple, u64>;

/// A signed multiset of tuples over a schema. Positive multiplicities are
/// insertions, negative ones deletions. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaBag {
    schema: Vec<String>,
    changes: HashMap<Tuple, i64>,
}

impl DeltaBag {
    pub fn new(schema: Vec<String>) -> Self {
        DeltaBag {
            schema,
            changes: HashMap::new(),
        }
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// Number of distinct tuples with a non-zero change.
    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn add(&mut self, tuple: Tuple, multiplicity: i64) {
        if multiplicity == 0 {
            return;
        }
        match self.changes.entry(tuple) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += multiplicity;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(multiplicity);
            }
        }
    }

    pub fn merge(&mut self, other: DeltaBag) {
        for (t, m) in other.changes {
            self.add(t, m);
        }
    }

    pub fn get(&self, tuple: &Tuple) -> i64 {
        self.changes.get(tuple).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, i64)> {
        self.changes.iter().map(|(t, &m)| (t, m))
    }

    pub fn into_changes(self) -> HashMap<Tuple, i64> {
        self.changes
    }

    pub fn negated(&self) -> DeltaBag {
        DeltaBag {
            schema: self.schema.clone(),
            changes: self.changes.iter().map(|(t, m)| (t.clone(), -m)).collect(),
        }
    }

    /// The delta turning `old` into `new`.
    pub fn diff(schema: Vec<String>, old: &TupleBag, new: &TupleBag) -> DeltaBag {
        let mut d = DeltaBag::new(schema);
        for (t, &m) in new {
            d.add(t.clone(), m as i64);
        }
        for (t, &m) in old {
            d.add(t.clone(), -(m as i64));
        }
        d
    }

    /// Applies this delta to `bag`, failing without modification if any
    /// multiplicity would drop below zero.
    pub fn apply_to(&self, bag: &mut TupleBag) -> Result<(), EngineError> {
        for (t, &m) in &self.changes {
            let current = bag.get(t).copied().unwrap_or(0) as i64;
            if current + m < 0 {
                return Err(EngineError::NegativeMultiplicity {
                    tuple: format!("{t:?}"),
                    multiplicity: current + m,
                });
            }
        }
        for (t, &m) in &self.changes {
            let next = bag.get(t).copied().unwrap_or(0) as i64 + m;
            if next == 0 {
                bag.remove(t);
            } else {
                bag.insert(t.clone(), next as u64);
            }
        }
        Ok(())
    }
}

/// Builds a bag from tuples, counting duplicates.
pub fn bag_of(tuples: impl IntoIterator<Item = Tuple>) -> TupleBag {
    let mut bag = TupleBag::new();
    for t in tuples {
        *bag.entry(t).or_insert(0) += 1;
    }
    bag
}
