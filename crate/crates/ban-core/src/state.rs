//! Global network states.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::VarId;

/// A total Boolean assignment to an ordered automaton set.
///
/// Coordinates follow the sorted id list; for a network over `1..=n` the
/// coordinate of automaton `i` is simply position `i - 1`. States order and
/// print with coordinate 1 first, i.e. `(1,1,1,0,0,1)` is `"111001"`, and the
/// numeric reading of a state takes coordinate 1 as the least significant
/// bit.
#[derive(Clone, Debug)]
pub struct State {
    ids: Arc<[VarId]>,
    bits: Vec<bool>,
}

impl State {
    pub fn new(ids: Arc<[VarId]>, bits: Vec<bool>) -> Result<State> {
        if ids.len() != bits.len() {
            return Err(Error::StateLength {
                expected: ids.len(),
                got: bits.len(),
            });
        }
        Ok(State { ids, bits })
    }

    pub fn zeros(ids: Arc<[VarId]>) -> State {
        let bits = vec![false; ids.len()];
        State { ids, bits }
    }

    /// Build from the numeric reading: bit `k` of `mask` is coordinate `k`.
    pub(crate) fn from_mask(ids: Arc<[VarId]>, mask: u64) -> State {
        let bits = (0..ids.len()).map(|k| mask >> k & 1 == 1).collect();
        State { ids, bits }
    }

    pub(crate) fn mask(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (k, &b)| m | (b as u64) << k)
    }

    pub fn ids(&self) -> &[VarId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of automaton `id`, or `None` when the id is not a coordinate.
    pub fn get(&self, id: VarId) -> Option<bool> {
        self.ids.binary_search(&id).ok().map(|k| self.bits[k])
    }

    pub fn bit(&self, position: usize) -> bool {
        self.bits[position]
    }

    /// Copy with automaton `id` set to `value`.
    pub fn updated(&self, id: VarId, value: bool) -> Result<State> {
        let k = self
            .ids
            .binary_search(&id)
            .map_err(|_| Error::UnknownAutomaton(id))?;
        let mut bits = self.bits.clone();
        bits[k] = value;
        Ok(State {
            ids: self.ids.clone(),
            bits,
        })
    }

    /// Copy with automaton `id` flipped.
    pub fn flipped(&self, id: VarId) -> Result<State> {
        let current = self.get(id).ok_or(Error::UnknownAutomaton(id))?;
        self.updated(id, !current)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.ids.iter().copied().zip(self.bits.iter().copied())
    }
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        *self.ids == *other.ids && self.bits == other.bits
    }
}

impl Eq for State {}

impl std::hash::Hash for State {
    fn hash<H: std::hash::Hasher>(&self, hasher: &mut H) {
        self.ids.hash(hasher);
        self.bits.hash(hasher);
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // Numeric order (coordinate 1 least significant) within an id set.
        self.ids
            .cmp(&other.ids)
            .then_with(|| self.bits.iter().rev().cmp(other.bits.iter().rev()))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

// Serializes as the same coordinate-1-first bit-string Display emits.
impl serde::Serialize for State {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
