//! Finite sets of non-negative integers, kept sorted.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite set of integers. Serializes as a sorted JSON array.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntSet(BTreeSet<u32>);

impl IntSet {
    pub fn new() -> Self {
        Self(BTreeSet::new())
    }

    /// `{1, ..., n}`.
    pub fn range(n: u32) -> Self {
        (1..=n).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.contains(&x)
    }

    pub fn insert(&mut self, x: u32) -> bool {
        self.0.insert(x)
    }

    pub fn remove(&mut self, x: u32) -> bool {
        self.0.remove(&x)
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u32> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn intersection(&self, other: &IntSet) -> IntSet {
        self.0.intersection(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &IntSet) -> IntSet {
        self.0.difference(&other.0).copied().collect()
    }

    /// All subsets, in binary-counter order over the ascending element list
    /// (bit `r` selects the `r`-th smallest element).
    pub fn subsets(&self) -> impl Iterator<Item = IntSet> + '_ {
        let elems = self.to_vec();
        assert!(elems.len() < 64, "too many elements to iterate subsets");
        (0u64..1 << elems.len()).map(move |mask| {
            elems
                .iter()
                .enumerate()
                .filter(|(r, _)| mask >> r & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
    }

    /// Check that every element lies in `[1, max]`.
    pub fn check_within(&self, max: u32) -> crate::Result<()> {
        if self.first().is_some_and(|m| m == 0) || self.last().is_some_and(|m| m > max) {
            return Err(crate::Error::SetOutOfRange {
                set: self.to_vec(),
                max,
            });
        }
        Ok(())
    }
}

impl FromIterator<u32> for IntSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[u32; N]> for IntSet {
    fn from(xs: [u32; N]) -> Self {
        xs.into_iter().collect()
    }
}

impl From<&[u32]> for IntSet {
    fn from(xs: &[u32]) -> Self {
        xs.iter().copied().collect()
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}
