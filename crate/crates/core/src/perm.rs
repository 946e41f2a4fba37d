//! Permutations in one-line notation, inversion tables, and the statistics
//! read off them: descent positions, ascent bottoms, distinct entries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, IntSet, Result};

/// A permutation of `{1, ..., n}` in one-line notation `a_1 ... a_n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &a in &word {
            let idx = a as usize;
            if a == 0 || idx > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {a} outside [1, {n}]"
                )));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidPermutation(format!("entry {a} repeated")));
            }
        }
        Ok(Self(word))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u32).collect())
    }

    /// `n n-1 ... 1`
    pub fn decreasing(n: usize) -> Self {
        Self((1..=n as u32).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Positions `i` (1-based) with `a_i > a_{i+1}`.
    pub fn descent_set(&self) -> IntSet {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Positions `i` (1-based) with `a_i < a_{i+1}`.
    pub fn ascent_set(&self) -> IntSet {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] < w[1])
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Values `a_i` with `a_i < a_{i+1}`.
    pub fn ascent_bottom_set(&self) -> IntSet {
        self.0
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| w[0])
            .collect()
    }

    /// `a_i -> n + 1 - a_i`.
    pub fn complement(&self) -> Self {
        let n1 = self.0.len() as u32 + 1;
        Self(self.0.iter().map(|&a| n1 - a).collect())
    }

    /// `a_n ... a_1`.
    pub fn reverse(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// `b_i` counts the larger entries standing to the left of `i`.
    pub fn inversion_table(&self) -> InversionTable {
        let n = self.0.len();
        let mut entries = vec![0u32; n];
        for (pos, &a) in self.0.iter().enumerate() {
            entries[a as usize - 1] = self.0[..pos].iter().filter(|&&b| b > a).count() as u32;
        }
        InversionTable(entries)
    }

    /// Relabel the entries through an order-preserving map `[n] -> labels`.
    pub fn relabel(&self, labels: &[u32]) -> Vec<u32> {
        self.0.iter().map(|&a| labels[a as usize - 1]).collect()
    }

    /// The permutation with the same relative order as `word` (distinct values).
    pub fn standardize(word: &[u32]) -> Self {
        let mut sorted = word.to_vec();
        sorted.sort_unstable();
        Self(
            word.iter()
                .map(|x| sorted.binary_search(x).expect("value present") as u32 + 1)
                .collect(),
        )
    }

    /// Every permutation of `[n]` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n as u32).collect()),
        }
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<u32>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.0)
    }
}

/// Single-digit words print without separators (`65783421`), longer entries
/// are space separated.
fn write_word(f: &mut fmt::Formatter<'_>, word: &[u32]) -> fmt::Result {
    let compact = word.iter().all(|&x| x < 10);
    for (i, x) in word.iter().enumerate() {
        if i > 0 && !compact {
            write!(f, " ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Lexicographic enumeration of `S_n`.
pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation(current))
    }
}

pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v
        .iter()
        .rposition(|x| *x > v[i])
        .expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// An inversion table `b_1 ... b_n` with `b_i` in `[0, n - i]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct InversionTable(Vec<u32>);

impl InversionTable {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        for (i, &b) in entries.iter().enumerate() {
            if b as usize > n - 1 - i {
                return Err(Error::InvalidInversionTable(format!(
                    "entry {} is {b}, must be at most {}",
                    i + 1,
                    n - 1 - i
                )));
            }
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// The set of distinct entries; may contain 0.
    pub fn dent(&self) -> IntSet {
        self.0.iter().copied().collect()
    }

    /// Values of `[n - 1]` that do not occur in the table.
    pub fn missing_entries(&self) -> IntSet {
        IntSet::range(self.0.len().saturating_sub(1) as u32).difference(&self.dent())
    }

    /// Rebuild the permutation by inserting `n, n-1, ..., 1`, each after
    /// exactly `b_i` of the (larger) entries already placed.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.0.len();
        let mut word = Vec::with_capacity(n);
        for i in (1..=n).rev() {
            word.insert(self.0[i - 1] as usize, i as u32);
        }
        Permutation(word)
    }

    /// Every inversion table of length `n`, in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = InversionTable> {
        let total: usize = (1..=n).product();
        (0..total).map(move |mut idx| {
            // mixed radix: the last positions vary fastest
            let mut entries = vec![0u32; n];
            for i in (0..n).rev() {
                let radix = n - i;
                entries[i] = (idx % radix) as u32;
                idx /= radix;
            }
            InversionTable(entries)
        })
    }
}

impl TryFrom<Vec<u32>> for InversionTable {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<InversionTable> for Vec<u32> {
    fn from(t: InversionTable) -> Self {
        t.0
    }
}

impl fmt::Debug for InversionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InversionTable({self})")
    }
}

impl fmt::Display for InversionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.0)
    }
}

#[cfg(test)]
pub(crate) fn perm(word: &str) -> Permutation {
    Permutation::new(word.bytes().map(|b| (b - b'0') as u32).collect()).unwrap()
}

#[cfg(test)]
pub(crate) fn table(word: &str) -> InversionTable {
    InversionTable::new(word.bytes().map(|b| (b - b'0') as u32).collect()).unwrap()
}
