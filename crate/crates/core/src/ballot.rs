//! Ballots (ordered set partitions) and the split/merge involution that
//! pairs off ballots of opposite sign.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::guard;
use crate::perm::next_permutation;
use crate::{Error, IntSet, Result};

/// Largest underlying set [`Ballot::enumerate`] accepts.
pub const MAX_BALLOT_ENUMERATION: usize = 9;

/// An ordered sequence of disjoint, non-empty blocks. Each block is kept
/// sorted ascending; the order of the blocks themselves is significant.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct Ballot {
    blocks: Vec<Vec<u32>>,
}

impl Ballot {
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = IntSet::new();
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidBallot("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if !seen.insert(x) {
                    return Err(Error::InvalidBallot(format!("element {x} appears twice")));
                }
            }
        }
        Ok(Self { blocks })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `{u_1}{u_2}...{u_n}` with `u_1 < ... < u_n`.
    pub fn increasing_singletons(set: &IntSet) -> Self {
        Self {
            blocks: set.iter().map(|x| vec![x]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn element_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn underlying(&self) -> IntSet {
        self.elements().collect()
    }

    /// Elements block by block, each block ascending.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn min(&self) -> Option<u32> {
        self.elements().min()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.blocks.iter().any(|b| b.binary_search(&x).is_ok())
    }

    /// `(-1)^k` for `k` blocks.
    pub fn sign(&self) -> i8 {
        if self.blocks.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// True when every block is a singleton and the blocks increase.
    pub fn is_increasing_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
            && self.blocks.windows(2).all(|w| w[0][0] < w[1][0])
    }

    /// Delete `x`, dropping its block if that leaves it empty.
    pub(crate) fn remove_element(&mut self, x: u32) -> bool {
        for i in 0..self.blocks.len() {
            if let Ok(pos) = self.blocks[i].binary_search(&x) {
                self.blocks[i].remove(pos);
                if self.blocks[i].is_empty() {
                    self.blocks.remove(i);
                }
                return true;
            }
        }
        false
    }

    pub(crate) fn push_front_singleton(&mut self, x: u32) {
        debug_assert!(!self.contains(x));
        self.blocks.insert(0, vec![x]);
    }

    pub(crate) fn push_back_singleton(&mut self, x: u32) {
        debug_assert!(!self.contains(x));
        self.blocks.push(vec![x]);
    }

    /// The sign-reversing split/merge involution.
    ///
    /// Elements are visited in increasing order. While the current element
    /// `x` forms the leading singleton block of the unvisited suffix, that
    /// block is set aside and the scan moves on. At the first other `x`: if
    /// its block has two or more elements, `x` is split off into a new block
    /// `{x}` immediately to the right; otherwise `{x}` is merged into the
    /// block immediately to its left. The all-singletons increasing ballot is
    /// the only fixed point.
    pub fn involution(&self) -> Ballot {
        let mut out = self.clone();
        let mut prefix = 0;
        for x in self.underlying().iter() {
            if prefix < out.blocks.len() && out.blocks[prefix] == [x] {
                prefix += 1;
                continue;
            }
            let i = out
                .blocks
                .iter()
                .position(|b| b.binary_search(&x).is_ok())
                .expect("element belongs to some block");
            debug_assert!(i >= prefix);
            if out.blocks[i].len() >= 2 {
                out.blocks[i].retain(|&y| y != x);
                out.blocks.insert(i + 1, vec![x]);
            } else {
                // i > prefix here: a singleton at the head of the suffix would
                // have been skipped above.
                out.blocks.remove(i);
                let left = &mut out.blocks[i - 1];
                let pos = left.binary_search(&x).unwrap_err();
                left.insert(pos, x);
            }
            return out;
        }
        out
    }

    pub fn is_involution_fixed(&self) -> bool {
        self.involution() == *self
    }

    /// Every ballot on `set`, each exactly once: set partitions in
    /// restricted-growth order, then every ordering of the blocks.
    pub fn enumerate(set: &IntSet) -> Result<BallotIter> {
        guard("ballot enumeration", set.len(), MAX_BALLOT_ENUMERATION)?;
        Ok(BallotIter::new(set.to_vec()))
    }
}

impl TryFrom<Vec<Vec<u32>>> for Ballot {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(blocks)
    }
}

impl From<Ballot> for Vec<Vec<u32>> {
    fn from(b: Ballot) -> Self {
        b.blocks
    }
}

impl fmt::Debug for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ballot({self})")
    }
}

impl fmt::Display for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "∅");
        }
        for block in &self.blocks {
            write!(f, "{}", block.iter().copied().collect::<IntSet>())?;
        }
        Ok(())
    }
}

/// Lazy stream over all ballots of a set; see [`Ballot::enumerate`].
pub struct BallotIter {
    elems: Vec<u32>,
    // restricted growth string of the current set partition
    rgs: Option<Vec<usize>>,
    // current ordering of that partition's blocks
    order: Vec<usize>,
    fresh: bool,
}

impl BallotIter {
    fn new(elems: Vec<u32>) -> Self {
        let rgs = vec![0; elems.len()];
        let blocks = usize::from(!elems.is_empty());
        Self {
            elems,
            rgs: Some(rgs),
            order: (0..blocks).collect(),
            fresh: true,
        }
    }

    fn advance_partition(rgs: &mut [usize]) -> bool {
        // rgs[i] <= 1 + max(rgs[..i])
        for i in (1..rgs.len()).rev() {
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for BallotIter {
    type Item = Ballot;

    fn next(&mut self) -> Option<Ballot> {
        let rgs = self.rgs.as_mut()?;
        if !self.fresh && !next_permutation(&mut self.order) {
            if !Self::advance_partition(rgs) {
                self.rgs = None;
                return None;
            }
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            self.order = (0..blocks).collect();
        }
        self.fresh = false;
        let mut parts = vec![Vec::new(); self.order.len()];
        for (&x, &b) in self.elems.iter().zip(rgs.iter()) {
            parts[b].push(x);
        }
        let blocks = self
            .order
            .iter()
            .map(|&b| std::mem::take(&mut parts[b]))
            .collect();
        Some(Ballot { blocks })
    }
}

#[cfg(test)]
pub(crate) fn ballot(blocks: &[&[u32]]) -> Ballot {
    Ballot::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}
