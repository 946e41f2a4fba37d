//! Construction choices and the bijections they index: permutations whose
//! ascent bottoms lie in a set `S`, two families of inversion tables, and
//! ballots with prescribed block minima.
//!
//! Throughout, `S = {s_1 < ... < s_k}` is a subset of `[n-1]`, and
//! `s_0 = 0`, `s_{k+1} = n`.

use serde::{Deserialize, Serialize};

use crate::{Ballot, Error, IntSet, InversionTable, Permutation, Result};

/// A digit word `c_1 ... c_n` where `c_i` may range over `[0, r]`, `r`
/// being the number of elements of `S` that are at most `n - i`.
///
/// JSON: `{"n": 8, "S": [3,5,6,7], "digits": [4,2,0,0,1,0,0,0]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChoiceRepr", into = "ChoiceRepr")]
pub struct ConstructionChoice {
    n: usize,
    set: IntSet,
    digits: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ChoiceRepr {
    n: usize,
    #[serde(rename = "S")]
    set: IntSet,
    digits: Vec<u32>,
}

impl TryFrom<ChoiceRepr> for ConstructionChoice {
    type Error = Error;

    fn try_from(r: ChoiceRepr) -> Result<Self> {
        ConstructionChoice::new(r.n, r.set, r.digits)
    }
}

impl From<ConstructionChoice> for ChoiceRepr {
    fn from(c: ConstructionChoice) -> Self {
        ChoiceRepr {
            n: c.n,
            set: c.set,
            digits: c.digits,
        }
    }
}

/// Upper bound of digit `c_i` (1-based `i`).
fn digit_bound(set: &IntSet, n: usize, i: usize) -> u32 {
    set.iter().filter(|&s| s as usize <= n - i).count() as u32
}

fn check_set(n: usize, set: &IntSet) -> Result<()> {
    set.check_within(n.saturating_sub(1) as u32)
}

impl ConstructionChoice {
    pub fn new(n: usize, set: IntSet, digits: Vec<u32>) -> Result<Self> {
        check_set(n, &set)?;
        if digits.len() != n {
            return Err(Error::InvalidConstructionChoice(format!(
                "expected {n} digits, got {}",
                digits.len()
            )));
        }
        for (i, &c) in digits.iter().enumerate() {
            let bound = digit_bound(&set, n, i + 1);
            if c > bound {
                return Err(Error::InvalidConstructionChoice(format!(
                    "digit {} is {c}, must be at most {bound}",
                    i + 1
                )));
            }
        }
        Ok(Self { n, set, digits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&self) -> &IntSet {
        &self.set
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `|CC_n(S)| = prod_r r^(s_r - s_{r-1})`, as a machine integer.
    pub fn count(n: usize, set: &IntSet) -> Result<u128> {
        check_set(n, set)?;
        (1..=n)
            .try_fold(1u128, |acc, i| {
                acc.checked_mul(u128::from(digit_bound(set, n, i)) + 1)
            })
            .ok_or(Error::SizeGuard {
                what: "construction choice count",
                max: 128,
                got: n,
            })
    }

    /// Every construction choice for `(n, S)`, lexicographically.
    pub fn all(n: usize, set: &IntSet) -> Result<Vec<ConstructionChoice>> {
        check_set(n, set)?;
        let bounds: Vec<u32> = (1..=n).map(|i| digit_bound(set, n, i)).collect();
        let mut out = Vec::new();
        let mut digits = vec![0u32; n];
        loop {
            out.push(Self {
                n,
                set: set.clone(),
                digits: digits.clone(),
            });
            let Some(i) = (0..n).rposition(|i| digits[i] < bounds[i]) else {
                return Ok(out);
            };
            digits[i] += 1;
            for d in &mut digits[i + 1..] {
                *d = 0;
            }
        }
    }

    /// `s_r` with `s_0 = 0`.
    fn s(&self, r: u32) -> u32 {
        if r == 0 {
            0
        } else {
            self.set
                .iter()
                .nth(r as usize - 1)
                .expect("digit within bound")
        }
    }

    /// Build a permutation by inserting `1, 2, ..., n` at active sites.
    ///
    /// Site 0 is the front of the word; site `r` sits immediately to the
    /// right of `s_r` and opens once `s_r` has been inserted. Element `a`
    /// goes to site `c_{n+1-a}`.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.n;
        let mut word: Vec<u32> = Vec::with_capacity(n);
        for a in 1..=n as u32 {
            let site = self.digits[n - a as usize];
            let at = if site == 0 {
                0
            } else {
                let anchor = self.s(site);
                word.iter()
                    .position(|&x| x == anchor)
                    .expect("site is open")
                    + 1
            };
            word.insert(at, a);
        }
        Permutation::new(word).expect("insertion builds a permutation")
    }

    /// Recover the construction choice of `perm` with respect to `set` by
    /// removing `n, n-1, ..., 1` and recording the site each one sat in.
    pub fn from_permutation(perm: &Permutation, set: &IntSet) -> Result<Self> {
        let n = perm.len();
        check_set(n, set)?;
        let mut word = perm.as_slice().to_vec();
        let mut digits = vec![0u32; n];
        for a in (1..=n as u32).rev() {
            let pos = word
                .iter()
                .position(|&x| x == a)
                .expect("permutation entry");
            if pos > 0 {
                let left = word[pos - 1];
                // every remaining entry is smaller than a, so left is an ascent bottom
                let r = set
                    .iter()
                    .position(|s| s == left)
                    .ok_or(Error::AscentBottomOutsideSet(left))?;
                digits[n - a as usize] = r as u32 + 1;
            }
            word.remove(pos);
        }
        Self::new(n, set.clone(), digits)
    }

    /// `b_i = s_{c_i}`: the table whose entries lie in `{0} ∪ S`.
    pub fn to_inversion_table_subset(&self) -> InversionTable {
        InversionTable::new(self.digits.iter().map(|&c| self.s(c)).collect())
            .expect("digit bounds keep entries in range")
    }

    /// Inverse of [`to_inversion_table_subset`](Self::to_inversion_table_subset).
    pub fn from_inversion_table_subset(table: &InversionTable, set: &IntSet) -> Result<Self> {
        let n = table.len();
        check_set(n, set)?;
        let digits = table
            .as_slice()
            .iter()
            .map(|&b| {
                if b == 0 {
                    Ok(0)
                } else {
                    set.iter()
                        .position(|s| s == b)
                        .map(|r| r as u32 + 1)
                        .ok_or_else(|| {
                            Error::InvalidInversionTable(format!("entry {b} is not in {set}"))
                        })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, set.clone(), digits)
    }

    /// Block minima of the ballots indexed by `(n, S)`: `{1} ∪ {s + 1}`.
    pub fn ballot_minima(&self) -> IntSet {
        block_minima(&self.set)
    }

    /// Fill `k + 1` blocks with `n, n-1, ..., 1`: `a = n + 1 - i` goes into
    /// the `c_i`-th block still open (counting from 0, left to right), and a
    /// block closes as soon as it receives one of the prescribed minima.
    pub fn to_ballot(&self) -> Ballot {
        if self.n == 0 {
            return Ballot::empty();
        }
        let minima = self.ballot_minima();
        let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); self.set.len() + 1];
        let mut open: Vec<usize> = (0..blocks.len()).collect();
        for (i, &c) in self.digits.iter().enumerate() {
            let a = (self.n - i) as u32;
            let b = open[c as usize];
            blocks[b].push(a);
            if minima.contains(a) {
                open.remove(c as usize);
            }
        }
        Ballot::new(blocks).expect("every block receives its minimum")
    }

    /// Inverse of [`to_ballot`](Self::to_ballot).
    pub fn from_ballot(ballot: &Ballot, set: &IntSet) -> Result<Self> {
        let n = ballot.element_count();
        check_set(n, set)?;
        if n == 0 {
            return Self::new(0, set.clone(), Vec::new());
        }
        let minima = block_minima(set);
        let actual: IntSet = ballot.blocks().iter().map(|b| b[0]).collect();
        if ballot.underlying() != IntSet::range(n as u32)
            || ballot.block_count() != set.len() + 1
            || actual != minima
        {
            return Err(Error::InvalidBallot(format!(
                "expected {} blocks on [{n}] with minima {minima}",
                set.len() + 1
            )));
        }
        let mut open: Vec<usize> = (0..ballot.block_count()).collect();
        let mut digits = vec![0u32; n];
        for (i, d) in digits.iter_mut().enumerate() {
            let a = (n - i) as u32;
            let b = ballot
                .blocks()
                .iter()
                .position(|blk| blk.contains(&a))
                .expect("covers [n]");
            let c = open.iter().position(|&o| o == b).expect("block still open");
            *d = c as u32;
            if minima.contains(a) {
                open.remove(c);
            }
        }
        Self::new(n, set.clone(), digits)
    }

    /// The table whose missing values lie in `{ n - s : s in S }`, reached
    /// through: ballot, decreasing-block permutation `t`, its complement
    /// `t^c`, the construction choice of `t^c` with respect to its own
    /// ascent bottoms, and finally the subset table of that choice.
    pub fn to_inversion_table_missing(&self) -> InversionTable {
        self.missing_chain().invtab
    }

    /// Every intermediate of [`to_inversion_table_missing`](Self::to_inversion_table_missing).
    pub fn missing_chain(&self) -> MissingChain {
        let ballot = self.to_ballot();
        let tau = ballot_to_perm_decreasing(&ballot);
        let complement = tau.complement();
        let bottoms = complement.ascent_bottom_set();
        let choice = Self::from_permutation(&complement, &bottoms)
            .expect("ascent bottoms lie in their own set");
        let invtab = choice.to_inversion_table_subset();
        MissingChain {
            ballot,
            tau,
            complement,
            bottoms,
            choice,
            invtab,
        }
    }

    /// Inverse of [`to_inversion_table_missing`](Self::to_inversion_table_missing).
    pub fn from_inversion_table_missing(table: &InversionTable, set: &IntSet) -> Result<Self> {
        let n = table.len();
        check_set(n, set)?;
        let bottoms = table.dent().difference(&IntSet::from([0]));
        let choice = Self::from_inversion_table_subset(table, &bottoms)?;
        let tau = choice.to_permutation().complement();
        let ballot = split_after_minima(&tau, &block_minima(set))?;
        Self::from_ballot(&ballot, set)
    }
}

fn block_minima(set: &IntSet) -> IntSet {
    std::iter::once(1)
        .chain(set.iter().map(|s| s + 1))
        .collect()
}

/// Cut a word after each entry of `minima`; each piece must be decreasing.
fn split_after_minima(perm: &Permutation, minima: &IntSet) -> Result<Ballot> {
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    for &a in perm.as_slice() {
        current.push(a);
        if minima.contains(a) {
            blocks.push(std::mem::take(&mut current));
        }
    }
    let decreasing = blocks.iter().all(|b| b.windows(2).all(|w| w[0] > w[1]));
    if !current.is_empty() || !decreasing {
        return Err(Error::InvalidInversionTable(format!(
            "{perm} does not split into decreasing blocks ending at {minima}"
        )));
    }
    Ballot::new(blocks)
}

/// Intermediates of the missing-entry correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingChain {
    pub ballot: Ballot,
    pub tau: Permutation,
    pub complement: Permutation,
    pub bottoms: IntSet,
    pub choice: ConstructionChoice,
    pub invtab: InversionTable,
}

/// Concatenate the blocks, each written in decreasing order.
pub fn ballot_to_perm_decreasing(ballot: &Ballot) -> Permutation {
    let word = ballot
        .blocks()
        .iter()
        .flat_map(|b| b.iter().rev().copied())
        .collect();
    Permutation::new(word).expect("ballot on [n]")
}
