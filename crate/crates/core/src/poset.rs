//! Labeled posets, the hook map from ballot matrices, interval-order
//! predicates and a brute-force enumerator of labeled interval orders.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::guard;
use crate::{BallotMatrix, Error, IntSet, Result};

/// Largest `n` accepted by [`enumerate_labeled_interval_orders`].
pub const MAX_POSET_ENUMERATION: usize = 5;

/// A strict partial order. `less` is stored transitively closed, so two
/// posets are equal exactly when they relate the same labeled pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PosetRepr", into = "PosetRepr")]
pub struct Poset {
    elements: IntSet,
    less: BTreeSet<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct PosetRepr {
    elements: IntSet,
    less: Vec<(u32, u32)>,
}

impl TryFrom<PosetRepr> for Poset {
    type Error = Error;

    fn try_from(repr: PosetRepr) -> Result<Self> {
        Poset::new(repr.elements, repr.less)
    }
}

impl From<Poset> for PosetRepr {
    fn from(p: Poset) -> Self {
        PosetRepr {
            elements: p.elements,
            less: p.less.into_iter().collect(),
        }
    }
}

impl Poset {
    /// Build the transitive closure of `relations`. Fails on unknown
    /// elements or when the closure is not irreflexive.
    pub fn new(elements: IntSet, relations: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut less = BTreeSet::new();
        for (x, y) in relations {
            for z in [x, y] {
                if !elements.contains(z) {
                    return Err(Error::UnknownElement(z));
                }
            }
            less.insert((x, y));
        }
        let closed = transitive_closure(&elements, less);
        if let Some(&(x, _)) = closed.iter().find(|(x, y)| x == y) {
            return Err(Error::InvalidPoset(format!(
                "relation has a cycle through {x}"
            )));
        }
        Ok(Self {
            elements,
            less: closed,
        })
    }

    pub fn antichain(elements: IntSet) -> Self {
        Self {
            elements,
            less: BTreeSet::new(),
        }
    }

    pub fn elements(&self) -> &IntSet {
        &self.elements
    }

    pub fn relations(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.less.iter().copied()
    }

    pub fn lt(&self, x: u32, y: u32) -> bool {
        self.less.contains(&(x, y))
    }

    pub fn comparable(&self, x: u32, y: u32) -> bool {
        self.lt(x, y) || self.lt(y, x)
    }

    /// `{ y : y < x }`.
    pub fn downset(&self, x: u32) -> Result<IntSet> {
        if !self.elements.contains(x) {
            return Err(Error::UnknownElement(x));
        }
        Ok(self
            .less
            .iter()
            .filter(|&&(_, b)| b == x)
            .map(|&(a, _)| a)
            .collect())
    }

    /// Pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn cover_relations(&self) -> Vec<(u32, u32)> {
        self.relations()
            .filter(|&(x, y)| !self.elements.iter().any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    /// Interval order test: the strict downsets are totally ordered by
    /// inclusion.
    pub fn is_interval_order(&self) -> bool {
        let mut downsets: Vec<IntSet> = self
            .elements
            .iter()
            .map(|x| self.downset(x).expect("own element"))
            .collect();
        downsets.sort_by_key(IntSet::len);
        downsets.windows(2).all(|w| w[0].is_subset(&w[1]))
    }

    /// Interval order test by forbidden subposet: no `a < b` and `c < d`
    /// with each of `a, b` incomparable to each of `c, d`.
    pub fn is_two_plus_two_free(&self) -> bool {
        let pairs: Vec<_> = self.relations().collect();
        !pairs.iter().any(|&(a, b)| {
            pairs.iter().any(|&(c, d)| {
                [a, b]
                    .iter()
                    .all(|&u| [c, d].iter().all(|&v| u != v && !self.comparable(u, v)))
            })
        })
    }
}

fn transitive_closure(elements: &IntSet, mut less: BTreeSet<(u32, u32)>) -> BTreeSet<(u32, u32)> {
    // Warshall, pivoting on each element in turn
    for k in elements.iter() {
        let into: Vec<u32> = less.iter().filter(|p| p.1 == k).map(|p| p.0).collect();
        let out: Vec<u32> = less.iter().filter(|p| p.0 == k).map(|p| p.1).collect();
        for &i in &into {
            for &j in &out {
                less.insert((i, j));
            }
        }
    }
    less
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({self})")
    }
}

/// Lists the cover relations, then any isolated elements.
impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers = self.cover_relations();
        let mut parts: Vec<String> = covers.iter().map(|(x, y)| format!("{x}<{y}")).collect();
        parts.extend(
            self.elements
                .iter()
                .filter(|&x| !covers.iter().any(|&(a, b)| a == x || b == x))
                .map(|x| x.to_string()),
        );
        write!(f, "{}", parts.join(", "))
    }
}

/// The poset of a ballot matrix: `x < y` whenever the column of `x` is
/// strictly smaller than the row of `y`. The block structure of the entries
/// plays no part.
pub fn poset_of(a: &BallotMatrix) -> Poset {
    let placed: Vec<(u32, usize, usize)> = a
        .positions()
        .flat_map(|(r, c)| a.get(r, c).elements().map(move |x| (x, r, c)))
        .collect();
    let mut less = BTreeSet::new();
    for &(x, _, cx) in &placed {
        for &(y, ry, _) in &placed {
            if cx < ry {
                less.insert((x, y));
            }
        }
    }
    // already transitive: cx < ry <= cy < rz
    Poset {
        elements: a.underlying(),
        less,
    }
}

/// Every labeled interval order on `[n]`, found by exhaustive search over
/// relations on `[n]`: each unordered pair is set to `<`, `>` or
/// incomparable, candidates violating transitivity are pruned, and the
/// survivors are filtered by the downset-chain test.
pub fn enumerate_labeled_interval_orders(n: usize) -> Result<Vec<Poset>> {
    guard(
        "labeled interval order enumeration",
        n,
        MAX_POSET_ENUMERATION,
    )?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut rel = vec![vec![false; n]; n];
    let mut out = Vec::new();
    search(&pairs, 0, &mut rel, &mut out);
    Ok(out.into_iter().filter(Poset::is_interval_order).collect())
}

/// Every strict partial order on `[n]` (no interval filter).
pub fn enumerate_labeled_posets(n: usize) -> Result<Vec<Poset>> {
    guard("labeled poset enumeration", n, MAX_POSET_ENUMERATION)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut rel = vec![vec![false; n]; n];
    let mut out = Vec::new();
    search(&pairs, 0, &mut rel, &mut out);
    Ok(out)
}

fn search(pairs: &[(usize, usize)], k: usize, rel: &mut [Vec<bool>], out: &mut Vec<Poset>) {
    if k == pairs.len() {
        if is_transitive(rel) {
            let n = rel.len();
            let less = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| rel[i][j])
                .map(|(i, j)| (i as u32 + 1, j as u32 + 1))
                .collect();
            out.push(Poset {
                elements: IntSet::range(n as u32),
                less,
            });
        }
        return;
    }
    let (i, j) = pairs[k];
    for state in 0..3 {
        rel[i][j] = state == 1;
        rel[j][i] = state == 2;
        if decided_consistent(pairs, k, rel) {
            search(pairs, k + 1, rel, out);
        }
    }
    rel[i][j] = false;
    rel[j][i] = false;
}

/// Prune: among pairs decided so far, no `a < b < c` may lack a decided
/// `a < c` when `(a, c)` has already been fixed.
fn decided_consistent(pairs: &[(usize, usize)], k: usize, rel: &[Vec<bool>]) -> bool {
    let decided = |a: usize, b: usize| {
        let key = (a.min(b), a.max(b));
        pairs[..=k].contains(&key)
    };
    let n = rel.len();
    let (i, j) = pairs[k];
    let touches = |a: usize, b: usize, c: usize| [a, b, c].iter().any(|&x| x == i || x == j);
    (0..n).all(|a| {
        (0..n).filter(|&b| rel[a][b]).all(|b| {
            (0..n)
                .filter(|&c| rel[b][c] && touches(a, b, c))
                .all(|c| a != c && !(decided(a, c) && !rel[a][c]))
        })
    })
}

fn is_transitive(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n)
        .all(|a| (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || (a != c && rel[a][c]))))
}
