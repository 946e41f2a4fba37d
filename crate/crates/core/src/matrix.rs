//! Ballot matrices and the involutions on them.
//!
//! A ballot matrix of dimension `m` is an upper-triangular `m x m` array of
//! pairwise disjoint ballots in which every row holds at least one element.
//! Its sign is `(-1)^(l + m)` where `l` is the total number of blocks.
//!
//! Rows and columns are 0-based throughout this module; position `(r, c)`
//! exists only for `r <= c`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::guard;
use crate::{Ballot, Error, IntSet, Result};

/// Largest underlying set [`BallotMatrix::enumerate`] accepts.
pub const MAX_MATRIX_ENUMERATION: usize = 4;

/// How the componentwise involution picks the entry it acts on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EntryOrder {
    /// Row-major over positions `(r, c)`.
    #[default]
    Positional,
    /// By the minimum element of each non-empty entry.
    MinElement,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct BallotMatrix {
    m: usize,
    // dense m*m storage, below-diagonal cells stay empty
    cells: Vec<Ballot>,
}

/// JSON form: `{"m": 3, "rows": [[b11, b12, b13], [b22, b23], [b33]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    m: usize,
    rows: Vec<Vec<Ballot>>,
}

impl TryFrom<MatrixRepr> for BallotMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.rows.len() != repr.m {
            return Err(Error::InvalidMatrix(format!(
                "m is {} but {} rows were given",
                repr.m,
                repr.rows.len()
            )));
        }
        BallotMatrix::new(repr.rows)
    }
}

impl From<BallotMatrix> for MatrixRepr {
    fn from(a: BallotMatrix) -> Self {
        MatrixRepr {
            m: a.m,
            rows: a.rows(),
        }
    }
}

impl BallotMatrix {
    /// Build from the upper triangle: `rows[r]` lists the entries in columns
    /// `r..m`.
    pub fn new(rows: Vec<Vec<Ballot>>) -> Result<Self> {
        let m = rows.len();
        let mut a = Self::empty_grid(m);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != m - r {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    m - r
                )));
            }
            for (offset, ballot) in row.into_iter().enumerate() {
                a.cells[r * m + r + offset] = ballot;
            }
        }
        a.validate()?;
        Ok(a)
    }

    /// The `0 x 0` matrix, the only ballot matrix on the empty set.
    pub fn empty() -> Self {
        Self::empty_grid(0)
    }

    fn empty_grid(m: usize) -> Self {
        Self {
            m,
            cells: vec![Ballot::empty(); m * m],
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = IntSet::new();
        for r in 0..self.m {
            let mut row_elements = 0;
            for c in r..self.m {
                for x in self.get(r, c).elements() {
                    if !seen.insert(x) {
                        return Err(Error::InvalidMatrix(format!("element {x} appears twice")));
                    }
                    row_elements += 1;
                }
            }
            if row_elements == 0 {
                return Err(Error::InvalidMatrix(format!("row {} is empty", r + 1)));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Entry at 0-based `(r, c)`, `r <= c < m`.
    pub fn get(&self, r: usize, c: usize) -> &Ballot {
        debug_assert!(r <= c && c < self.m);
        &self.cells[r * self.m + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut Ballot {
        debug_assert!(r <= c && c < self.m);
        &mut self.cells[r * self.m + c]
    }

    /// Upper-triangle rows, as serialized.
    pub fn rows(&self) -> Vec<Vec<Ballot>> {
        (0..self.m)
            .map(|r| (r..self.m).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }

    /// Upper-triangle positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.m;
        (0..m).flat_map(move |r| (r..m).map(move |c| (r, c)))
    }

    pub fn underlying(&self) -> IntSet {
        self.cells.iter().flat_map(Ballot::elements).collect()
    }

    pub fn element_count(&self) -> usize {
        self.cells.iter().map(Ballot::element_count).sum()
    }

    /// Total number of blocks over all entries.
    pub fn block_count(&self) -> usize {
        self.cells.iter().map(Ballot::block_count).sum()
    }

    /// `(-1)^(blocks + m)`.
    pub fn sign(&self) -> i8 {
        if (self.block_count() + self.m).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// 0-based `(row, column)` of the entry holding `x`.
    pub fn position_of(&self, x: u32) -> Option<(usize, usize)> {
        self.positions().find(|&(r, c)| self.get(r, c).contains(x))
    }

    pub fn row_elements(&self, r: usize) -> impl Iterator<Item = u32> + '_ {
        (r..self.m).flat_map(move |c| self.get(r, c).elements())
    }

    pub fn row_len(&self, r: usize) -> usize {
        (r..self.m).map(|c| self.get(r, c).element_count()).sum()
    }

    pub fn row_min(&self, r: usize) -> u32 {
        self.row_elements(r).min().expect("rows are never empty")
    }

    pub fn column_is_empty(&self, c: usize) -> bool {
        (0..=c).all(|r| self.get(r, c).is_empty())
    }

    /// True when every entry is a (possibly empty) increasing run of singletons.
    pub fn is_psi_fixed(&self) -> bool {
        self.cells.iter().all(Ballot::is_involution_fixed)
    }

    /// Componentwise involution in the default positional order.
    pub fn psi(&self) -> BallotMatrix {
        self.psi_with(EntryOrder::Positional)
    }

    /// Apply the ballot involution to the first entry, in `order`, that it
    /// does not fix.
    pub fn psi_with(&self, order: EntryOrder) -> BallotMatrix {
        let mut positions: Vec<_> = self.positions().collect();
        if order == EntryOrder::MinElement {
            positions.retain(|&(r, c)| !self.get(r, c).is_empty());
            positions.sort_by_key(|&(r, c)| self.get(r, c).min());
        }
        let mut out = self.clone();
        for (r, c) in positions {
            let image = self.get(r, c).involution();
            if image != *self.get(r, c) {
                *out.get_mut(r, c) = image;
                break;
            }
        }
        out
    }

    /// Pivot elements of a matrix fixed by [`psi`](Self::psi).
    ///
    /// `x` on row `r` is a pivot if its row holds at least two elements and
    /// `x` is the smallest of them, or if column `r` is empty, `{x}` is the
    /// only non-empty entry of row `r`, and `x` is smaller than every element
    /// of row `r + 1`. The second clause never applies on the last row.
    pub fn pivot_elements(&self) -> Result<IntSet> {
        if !self.is_psi_fixed() {
            return Err(Error::NotPsiFixed);
        }
        let mut pivots = IntSet::new();
        for r in 0..self.m {
            if self.row_len(r) >= 2 || self.is_lone_pivot_row(r) {
                pivots.insert(self.row_min(r));
            }
        }
        Ok(pivots)
    }

    fn is_lone_pivot_row(&self, r: usize) -> bool {
        r + 1 < self.m
            && self.row_len(r) == 1
            && self.column_is_empty(r)
            && self.row_min(r) < self.row_min(r + 1)
    }

    /// The pivot involution on matrices fixed by [`psi`](Self::psi).
    ///
    /// With `x` the smallest pivot, at `(r, c)`:
    /// * if row `r` holds other elements, `x` leaves it for a new row
    ///   inserted at index `r`, and a new empty column is inserted at index
    ///   `r`, so `x` lands at `(r, c + 1)`;
    /// * otherwise row `r` and the empty column `r` are removed and `{x}` is
    ///   prepended to the entry of row `r + 1` in `x`'s column.
    pub fn phi(&self) -> Result<BallotMatrix> {
        let pivots = self.pivot_elements()?;
        let Some(x) = pivots.first() else {
            return Ok(self.clone());
        };
        let (r, c) = self.position_of(x).expect("pivot is an element");
        let mut out = self.clone();
        if self.row_len(r) >= 2 {
            out.get_mut(r, c).remove_element(x);
            out = out.insert_empty_row_col(r);
            out.get_mut(r, c + 1).push_back_singleton(x);
        } else {
            out.get_mut(r, c).remove_element(x);
            out.get_mut(r + 1, c).push_front_singleton(x);
            out = out.remove_row_col(r);
        }
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// `phi(A)` when `A` is fixed by `psi`, `psi(A)` otherwise.
    pub fn eta(&self) -> BallotMatrix {
        self.eta_with(EntryOrder::Positional)
    }

    pub fn eta_with(&self, order: EntryOrder) -> BallotMatrix {
        let image = self.psi_with(order);
        if image == *self {
            self.phi().expect("psi-fixed by construction")
        } else {
            image
        }
    }

    pub fn is_eta_fixed(&self) -> bool {
        self.eta() == *self
    }

    /// Insert an empty row and an empty column, both at index `k`; entries
    /// at or past `k` shift down/right.
    pub(crate) fn insert_empty_row_col(&self, k: usize) -> BallotMatrix {
        assert!(k <= self.m);
        let mut out = Self::empty_grid(self.m + 1);
        let shift = |i: usize| if i >= k { i + 1 } else { i };
        for (r, c) in self.positions() {
            *out.get_mut(shift(r), shift(c)) = self.get(r, c).clone();
        }
        out
    }

    /// Delete row `k` and column `k`, which must both be empty.
    pub(crate) fn remove_row_col(&self, k: usize) -> BallotMatrix {
        assert!(k < self.m);
        let mut out = Self::empty_grid(self.m - 1);
        for (r, c) in self.positions() {
            let entry = self.get(r, c);
            if r == k || c == k {
                assert!(entry.is_empty(), "removed row/column must be empty");
                continue;
            }
            let unshift = |i: usize| if i > k { i - 1 } else { i };
            *out.get_mut(unshift(r), unshift(c)) = entry.clone();
        }
        out
    }

    pub(crate) fn set_cell(&mut self, r: usize, c: usize, ballot: Ballot) {
        *self.get_mut(r, c) = ballot;
    }

    pub(crate) fn remove_element(&mut self, x: u32) -> bool {
        self.cells.iter_mut().any(|b| b.remove_element(x))
    }

    pub(crate) fn push_back_singleton(&mut self, r: usize, c: usize, x: u32) {
        self.get_mut(r, c).push_back_singleton(x);
    }

    /// Every ballot matrix on `set`, ordered by dimension and then by entries.
    pub fn enumerate(set: &IntSet) -> Result<Vec<BallotMatrix>> {
        guard(
            "ballot matrix enumeration",
            set.len(),
            MAX_MATRIX_ENUMERATION,
        )?;
        let elems = set.to_vec();
        let n = elems.len();
        let mut out = Vec::new();
        if n == 0 {
            out.push(Self::empty());
            return Ok(out);
        }
        for m in 1..=n {
            let slots: Vec<(usize, usize)> =
                (0..m).flat_map(|r| (r..m).map(move |c| (r, c))).collect();
            let mut found = Vec::new();
            for_each_assignment(n, slots.len(), |assign| {
                let mut rows_hit = vec![false; m];
                for &s in assign {
                    rows_hit[slots[s].0] = true;
                }
                if rows_hit.contains(&false) {
                    return;
                }
                let mut parts = vec![IntSet::new(); slots.len()];
                for (&x, &s) in elems.iter().zip(assign) {
                    parts[s].insert(x);
                }
                let choices: Vec<Vec<Ballot>> = parts
                    .iter()
                    .map(|p| Ballot::enumerate(p).expect("parts are small").collect())
                    .collect();
                for_each_product(&choices, |picked| {
                    let mut a = Self::empty_grid(m);
                    for (&(r, c), b) in slots.iter().zip(picked) {
                        a.set_cell(r, c, (*b).clone());
                    }
                    found.push(a);
                });
            });
            found.sort();
            out.extend(found);
        }
        Ok(out)
    }
}

/// Call `f` on every word in `[0, base)^len`.
fn for_each_assignment(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut word = vec![0; len];
    loop {
        f(&word);
        let Some(i) = word.iter().rposition(|&d| d + 1 < base) else {
            return;
        };
        word[i] += 1;
        for d in &mut word[i + 1..] {
            *d = 0;
        }
    }
}

fn for_each_product<T>(choices: &[Vec<T>], mut f: impl FnMut(&[&T])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0; choices.len()];
    loop {
        let picked: Vec<&T> = idx.iter().zip(choices).map(|(&i, c)| &c[i]).collect();
        f(&picked);
        let Some(i) = (0..choices.len()).rposition(|i| idx[i] + 1 < choices[i].len()) else {
            return;
        };
        idx[i] += 1;
        for j in &mut idx[i + 1..] {
            *j = 0;
        }
    }
}

impl fmt::Debug for BallotMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallotMatrix{:?}", self.rows())
    }
}

/// One row per line, entries separated by spaces, `.` below the diagonal.
impl fmt::Display for BallotMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<Vec<String>> = (0..self.m)
            .map(|r| {
                (0..self.m)
                    .map(|c| {
                        if c < r {
                            ".".to_string()
                        } else {
                            self.get(r, c).to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let width = text
            .iter()
            .flatten()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0);
        for (r, row) in text.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (c, s) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{s:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Shorthand for tests: rows of the upper triangle, each entry a list of
/// blocks.
#[cfg(test)]
pub(crate) fn matrix(rows: &[&[&[&[u32]]]]) -> BallotMatrix {
    BallotMatrix::new(
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|entry| Ballot::new(entry.iter().map(|b| b.to_vec()).collect()).unwrap())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    const E: &[&[u32]] = &[];

    #[test]
    fn validation() {
        let one = |b: &[&[u32]]| Ballot::new(b.iter().map(|x| x.to_vec()).collect()).unwrap();
        assert!(BallotMatrix::new(vec![vec![one(&[&[1]]), one(&[])], vec![one(&[])]]).is_err());
        assert!(BallotMatrix::new(vec![vec![one(&[&[1]])], vec![one(&[&[2]])]]).is_err());
        assert!(
            BallotMatrix::new(vec![vec![one(&[&[1]]), one(&[&[1]])], vec![one(&[&[2]])]]).is_err()
        );
        assert!(BallotMatrix::new(vec![]).is_ok());
    }

    #[test]
    fn signs() {
        assert_eq!(matrix(&[&[&[&[1, 2]]]]).sign(), 1);
        assert_eq!(matrix(&[&[&[&[1], &[2]]]]).sign(), -1);
        assert_eq!(poset_example().sign(), -1);
        assert_eq!(BallotMatrix::empty().sign(), 1);
    }

    #[test]
    fn two_element_matrices() {
        let all = BallotMatrix::enumerate(&IntSet::from([1, 2])).unwrap();
        let positive: Vec<_> = all.iter().filter(|a| a.sign() == 1).collect();
        let negative: Vec<_> = all.iter().filter(|a| a.sign() == -1).collect();
        assert_eq!(positive.len(), 5);
        assert_eq!(negative.len(), 2);
        for expected in [
            matrix(&[&[&[&[1, 2]]]]),
            matrix(&[&[E, &[&[1]]], &[&[&[2]]]]),
            matrix(&[&[E, &[&[2]]], &[&[&[1]]]]),
            matrix(&[&[&[&[2]], E], &[&[&[1]]]]),
            matrix(&[&[&[&[1]], E], &[&[&[2]]]]),
        ] {
            assert!(positive.contains(&&expected), "{expected}");
        }
        assert!(negative.contains(&&matrix(&[&[&[&[1], &[2]]]])));
        assert!(negative.contains(&&matrix(&[&[&[&[2], &[1]]]])));
    }

    #[test]
    fn enumeration_edge_cases() {
        assert_eq!(
            BallotMatrix::enumerate(&IntSet::new()).unwrap(),
            vec![BallotMatrix::empty()]
        );
        assert!(BallotMatrix::enumerate(&IntSet::range(5)).is_err());
        let three = BallotMatrix::enumerate(&IntSet::range(3)).unwrap();
        let mut dedup = three.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), three.len());
        assert!(three.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn signed_sum_on_three() {
        let total: i64 = BallotMatrix::enumerate(&IntSet::range(3))
            .unwrap()
            .iter()
            .map(|a| i64::from(a.sign()))
            .sum();
        assert_eq!(total, 19);
    }

    #[test]
    fn psi_examples() {
        let a = matrix(&[&[&[&[2, 5], &[1, 4, 6], &[3]]]]);
        assert_eq!(a.psi(), matrix(&[&[&[&[2, 5], &[4, 6], &[1], &[3]]]]));
        let fixed = matrix(&[&[&[&[1], &[3]], E], &[&[&[2]]]]);
        assert_eq!(fixed.psi(), fixed);
        // only the first non-fixed entry moves
        let two = matrix(&[&[&[&[1, 2]], E], &[&[&[3, 4]]]]);
        assert_eq!(two.psi(), matrix(&[&[&[&[2], &[1]], E], &[&[&[3, 4]]]]));
    }

    #[test]
    fn pivots() {
        assert_eq!(
            pivot_example().pivot_elements().unwrap(),
            IntSet::from([2, 3, 5])
        );
        assert_eq!(
            matrix(&[&[&[&[1], &[2]]]]).pivot_elements().unwrap(),
            IntSet::from([1])
        );
        assert_eq!(
            matrix(&[&[&[&[2], &[1]]]]).pivot_elements(),
            Err(Error::NotPsiFixed)
        );
        assert_eq!(matrix(&[&[&[&[2], &[1]]]]).phi(), Err(Error::NotPsiFixed));
    }

    #[test]
    fn phi_worked_pair() {
        assert_eq!(pivot_example().phi().unwrap(), pivot_example_image());
        assert_eq!(pivot_example_image().phi().unwrap(), pivot_example());
        assert_eq!(
            pivot_example_image().pivot_elements().unwrap().first(),
            Some(2)
        );
        assert_eq!(pivot_example().eta(), pivot_example_image());
    }

    #[test]
    fn eta_is_a_sign_reversing_involution() {
        for n in 0..=3 {
            for a in BallotMatrix::enumerate(&IntSet::range(n)).unwrap() {
                let b = a.eta();
                assert_eq!(b.eta(), a, "\n{a}");
                if a == b {
                    assert_eq!(a.sign(), 1, "\n{a}");
                    assert!(a.pivot_elements().unwrap().is_empty());
                } else {
                    assert_eq!(b.sign(), -a.sign(), "\n{a}");
                }
            }
        }
    }

    #[test]
    fn psi_and_phi_are_involutions() {
        for a in BallotMatrix::enumerate(&IntSet::range(3)).unwrap() {
            assert_eq!(a.psi().psi(), a);
            if a.is_psi_fixed() {
                assert_eq!(a.phi().unwrap().phi().unwrap(), a, "\n{a}");
            }
        }
    }

    #[test]
    fn min_element_order_has_same_fixed_points() {
        for n in 0..=3 {
            for a in BallotMatrix::enumerate(&IntSet::range(n)).unwrap() {
                let b = a.eta_with(EntryOrder::MinElement);
                assert_eq!(b.eta_with(EntryOrder::MinElement), a);
                assert_eq!(a == b, a.is_eta_fixed());
                assert_eq!(a.psi_with(EntryOrder::MinElement) == a, a.is_psi_fixed());
            }
        }
    }

    #[test]
    fn json_shape() {
        let a = matrix(&[&[E, &[&[2], &[1]]], &[&[&[3]]]]);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"m":2,"rows":[[[],[[2],[1]]],[[[3]]]]}"#);
        assert_eq!(serde_json::from_str::<BallotMatrix>(&text).unwrap(), a);
        assert!(serde_json::from_str::<BallotMatrix>(r#"{"m":3,"rows":[[[[1]]]]}"#).is_err());
        assert!(serde_json::from_str::<BallotMatrix>(r#"{"m":1,"rows":[[[]]]}"#).is_err());
    }

    #[test]
    fn display_grid() {
        let a = matrix(&[&[E, &[&[2], &[1]]], &[&[&[3]]]]);
        assert_eq!(a.to_string(), "[     ∅ {2}{1}]\n[     .    {3}]");
    }
}
