//! Fixed points of the matrix involution: their characterization, the
//! decomposition into a permutation and an inversion table, and the row
//! splitting moves that connect them to composition matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::guard;
use crate::{Ballot, BallotMatrix, Error, IntSet, InversionTable, Permutation, Result};

/// Largest underlying set [`fixed_points_for`] accepts.
pub const MAX_FIXED_POINT_ENUMERATION: usize = 6;

/// Largest underlying set [`CompositionMatrix::enumerate`] accepts.
pub const MAX_COMPOSITION_ENUMERATION: usize = 5;

/// No element of `a` can move: every entry is an increasing run of
/// singletons and there is no pivot.
pub fn is_fixed_point(a: &BallotMatrix) -> bool {
    a.is_psi_fixed() && a.pivot_elements().is_ok_and(|p| p.is_empty())
}

/// The direct description of a fixed point: one element per row, held as a
/// singleton block, and whenever the element of row `i` is smaller than the
/// element of row `i + 1`, column `i` is non-empty.
pub fn has_fixed_point_shape(a: &BallotMatrix) -> bool {
    let m = a.dim();
    let single =
        (0..m).all(|r| a.row_len(r) == 1 && (r..m).all(|c| a.get(r, c).block_count() <= 1));
    single
        && (0..m.saturating_sub(1))
            .all(|i| a.row_min(i) > a.row_min(i + 1) || !a.column_is_empty(i))
}

/// A ballot matrix fixed by the involution.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BallotMatrix", into = "BallotMatrix")]
pub struct FixedPointMatrix(BallotMatrix);

impl FixedPointMatrix {
    pub fn new(a: BallotMatrix) -> Result<Self> {
        if is_fixed_point(&a) {
            Ok(Self(a))
        } else {
            Err(Error::NotFixedPoint)
        }
    }

    pub fn matrix(&self) -> &BallotMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> BallotMatrix {
        self.0
    }

    /// Row elements top to bottom.
    pub fn row_word(&self) -> Vec<u32> {
        (0..self.0.dim()).map(|r| self.0.row_min(r)).collect()
    }

    /// `(a_1...a_n, b_1...b_n)` with `a_i` the (standardized) element on row
    /// `i` and `b_i = n - column(i)`, columns counted from 1.
    pub fn decompose(&self) -> FixedPointPair {
        let n = self.0.dim();
        let perm = Permutation::standardize(&self.row_word());
        let entries = (0..n)
            .map(|r| {
                let c = (r..n)
                    .find(|&c| !self.0.get(r, c).is_empty())
                    .expect("row non-empty");
                (n - 1 - c) as u32
            })
            .collect();
        let invtab = InversionTable::new(entries).expect("upper triangular");
        FixedPointPair { perm, invtab }
    }

    /// Rebuild the matrix on `[n]`.
    pub fn compose(pair: &FixedPointPair) -> Result<Self> {
        Self::compose_on(pair, &IntSet::range(pair.perm.len() as u32))
    }

    /// Rebuild the matrix with `[n]` relabeled in order onto `labels`.
    pub fn compose_on(pair: &FixedPointPair, labels: &IntSet) -> Result<Self> {
        let n = pair.perm.len();
        if pair.invtab.len() != n || labels.len() != n {
            return Err(Error::InvalidMatrix(
                "permutation, table and labels differ in size".into(),
            ));
        }
        if !compatible(&pair.perm, &pair.invtab) {
            return Err(Error::NotFixedPoint);
        }
        let word = pair.perm.relabel(&labels.to_vec());
        let rows = (0..n)
            .map(|r| {
                let col = n - 1 - pair.invtab.as_slice()[r] as usize;
                (r..n)
                    .map(|c| {
                        if c == col {
                            Ballot::increasing_singletons(&IntSet::from([word[r]]))
                        } else {
                            Ballot::empty()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(BallotMatrix::new(rows)?)
    }
}

impl TryFrom<BallotMatrix> for FixedPointMatrix {
    type Error = Error;

    fn try_from(a: BallotMatrix) -> Result<Self> {
        Self::new(a)
    }
}

impl From<FixedPointMatrix> for BallotMatrix {
    fn from(f: FixedPointMatrix) -> Self {
        f.0
    }
}

impl fmt::Debug for FixedPointMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FixedPointMatrix({:?})", self.0)
    }
}

impl fmt::Display for FixedPointMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// JSON: `{"perm": [...], "invtab": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FixedPointPair {
    pub perm: Permutation,
    pub invtab: InversionTable,
}

/// Whether `(perm, table)` is the decomposition of some fixed point: every
/// value of `[n-1]` missing from the table is `n - s` for a descent `s`.
pub fn compatible(perm: &Permutation, table: &InversionTable) -> bool {
    let n = perm.len() as u32;
    let allowed: IntSet = perm.descent_set().iter().map(|s| n - s).collect();
    table.len() == perm.len() && table.missing_entries().is_subset(&allowed)
}

/// Inversion tables that pair with `perm`.
pub fn bk_class(perm: &Permutation) -> Vec<InversionTable> {
    InversionTable::all(perm.len())
        .filter(|t| compatible(perm, t))
        .collect()
}

/// Permutations that pair with `table`: those whose ascent positions all
/// lie in `{ n - s : s in dent(table), s > 0 }`. Reversal carries this
/// class onto the permutations with descent set inside `dent(table) \ {0}`.
pub fn al_class(table: &InversionTable) -> Vec<Permutation> {
    Permutation::all(table.len())
        .filter(|p| compatible(p, table))
        .collect()
}

/// Every fixed point on `set`, generated from compatible pairs in
/// lexicographic order of (permutation, table).
pub fn fixed_points_for(set: &IntSet) -> Result<Vec<FixedPointMatrix>> {
    guard(
        "fixed point enumeration",
        set.len(),
        MAX_FIXED_POINT_ENUMERATION,
    )?;
    let mut out = Vec::new();
    for perm in Permutation::all(set.len()) {
        for invtab in bk_class(&perm) {
            let pair = FixedPointPair {
                perm: perm.clone(),
                invtab,
            };
            out.push(FixedPointMatrix::compose_on(&pair, set)?);
        }
    }
    Ok(out)
}

/// Elements that are not the minimum of their row.
pub fn non_minimal_elements(a: &BallotMatrix) -> IntSet {
    let minima: IntSet = (0..a.dim()).map(|r| a.row_min(r)).collect();
    a.underlying().difference(&minima)
}

/// Row minima `u_i` (0-based rows `i < m - 1`) such that column `i` is
/// empty, `u_i` is alone on its row, and `u_i > u_{i+1}`.
pub fn mergeable_row_minima(a: &BallotMatrix) -> IntSet {
    (0..a.dim().saturating_sub(1))
        .filter(|&i| a.column_is_empty(i) && a.row_len(i) == 1 && a.row_min(i) > a.row_min(i + 1))
        .map(|i| a.row_min(i))
        .collect()
}

/// Split the smallest non-minimal element onto a new row; see [`rho_at`].
pub fn rho(a: &BallotMatrix) -> Result<BallotMatrix> {
    let x = non_minimal_elements(a)
        .first()
        .ok_or(Error::NoNonMinimalElement)?;
    rho_at(a, x)
}

/// Split the non-minimal element `x`, at `(i, j)`, onto a new row: an empty
/// row and an empty column are inserted at index `i` and `x` moves to a
/// singleton entry at `(i, j + 1)`.
pub fn rho_at(a: &BallotMatrix, x: u32) -> Result<BallotMatrix> {
    if !non_minimal_elements(a).contains(x) {
        return Err(Error::NoNonMinimalElement);
    }
    let (i, j) = a.position_of(x).expect("element of the matrix");
    let mut work = a.clone();
    work.remove_element(x);
    let mut out = work.insert_empty_row_col(i);
    out.push_back_singleton(i, j + 1, x);
    Ok(out)
}

/// Merge the largest mergeable row minimum back; see [`rho_inverse_at`].
pub fn rho_inverse(a: &BallotMatrix) -> Result<BallotMatrix> {
    let x = mergeable_row_minima(a)
        .last()
        .ok_or(Error::NoMergeableRow)?;
    rho_inverse_at(a, x)
}

/// Undo [`rho_at`] for the mergeable row minimum `x`, at `(i, j)`: append
/// `{x}` at the end of the entry `(i + 1, j)`, then delete row and column `i`.
pub fn rho_inverse_at(a: &BallotMatrix, x: u32) -> Result<BallotMatrix> {
    if !mergeable_row_minima(a).contains(x) {
        return Err(Error::NoMergeableRow);
    }
    let (i, j) = a.position_of(x).expect("element of the matrix");
    let mut out = a.clone();
    out.remove_element(x);
    out.push_back_singleton(i + 1, j, x);
    Ok(out.remove_row_col(i))
}

/// An upper-triangular matrix of sets partitioning its underlying set, with
/// no empty row and no empty column. Entries are stored as ballots of
/// increasing singletons.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BallotMatrix", into = "BallotMatrix")]
pub struct CompositionMatrix(BallotMatrix);

impl CompositionMatrix {
    pub fn new(a: BallotMatrix) -> Result<Self> {
        if let Some((r, c)) = a
            .positions()
            .find(|&(r, c)| !a.get(r, c).is_increasing_singletons())
        {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not a set read in increasing order",
                r + 1,
                c + 1
            )));
        }
        if let Some(c) = (0..a.dim()).find(|&c| a.column_is_empty(c)) {
            return Err(Error::InvalidMatrix(format!("column {} is empty", c + 1)));
        }
        Ok(Self(a))
    }

    /// Read each entry as a set, then check the composition conditions.
    pub fn from_set_entries(a: &BallotMatrix) -> Result<Self> {
        let rows = a
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| Ballot::increasing_singletons(&b.underlying()))
                    .collect()
            })
            .collect();
        Self::new(BallotMatrix::new(rows)?)
    }

    pub fn matrix(&self) -> &BallotMatrix {
        &self.0
    }

    /// Split non-minimal elements onto their own rows, largest first, until
    /// every element is a row minimum. Splitting the smallest first can put
    /// an ascent over an empty column, so the chain runs in decreasing order.
    pub fn to_fixed_point(&self) -> FixedPointMatrix {
        let mut a = self.0.clone();
        while let Some(x) = non_minimal_elements(&a).last() {
            a = rho_at(&a, x).expect("x is non-minimal");
        }
        FixedPointMatrix::new(a).expect("rho chain ends at a fixed point")
    }

    /// Merge rows back, smallest mergeable minimum first, until no row can
    /// merge. Each merged element is larger than the ones already in its
    /// entry, so the entries come out as increasing singletons.
    pub fn from_fixed_point(f: &FixedPointMatrix) -> Result<Self> {
        let mut a = f.matrix().clone();
        while let Some(x) = mergeable_row_minima(&a).first() {
            a = rho_inverse_at(&a, x)?;
        }
        Self::new(a)
    }

    /// Every composition matrix on `set`, ordered by dimension then entries.
    pub fn enumerate(set: &IntSet) -> Result<Vec<CompositionMatrix>> {
        guard(
            "composition matrix enumeration",
            set.len(),
            MAX_COMPOSITION_ENUMERATION,
        )?;
        let elems = set.to_vec();
        let n = elems.len();
        if n == 0 {
            return Ok(vec![Self(BallotMatrix::empty())]);
        }
        let mut out = Vec::new();
        for m in 1..=n {
            let slots: Vec<(usize, usize)> =
                (0..m).flat_map(|r| (r..m).map(move |c| (r, c))).collect();
            let mut found = Vec::new();
            let mut assign = vec![0usize; n];
            loop {
                let mut rows = vec![false; m];
                let mut cols = vec![false; m];
                for &s in &assign {
                    rows[slots[s].0] = true;
                    cols[slots[s].1] = true;
                }
                if !rows.contains(&false) && !cols.contains(&false) {
                    let mut parts = vec![IntSet::new(); slots.len()];
                    for (&x, &s) in elems.iter().zip(&assign) {
                        parts[s].insert(x);
                    }
                    let mut grid: Vec<Vec<Ballot>> =
                        (0..m).map(|r| vec![Ballot::empty(); m - r]).collect();
                    for (&(r, c), part) in slots.iter().zip(&parts) {
                        grid[r][c - r] = Ballot::increasing_singletons(part);
                    }
                    found.push(Self::new(BallotMatrix::new(grid)?)?);
                }
                let Some(i) = assign.iter().rposition(|&d| d + 1 < slots.len()) else {
                    break;
                };
                assign[i] += 1;
                for d in &mut assign[i + 1..] {
                    *d = 0;
                }
            }
            found.sort();
            out.extend(found);
        }
        Ok(out)
    }
}

impl TryFrom<BallotMatrix> for CompositionMatrix {
    type Error = Error;

    fn try_from(a: BallotMatrix) -> Result<Self> {
        Self::new(a)
    }
}

impl From<CompositionMatrix> for BallotMatrix {
    fn from(c: CompositionMatrix) -> Self {
        c.0
    }
}

impl fmt::Debug for CompositionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompositionMatrix({:?})", self.0)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::matrix::fixtures::pivot_example;
    use crate::matrix::matrix;
    use crate::perm::{perm, table};
    use crate::poset::poset_of;

    #[test]
    fn listed_fixed_points_on_three() {
        let listed: Vec<BallotMatrix> = FIXED_POINTS_ON_THREE
            .iter()
            .map(|&c| three_by_three(c))
            .collect();
        let mut generated: Vec<BallotMatrix> = fixed_points_for(&IntSet::range(3))
            .unwrap()
            .into_iter()
            .map(FixedPointMatrix::into_matrix)
            .collect();
        for a in &listed {
            assert!(is_fixed_point(a), "\n{a}");
        }
        let mut sorted = listed.clone();
        sorted.sort();
        generated.sort();
        assert_eq!(sorted, generated);
    }

    #[test]
    fn non_fixed_points() {
        assert!(!is_fixed_point(&matrix(&[&[&[&[1], &[2]]]])));
        assert!(!is_fixed_point(&pivot_example()));
        assert_eq!(
            FixedPointMatrix::new(pivot_example()),
            Err(Error::NotFixedPoint)
        );
    }

    #[test]
    fn characterizations_agree_on_three() {
        for n in 0..=3 {
            for a in BallotMatrix::enumerate(&IntSet::range(n)).unwrap() {
                assert_eq!(is_fixed_point(&a), has_fixed_point_shape(&a), "\n{a}");
                assert_eq!(is_fixed_point(&a), a.is_eta_fixed());
            }
        }
    }

    #[test]
    fn slow_and_fast_fixed_point_lists_agree() {
        for n in 0..=3 {
            let u = IntSet::range(n);
            let mut slow: Vec<BallotMatrix> = BallotMatrix::enumerate(&u)
                .unwrap()
                .into_iter()
                .filter(BallotMatrix::is_eta_fixed)
                .collect();
            let mut fast: Vec<BallotMatrix> = fixed_points_for(&u)
                .unwrap()
                .into_iter()
                .map(Into::into)
                .collect();
            slow.sort();
            fast.sort();
            assert_eq!(slow, fast);
        }
    }

    #[test]
    fn fixed_point_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| fixed_points_for(&IntSet::range(n)).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 207, 3451]);
        assert!(fixed_points_for(&IntSet::range(7)).is_err());
    }

    #[test]
    fn decomposition_example_pair() {
        let f = FixedPointMatrix::new(decomposition_example()).unwrap();
        let pair = f.decompose();
        assert_eq!(pair.perm, perm("4132"));
        assert_eq!(pair.invtab, table("2010"));
        assert_eq!(FixedPointMatrix::compose(&pair).unwrap(), f);
        assert_eq!(
            serde_json::to_string(&pair).unwrap(),
            r#"{"perm":[4,1,3,2],"invtab":[2,0,1,0]}"#
        );
    }

    #[test]
    fn decreasing_permutation_with_zero_table() {
        for n in 1..=5 {
            let zero = InversionTable::zeros(n);
            assert_eq!(al_class(&zero), vec![Permutation::decreasing(n)]);
            let pair = FixedPointPair {
                perm: Permutation::decreasing(n),
                invtab: zero,
            };
            let f = FixedPointMatrix::compose(&pair).unwrap();
            assert!((0..n).all(|r| !f.matrix().get(r, n - 1).is_empty()));
        }
    }

    #[test]
    fn compose_rejects_incompatible_pairs() {
        let pair = FixedPointPair {
            perm: perm("12"),
            invtab: table("00"),
        };
        assert_eq!(FixedPointMatrix::compose(&pair), Err(Error::NotFixedPoint));
    }

    #[test]
    fn compose_decompose_round_trip() {
        for n in 0..=4 {
            for f in fixed_points_for(&IntSet::range(n)).unwrap() {
                assert_eq!(FixedPointMatrix::compose(&f.decompose()).unwrap(), f);
            }
        }
        let labels = IntSet::from([2, 7, 9]);
        for f in fixed_points_for(&labels).unwrap() {
            assert_eq!(f.matrix().underlying(), labels);
            assert_eq!(
                FixedPointMatrix::compose_on(&f.decompose(), &labels).unwrap(),
                f
            );
        }
    }

    #[test]
    fn poset_of_decomposition_example() {
        let p = poset_of(&decomposition_example());
        assert_eq!(p.downset(4).unwrap(), IntSet::new());
        assert_eq!(p.downset(1).unwrap(), IntSet::new());
        assert_eq!(p.downset(3).unwrap(), IntSet::from([4]));
        assert_eq!(p.downset(2).unwrap(), IntSet::from([3, 4]));
    }

    #[test]
    fn classes() {
        assert_eq!(bk_class(&perm("12")), vec![table("10")]);
        assert_eq!(bk_class(&perm("1")), vec![table("0")]);
        assert_eq!(bk_class(&perm("21")), vec![table("00"), table("10")]);
        assert!(al_class(&table("2010")).contains(&perm("4132")));
        for n in 0..=4 {
            let total_bk: usize = Permutation::all(n).map(|p| bk_class(&p).len()).sum();
            let total_al: usize = InversionTable::all(n).map(|t| al_class(&t).len()).sum();
            assert_eq!(total_bk, total_al);
        }
    }

    #[test]
    fn al_class_reverses_onto_descent_form() {
        for n in 0..=5 {
            for t in InversionTable::all(n) {
                let allowed = t.dent().difference(&IntSet::from([0]));
                let mut reversed: Vec<_> = al_class(&t).iter().map(Permutation::reverse).collect();
                reversed.sort();
                let direct: Vec<_> = Permutation::all(n)
                    .filter(|q| q.descent_set().is_subset(&allowed))
                    .collect();
                assert_eq!(reversed, direct, "{t}");
            }
        }
    }

    #[test]
    fn bk_class_depends_on_descent_set_only() {
        for n in 0..=5 {
            let perms: Vec<_> = Permutation::all(n).collect();
            for p in &perms {
                for q in &perms {
                    if p.descent_set() == q.descent_set() {
                        assert_eq!(bk_class(p), bk_class(q));
                    }
                }
            }
        }
    }

    #[test]
    fn rho_worked_example() {
        let a = split_example();
        assert_eq!(non_minimal_elements(&a), IntSet::from([4, 6]));
        let b = rho(&a).unwrap();
        assert_eq!(b, split_example_image());
        assert_eq!(non_minimal_elements(&b), IntSet::from([6]));
        assert_eq!(mergeable_row_minima(&b), IntSet::from([4]));
        assert_eq!(rho_inverse(&b).unwrap(), a);
        assert_eq!(poset_of(&a), poset_of(&b));
    }

    #[test]
    fn rho_preconditions() {
        let f = three_by_three(FIXED_POINTS_ON_THREE[0]);
        assert_eq!(rho(&f), Err(Error::NoNonMinimalElement));
        let full = matrix(&[&[&[&[1]], &[&[3]]], &[&[&[2]]]]);
        assert_eq!(rho_inverse(&full), Err(Error::NoMergeableRow));
    }

    #[test]
    fn composition_matrices_biject_with_fixed_points() {
        for n in 0..=4 {
            let u = IntSet::range(n);
            let comps = CompositionMatrix::enumerate(&u).unwrap();
            let fixed = fixed_points_for(&u).unwrap();
            assert_eq!(comps.len(), fixed.len());
            let mut images: Vec<_> = comps
                .iter()
                .map(CompositionMatrix::to_fixed_point)
                .collect();
            for (c, f) in comps.iter().zip(&images) {
                assert_eq!(poset_of(c.matrix()), poset_of(f.matrix()));
                assert_eq!(&CompositionMatrix::from_fixed_point(f).unwrap(), c);
            }
            images.sort();
            images.dedup();
            assert_eq!(images.len(), fixed.len());
        }
    }

    #[test]
    fn splitting_smallest_first_can_leave_a_pivot() {
        let a = matrix(&[&[&[&[1], &[2], &[3]]]]);
        let once = rho(&a).unwrap();
        let twice = rho(&once).unwrap();
        assert!(non_minimal_elements(&twice).is_empty());
        assert!(!is_fixed_point(&twice));
        assert_eq!(twice.pivot_elements().unwrap(), IntSet::from([2]));
        let c = CompositionMatrix::new(a).unwrap();
        let f = c.to_fixed_point();
        assert_eq!(f.row_word(), vec![3, 2, 1]);
    }

    #[test]
    fn single_steps_reject_wrong_elements() {
        let a = matrix(&[&[&[&[1], &[2], &[3]]]]);
        assert_eq!(rho_at(&a, 1), Err(Error::NoNonMinimalElement));
        assert_eq!(rho_inverse(&a), Err(Error::NoMergeableRow));
        let b = rho_at(&a, 3).unwrap();
        assert_eq!(rho_inverse_at(&b, 3).unwrap(), a);
    }
}
