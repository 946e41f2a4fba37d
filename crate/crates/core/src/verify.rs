//! Property suites that check the constructions against brute force for a
//! given size. Each suite returns one [`Check`] per property.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use crate::ballot::MAX_BALLOT_ENUMERATION;
use crate::counting::{self, MAX_PAIR_N};
use crate::error::guard;
use crate::fixedpoint::{self, MAX_COMPOSITION_ENUMERATION, MAX_FIXED_POINT_ENUMERATION};
use crate::matrix::MAX_MATRIX_ENUMERATION;
use crate::poset::{self, MAX_POSET_ENUMERATION};
use crate::{
    Ballot, BallotMatrix, CompositionMatrix, ConstructionChoice, IntSet, InversionTable,
    Permutation, Poset, Result,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

impl Check {
    fn new(name: impl Into<String>, failure: Option<String>) -> Self {
        let outcome = failure.map_or(Outcome::Pass, Outcome::Fail);
        Self {
            name: name.into(),
            outcome,
        }
    }

    fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            outcome: Outcome::Skipped(why.into()),
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {}", self.name),
            Outcome::Fail(why) => write!(f, "FAIL {}: {why}", self.name),
            Outcome::Skipped(why) => write!(f, "SKIP {}: {why}", self.name),
        }
    }
}

/// First item failing `ok`, rendered for the report.
fn first_failure<T: fmt::Display>(
    items: impl IntoIterator<Item = T>,
    ok: impl Fn(&T) -> bool,
) -> Option<String> {
    items
        .into_iter()
        .find(|x| !ok(x))
        .map(|x| format!("counterexample:\n{x}"))
}

fn mismatch<T: PartialEq + fmt::Display>(left: T, right: T) -> Option<String> {
    (left != right).then(|| format!("{left} != {right}"))
}

/// The matrix and ballot involutions on `[n]`.
pub fn involution_suite(n: usize) -> Result<Vec<Check>> {
    guard("involution suite", n, MAX_MATRIX_ENUMERATION)?;
    let u = IntSet::range(n as u32);
    let all = BallotMatrix::enumerate(&u)?;
    let mut checks = vec![
        Check::new(
            "eta(eta(A)) = A",
            first_failure(&all, |a| a.eta().eta() == **a),
        ),
        Check::new(
            "eta reverses the sign off its fixed points",
            first_failure(&all, |a| {
                let b = a.eta();
                b == **a || b.sign() == -a.sign()
            }),
        ),
        Check::new(
            "fixed points of eta are positive",
            first_failure(&all, |a| !a.is_eta_fixed() || a.sign() == 1),
        ),
        Check::new(
            "fixed points of eta have no pivots",
            first_failure(&all, |a| {
                !a.is_eta_fixed() || fixedpoint::has_fixed_point_shape(a)
            }),
        ),
    ];
    let signed: BigInt = all.iter().map(|a| BigInt::from(a.sign())).sum();
    checks.push(Check::new(
        "signed matrix count equals the interval order count",
        mismatch(signed, BigInt::from(counting::count_lio(n)?)),
    ));
    let ballots: Vec<Ballot> = Ballot::enumerate(&u)?.collect();
    checks.push(Check::new(
        "ballot involution is a sign-reversing involution",
        first_failure(&ballots, |w| {
            let v = w.involution();
            v.involution() == **w && (v == **w || v.sign() == -w.sign())
        }),
    ));
    let signed: i64 = ballots.iter().map(|w| i64::from(w.sign())).sum();
    checks.push(Check::new(
        "signed ballot count is (-1)^n",
        mismatch(signed, if n.is_multiple_of(2) { 1 } else { -1 }),
    ));
    debug_assert!(n <= MAX_BALLOT_ENUMERATION);
    Ok(checks)
}

/// Poset preservation and the fibers of the matrix-to-poset map on `[n]`.
pub fn preservation_suite(n: usize) -> Result<Vec<Check>> {
    guard("preservation suite", n, MAX_MATRIX_ENUMERATION)?;
    let all = BallotMatrix::enumerate(&IntSet::range(n as u32))?;
    let mut fibers: BTreeMap<Poset, Vec<&BallotMatrix>> = BTreeMap::new();
    for a in &all {
        fibers.entry(poset::poset_of(a)).or_default().push(a);
    }
    let oracle: BTreeSet<Poset> = poset::enumerate_labeled_interval_orders(n)?
        .into_iter()
        .collect();
    let images: BTreeSet<Poset> = fibers.keys().cloned().collect();
    let one_fixed = fibers
        .iter()
        .find(|(_, members)| members.iter().filter(|a| a.is_eta_fixed()).count() != 1)
        .map(|(p, _)| format!("fiber over {p} does not have exactly one fixed point"));
    debug_assert!(n <= MAX_POSET_ENUMERATION);
    Ok(vec![
        Check::new(
            "eta preserves the poset",
            first_failure(&all, |a| poset::poset_of(&a.eta()) == poset::poset_of(a)),
        ),
        Check::new(
            "every image poset is an interval order",
            first_failure(images.iter(), |p| {
                p.is_interval_order() && p.is_two_plus_two_free()
            }),
        ),
        Check::new(
            "the images are exactly the interval orders",
            mismatch(images.len(), oracle.len())
                .or_else(|| (images != oracle).then(|| "image set differs from oracle".into())),
        ),
        Check::new("each fiber holds exactly one fixed point", one_fixed),
    ])
}

/// The construction-choice bijections for every `S ⊆ [n-1]`, and the row
/// splitting chain between composition matrices and fixed points.
pub fn bijection_suite(n: usize) -> Result<Vec<Check>> {
    guard("bijection suite", n, MAX_FIXED_POINT_ENUMERATION)?;
    let sets: Vec<IntSet> = IntSet::range(n.saturating_sub(1) as u32)
        .subsets()
        .collect();
    let mut perm_fail = None;
    let mut subset_fail = None;
    let mut ballot_fail = None;
    let mut missing_fail = None;
    let mut count_fail = None;
    for set in &sets {
        let choices = ConstructionChoice::all(n, set)?;
        let kappa = counting::kappa(n, set)?;
        if count_fail.is_none() && kappa != choices.len().into() {
            count_fail = Some(format!(
                "S = {set}: {} choices, kappa = {kappa}",
                choices.len()
            ));
        }
        let mut perms = BTreeSet::new();
        let mut subset_tables = BTreeSet::new();
        let mut ballots = BTreeSet::new();
        let mut missing_tables = BTreeSet::new();
        for c in &choices {
            let p = c.to_permutation();
            if ConstructionChoice::from_permutation(&p, set).as_ref() != Ok(c)
                || !p.ascent_bottom_set().is_subset(set)
            {
                perm_fail.get_or_insert(format!("S = {set}, digits {:?}", c.digits()));
            }
            let t = c.to_inversion_table_subset();
            if ConstructionChoice::from_inversion_table_subset(&t, set).as_ref() != Ok(c) {
                subset_fail.get_or_insert(format!("S = {set}, digits {:?}", c.digits()));
            }
            let b = c.to_ballot();
            if ConstructionChoice::from_ballot(&b, set).as_ref() != Ok(c) {
                ballot_fail.get_or_insert(format!("S = {set}, digits {:?}", c.digits()));
            }
            let mt = c.to_inversion_table_missing();
            if ConstructionChoice::from_inversion_table_missing(&mt, set).as_ref() != Ok(c) {
                missing_fail.get_or_insert(format!("S = {set}, digits {:?}", c.digits()));
            }
            perms.insert(p);
            subset_tables.insert(t);
            ballots.insert(b);
            missing_tables.insert(mt);
        }
        let expect_perms: BTreeSet<Permutation> = Permutation::all(n)
            .filter(|p| p.ascent_bottom_set().is_subset(set))
            .collect();
        if perms != expect_perms {
            perm_fail.get_or_insert(format!("S = {set}: image is not the ascent-bottom class"));
        }
        let allowed = set.union(&IntSet::from([0]));
        let expect_subset: BTreeSet<InversionTable> = InversionTable::all(n)
            .filter(|t| t.dent().is_subset(&allowed))
            .collect();
        if subset_tables != expect_subset {
            subset_fail.get_or_insert(format!("S = {set}: image is not the dent class"));
        }
        let minima: IntSet = std::iter::once(1)
            .chain(set.iter().map(|s| s + 1))
            .collect();
        if n > 0
            && ballots
                .iter()
                .any(|b| b.blocks().iter().map(|blk| blk[0]).collect::<IntSet>() != minima)
        {
            ballot_fail.get_or_insert(format!("S = {set}: wrong block minima"));
        }
        let shifted: IntSet = set.iter().map(|s| n as u32 - s).collect();
        let expect_missing: BTreeSet<InversionTable> = InversionTable::all(n)
            .filter(|t| t.missing_entries().is_subset(&shifted))
            .collect();
        if missing_tables != expect_missing {
            missing_fail.get_or_insert(format!("S = {set}: image is not the missing-entry class"));
        }
    }
    let mut checks = vec![
        Check::new("|CC_n(S)| = kappa_n(S)", count_fail),
        Check::new(
            "choices <-> permutations with ascent bottoms in S",
            perm_fail,
        ),
        Check::new("choices <-> tables with entries in {0} ∪ S", subset_fail),
        Check::new("choices <-> ballots with prescribed minima", ballot_fail),
        Check::new(
            "choices <-> tables with missing entries in n - S",
            missing_fail,
        ),
    ];
    if n <= MAX_COMPOSITION_ENUMERATION {
        checks.push(rho_chain_check(n)?);
    } else {
        checks.push(Check::skipped(
            "composition matrices <-> fixed points",
            format!("composition enumeration is limited to n <= {MAX_COMPOSITION_ENUMERATION}"),
        ));
    }
    Ok(checks)
}

fn rho_chain_check(n: usize) -> Result<Check> {
    let u = IntSet::range(n as u32);
    let comps = CompositionMatrix::enumerate(&u)?;
    let fixed: BTreeSet<_> = fixedpoint::fixed_points_for(&u)?.into_iter().collect();
    let mut images = BTreeSet::new();
    let mut fail = None;
    for c in &comps {
        let f = c.to_fixed_point();
        if poset::poset_of(f.matrix()) != poset::poset_of(c.matrix()) {
            fail.get_or_insert(format!("poset changed:\n{}", c.matrix()));
        }
        if CompositionMatrix::from_fixed_point(&f).as_ref() != Ok(c) {
            fail.get_or_insert(format!("inverse chain does not return:\n{}", c.matrix()));
        }
        images.insert(f);
    }
    if images != fixed {
        fail.get_or_insert(format!(
            "{} images for {} fixed points",
            images.len(),
            fixed.len()
        ));
    }
    Ok(Check::new("composition matrices <-> fixed points", fail))
}

/// Every count of labeled interval orders on `[n]` that is available at
/// this size, plus the descent and ascent-bottom formulas against direct
/// filtering of `S_n`.
pub fn counts_suite(n: usize, jobs: usize) -> Result<Vec<Check>> {
    guard("counts suite", n, MAX_PAIR_N)?;
    let formula = counting::count_lio_with_jobs(n, jobs)?;
    let mut checks = vec![Check::new(
        "sum beta*kappa = sum alpha*lambda",
        mismatch(&formula, &counting::count_lio_alpha_lambda(n)?),
    )];
    checks.push(Check::new(
        "pairs with A(tau) ⊆ D(pi)",
        mismatch(&formula, &counting::count_pairs_ab_in_d(n)?),
    ));
    checks.push(Check::new(
        "pairs with D(pi) ⊆ A(tau)",
        mismatch(&formula, &counting::count_pairs_d_in_ab(n)?),
    ));
    if n <= MAX_FIXED_POINT_ENUMERATION {
        let fixed = fixedpoint::fixed_points_for(&IntSet::range(n as u32))?.len();
        checks.push(Check::new(
            "fixed point count",
            mismatch(&formula, &fixed.into()),
        ));
    } else {
        checks.push(Check::skipped(
            "fixed point count",
            "enumeration limited to n <= 6",
        ));
    }
    if n <= MAX_POSET_ENUMERATION {
        let oracle = poset::enumerate_labeled_interval_orders(n)?.len();
        checks.push(Check::new(
            "brute-force interval orders",
            mismatch(&formula, &oracle.into()),
        ));
    } else {
        checks.push(Check::skipped(
            "brute-force interval orders",
            "oracle limited to n <= 5",
        ));
    }
    let perms: Vec<(IntSet, IntSet)> = Permutation::all(n)
        .map(|p| (p.descent_set(), p.ascent_bottom_set()))
        .collect();
    let mut fail = None;
    for set in IntSet::range(n.saturating_sub(1) as u32).subsets() {
        let count = |f: &dyn Fn(&(IntSet, IntSet)) -> bool| perms.iter().filter(|x| f(x)).count();
        let direct = [
            count(&|(d, _)| d.is_subset(&set)),
            count(&|(d, _)| *d == set),
            count(&|(_, a)| a.is_subset(&set)),
            count(&|(_, a)| *a == set),
        ];
        let formulas = [
            counting::alpha(n, &set)?,
            counting::beta(n, &set)?,
            counting::kappa(n, &set)?,
            counting::lambda(n, &set)?,
        ];
        for (name, (d, f)) in ["alpha", "beta", "kappa", "lambda"]
            .iter()
            .zip(direct.iter().zip(&formulas))
        {
            if f != &(*d).into() {
                fail.get_or_insert(format!("{name}_{n}({set}) = {f}, direct count {d}"));
            }
        }
    }
    checks.push(Check::new(
        "alpha, beta, kappa, lambda match direct counts",
        fail,
    ));
    Ok(checks)
}
