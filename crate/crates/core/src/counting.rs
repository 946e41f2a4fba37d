//! Exact counts attached to descent sets and ascent-bottom sets, and the
//! resulting formulas for the number of labeled interval orders.
//!
//! For `S = {s_1 < ... < s_k} ⊆ [n-1]` with `s_0 = 0`, `s_{k+1} = n`:
//!
//! * `alpha_n(S)`: permutations with descent set inside `S` (a multinomial);
//! * `beta_n(S)`: descent set exactly `S` (a determinant of binomials);
//! * `kappa_n(S)`: ascent bottoms inside `S` (`prod_r r^(s_r - s_{r-1})`);
//! * `lambda_n(S)`: ascent bottoms exactly `S` (inclusion-exclusion).

use std::thread;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::guard;
use crate::{IntSet, Permutation, Result};

/// Arbitrary-precision count.
pub type BigCount = BigUint;

/// Largest `n` for the `2^(n-1)`-term interval order sums.
pub const MAX_LIO_N: usize = 24;

/// Largest `n` for brute force over pairs of permutations.
pub const MAX_PAIR_N: usize = 7;

/// Largest `|S|` for the inclusion-exclusion sums over subsets of `S`.
pub const MAX_SIEVE_SET: usize = 24;

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `0 = s_0 < s_1 < ... < s_k < s_{k+1} = n`.
fn boundaries(n: usize, set: &IntSet) -> Result<Vec<u64>> {
    set.check_within(n.saturating_sub(1) as u32)?;
    let mut s = vec![0];
    s.extend(set.iter().map(u64::from));
    s.push(n as u64);
    Ok(s)
}

/// `n! / prod (s_{r+1} - s_r)!`.
pub fn alpha(n: usize, set: &IntSet) -> Result<BigCount> {
    let s = boundaries(n, set)?;
    let mut acc = BigUint::one();
    let mut placed = 0i64;
    for w in s.windows(2) {
        let part = (w[1] - w[0]) as i64;
        placed += part;
        acc *= binomial(placed, part);
    }
    Ok(acc)
}

/// `det [ C(n - s_i, s_{j+1} - s_i) ]` over `i, j in [0, k]`.
///
/// The matrix is upper Hessenberg with ones on the subdiagonal, so the
/// determinant is expanded along the last column recursively; the running
/// values stay in `i128` when they fit.
pub fn beta(n: usize, set: &IntSet) -> Result<BigCount> {
    let s = boundaries(n, set)?;
    Ok(beta_from_boundaries(&s))
}

fn beta_from_boundaries(s: &[u64]) -> BigCount {
    let n = *s.last().expect("non-empty") as i64;
    let entry = |i: usize, j: usize| binomial(n - s[i] as i64, s[j + 1] as i64 - s[i] as i64);
    let size = s.len() - 1;
    if let Some(v) = hessenberg_unit_det_i128(size, |i, j| entry(i, j).to_i128()) {
        return BigUint::try_from(v).expect("descent counts are non-negative");
    }
    hessenberg_unit_det_big(size, entry)
}

fn hessenberg_unit_det_big(size: usize, entry: impl Fn(usize, usize) -> BigUint) -> BigCount {
    let mut d: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=size {
        let mut acc = BigInt::zero();
        for r in 1..=m {
            let term = BigInt::from(entry(r - 1, m - 1)) * &d[r - 1];
            if (m - r) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        d.push(acc);
    }
    d.pop()
        .unwrap()
        .to_biguint()
        .expect("descent counts are non-negative")
}

/// Determinant of a `size x size` upper Hessenberg matrix whose subdiagonal
/// is all ones; `None` on overflow.
fn hessenberg_unit_det_i128(
    size: usize,
    entry: impl Fn(usize, usize) -> Option<i128>,
) -> Option<i128> {
    let mut d: Vec<i128> = Vec::with_capacity(size + 1);
    d.push(1);
    for m in 1..=size {
        let mut acc: i128 = 0;
        for r in 1..=m {
            let term = entry(r - 1, m - 1)?.checked_mul(d[r - 1])?;
            acc = if (m - r) % 2 == 0 {
                acc.checked_add(term)?
            } else {
                acc.checked_sub(term)?
            };
        }
        d.push(acc);
    }
    d.pop()
}

/// The same determinant by fraction-free Gaussian elimination over the
/// full binomial matrix.
pub fn beta_by_elimination(n: usize, set: &IntSet) -> Result<BigCount> {
    let s = boundaries(n, set)?;
    let size = s.len() - 1;
    let rows = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    BigInt::from(binomial(
                        n as i64 - s[i] as i64,
                        s[j + 1] as i64 - s[i] as i64,
                    ))
                })
                .collect()
        })
        .collect();
    Ok(determinant(rows)
        .to_biguint()
        .expect("descent counts are non-negative"))
}

/// `sum_{T ⊆ S} (-1)^{|S \ T|} alpha_n(T)`.
pub fn beta_by_sieve(n: usize, set: &IntSet) -> Result<BigCount> {
    sieve(n, set, alpha)
}

/// Exact determinant by Bareiss elimination with row pivoting.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let size = a.len();
    assert!(
        a.iter().all(|row| row.len() == size),
        "square matrix required"
    );
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        let Some(p) = (k..size).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if size == 0 {
        return BigInt::one();
    }
    sign * &a[size - 1][size - 1]
}

/// `prod_{r=1}^{k+1} r^(s_r - s_{r-1})`.
pub fn kappa(n: usize, set: &IntSet) -> Result<BigCount> {
    let s = boundaries(n, set)?;
    Ok(kappa_from_boundaries(&s))
}

fn kappa_from_boundaries(s: &[u64]) -> BigCount {
    s.windows(2)
        .enumerate()
        .map(|(r, w)| BigUint::from(r as u64 + 1).pow((w[1] - w[0]) as u32))
        .product()
}

/// `sum_{T ⊆ S} (-1)^{|S \ T|} kappa_n(T)`.
pub fn lambda(n: usize, set: &IntSet) -> Result<BigCount> {
    sieve(n, set, kappa)
}

fn sieve(n: usize, set: &IntSet, f: fn(usize, &IntSet) -> Result<BigCount>) -> Result<BigCount> {
    set.check_within(n.saturating_sub(1) as u32)?;
    guard("inclusion-exclusion set size", set.len(), MAX_SIEVE_SET)?;
    let mut acc = BigInt::zero();
    for sub in set.subsets() {
        let term = BigInt::from(f(n, &sub)?);
        if (set.len() - sub.len()).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc.to_biguint().expect("sieve counts are non-negative"))
}

/// Number of labeled interval orders on `[n]` as `sum_S beta_n(S) kappa_n(S)`.
pub fn count_lio(n: usize) -> Result<BigCount> {
    count_lio_with_jobs(n, 1)
}

/// [`count_lio`] with the subsets split into `jobs` contiguous shards.
pub fn count_lio_with_jobs(n: usize, jobs: usize) -> Result<BigCount> {
    guard("interval order count", n, MAX_LIO_N)?;
    let pascal = Pascal::new(n);
    Ok(sharded_subset_sum(n, jobs, |s| {
        if let Some(v) = beta_kappa_u128(&pascal, s) {
            return Term::Small(v);
        }
        let b = beta_from_boundaries(s);
        if b.is_zero() {
            return Term::Big(b);
        }
        Term::Big(b * kappa_from_boundaries(s))
    }))
}

/// Binomial coefficients `C(a, b)` for `a <= n`.
struct Pascal {
    rows: Vec<Vec<i128>>,
}

impl Pascal {
    fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<i128>> = vec![vec![1]];
        for a in 1..=n {
            let prev = &rows[a - 1];
            let row = (0..=a)
                .map(|b| {
                    if b == 0 || b == a {
                        1
                    } else {
                        prev[b - 1] + prev[b]
                    }
                })
                .collect();
            rows.push(row);
        }
        Self { rows }
    }

    fn get(&self, a: u64, b: u64) -> i128 {
        self.rows[a as usize].get(b as usize).copied().unwrap_or(0)
    }
}

/// `beta_n(S) * kappa_n(S)` in machine integers, `None` on overflow.
fn beta_kappa_u128(pascal: &Pascal, s: &[u64]) -> Option<u128> {
    let n = *s.last()?;
    let beta = hessenberg_unit_det_i128(s.len() - 1, |i, j| {
        Some(pascal.get(n - s[i], s[j + 1] - s[i]))
    })?;
    let mut acc = u128::try_from(beta).ok()?;
    for (r, w) in s.windows(2).enumerate() {
        if acc == 0 {
            break;
        }
        acc = acc.checked_mul((r as u128 + 1).checked_pow((w[1] - w[0]) as u32)?)?;
    }
    Some(acc)
}

/// A summand that usually fits in a `u128`.
enum Term {
    Small(u128),
    Big(BigUint),
}

/// Running sum that stays in a `u128` until it overflows.
#[derive(Default)]
struct Accumulator {
    small: u128,
    big: BigUint,
}

impl Accumulator {
    fn add(&mut self, term: Term) {
        match term {
            Term::Small(v) => match self.small.checked_add(v) {
                Some(sum) => self.small = sum,
                None => {
                    self.big += self.small;
                    self.small = v;
                }
            },
            Term::Big(v) => self.big += v,
        }
    }

    fn total(self) -> BigUint {
        self.big + self.small
    }
}

/// The same count as `sum_S alpha_n(S) lambda_n(S)`.
pub fn count_lio_alpha_lambda(n: usize) -> Result<BigCount> {
    guard("interval order count", n, MAX_LIO_N)?;
    let mut total = BigUint::zero();
    for set in IntSet::range(n.saturating_sub(1) as u32).subsets() {
        total += alpha(n, &set)? * lambda(n, &set)?;
    }
    Ok(total)
}

/// Sum `term(boundaries(S))` over every `S ⊆ [n-1]`, visiting subsets as a
/// binary counter (bit `r` selects `r + 1`).
fn sharded_subset_sum(n: usize, jobs: usize, term: impl Fn(&[u64]) -> Term + Sync) -> BigUint {
    let total: u64 = 1 << n.saturating_sub(1);
    let jobs = (jobs.max(1) as u64).min(total);
    let chunk = total.div_ceil(jobs);
    let run = |lo: u64, hi: u64| {
        let mut acc = Accumulator::default();
        let mut s = Vec::with_capacity(n + 1);
        for mask in lo..hi {
            s.clear();
            s.push(0);
            s.extend(
                (0..n.saturating_sub(1) as u64)
                    .filter(|r| mask >> r & 1 == 1)
                    .map(|r| r + 1),
            );
            s.push(n as u64);
            acc.add(term(&s));
        }
        acc.total()
    };
    if jobs == 1 {
        return run(0, total);
    }
    thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let (lo, hi) = (j * chunk, ((j + 1) * chunk).min(total));
                let run = &run;
                scope.spawn(move || run(lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .sum()
    })
}

fn bitmask(set: &IntSet) -> u32 {
    set.iter().fold(0, |m, x| m | 1 << x)
}

fn pair_masks(n: usize) -> (Vec<u32>, Vec<u32>) {
    Permutation::all(n)
        .map(|p| (bitmask(&p.descent_set()), bitmask(&p.ascent_bottom_set())))
        .unzip()
}

/// `|{ (pi, tau) in S_n x S_n : A(tau) ⊆ D(pi) }|`, by checking every pair.
pub fn count_pairs_ab_in_d(n: usize) -> Result<BigCount> {
    guard("pair enumeration", n, MAX_PAIR_N)?;
    let (desc, asc) = pair_masks(n);
    let hits = desc
        .iter()
        .map(|&d| asc.iter().filter(|&&a| a & !d == 0).count() as u64)
        .sum::<u64>();
    Ok(hits.into())
}

/// `|{ (pi, tau) in S_n x S_n : D(pi) ⊆ A(tau) }|`, by checking every pair.
pub fn count_pairs_d_in_ab(n: usize) -> Result<BigCount> {
    guard("pair enumeration", n, MAX_PAIR_N)?;
    let (desc, asc) = pair_masks(n);
    let hits = desc
        .iter()
        .map(|&d| asc.iter().filter(|&&a| d & !a == 0).count() as u64)
        .sum::<u64>();
    Ok(hits.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(alpha, beta, kappa, lambda)` by filtering `S_n` directly.
    fn brute(n: usize, set: &IntSet) -> [u64; 4] {
        let mut out = [0u64; 4];
        for p in Permutation::all(n) {
            let d = p.descent_set();
            let a = p.ascent_bottom_set();
            out[0] += u64::from(d.is_subset(set));
            out[1] += u64::from(d == *set);
            out[2] += u64::from(a.is_subset(set));
            out[3] += u64::from(a == *set);
        }
        out
    }

    fn big(x: u64) -> BigCount {
        BigUint::from(x)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(5, -1), big(0));
        assert_eq!(binomial(5, 6), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    #[test]
    fn small_values() {
        let one = IntSet::from([1]);
        assert_eq!(alpha(3, &one).unwrap(), big(3));
        assert_eq!(alpha(3, &IntSet::from([1, 2])).unwrap(), big(6));
        assert_eq!(beta(3, &one).unwrap(), big(2));
        assert_eq!(kappa(3, &one).unwrap(), big(4));
        assert_eq!(lambda(3, &one).unwrap(), big(3));
        assert_eq!(lambda(3, &IntSet::from([1, 2])).unwrap(), big(1));
        assert_eq!(kappa(8, &IntSet::from([3, 5, 6, 7])).unwrap(), big(240));
        for n in 0..6 {
            for f in [alpha, beta, kappa, lambda] {
                assert_eq!(f(n, &IntSet::new()).unwrap(), big(1));
            }
        }
    }

    #[test]
    fn out_of_range_sets() {
        assert!(alpha(3, &IntSet::from([3])).is_err());
        assert!(beta(3, &IntSet::from([0])).is_err());
        assert!(kappa(1, &IntSet::from([1])).is_err());
        assert!(lambda(0, &IntSet::from([1])).is_err());
    }

    #[test]
    fn formulas_match_brute_force() {
        for n in 0..=7usize {
            for set in IntSet::range(n.saturating_sub(1) as u32).subsets() {
                let [a, b, k, l] = brute(n, &set);
                assert_eq!(alpha(n, &set).unwrap(), big(a));
                assert_eq!(beta(n, &set).unwrap(), big(b));
                assert_eq!(beta_by_elimination(n, &set).unwrap(), big(b));
                assert_eq!(beta_by_sieve(n, &set).unwrap(), big(b));
                assert_eq!(kappa(n, &set).unwrap(), big(k));
                assert_eq!(lambda(n, &set).unwrap(), big(l));
            }
        }
    }

    #[test]
    fn betas_partition_factorial() {
        for n in 0..=10u64 {
            let total: BigUint = IntSet::range(n.saturating_sub(1) as u32)
                .subsets()
                .map(|s| beta(n as usize, &s).unwrap())
                .sum();
            assert_eq!(total, big((1..=n).product()));
        }
    }

    #[test]
    fn big_determinant_route_matches_fast_route() {
        // 39! overflows i128, so this goes through the BigInt expansion
        let n = 40usize;
        let set: IntSet = (1..40).step_by(2).collect();
        assert_eq!(
            beta(n, &set).unwrap(),
            beta_by_elimination(n, &set).unwrap()
        );
        let s = boundaries(9, &IntSet::from([2, 3, 7])).unwrap();
        let entry = |i: usize, j: usize| binomial(9 - s[i] as i64, s[j + 1] as i64 - s[i] as i64);
        assert_eq!(
            hessenberg_unit_det_big(s.len() - 1, entry),
            beta(9, &IntSet::from([2, 3, 7])).unwrap()
        );
    }

    #[test]
    fn determinant_basics() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(determinant(m(&[])), BigInt::from(1));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(m(&[&[2, 3, 1], &[4, 1, 5], &[0, 2, 7]])),
            BigInt::from(-82)
        );
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    }

    #[test]
    fn lio_counts() {
        let values: Vec<BigCount> = (0..=7).map(|n| count_lio(n).unwrap()).collect();
        let expected: Vec<BigCount> = [1u64, 1, 3, 19, 207, 3451, 81663, 2602699]
            .iter()
            .map(|&x| big(x))
            .collect();
        assert_eq!(values, expected);
        for (n, v) in values.iter().enumerate() {
            assert_eq!(&count_lio_alpha_lambda(n).unwrap(), v);
        }
        assert!(count_lio(25).is_err());
    }

    #[test]
    fn pair_counts() {
        assert_eq!(count_pairs_ab_in_d(1).unwrap(), big(1));
        assert_eq!(count_pairs_ab_in_d(2).unwrap(), big(3));
        assert_eq!(count_pairs_d_in_ab(2).unwrap(), big(3));
        for n in 0..=6 {
            let lio = count_lio(n).unwrap();
            assert_eq!(count_pairs_ab_in_d(n).unwrap(), lio);
            assert_eq!(count_pairs_d_in_ab(n).unwrap(), lio);
        }
        assert!(count_pairs_ab_in_d(8).is_err());
    }

    #[test]
    fn jobs_do_not_change_the_sum() {
        let one = count_lio_with_jobs(12, 1).unwrap();
        for jobs in [2, 3, 8, 5000] {
            assert_eq!(count_lio_with_jobs(12, jobs).unwrap(), one);
        }
        assert_eq!(count_lio_with_jobs(0, 4).unwrap(), big(1));
    }

    #[test]
    fn machine_integer_path_matches_big_integers() {
        for n in [0usize, 1, 9, 14] {
            let slow: BigCount = IntSet::range(n.saturating_sub(1) as u32)
                .subsets()
                .map(|set| beta(n, &set).unwrap() * kappa(n, &set).unwrap())
                .sum();
            assert_eq!(count_lio(n).unwrap(), slow);
        }
        let mut acc = Accumulator::default();
        acc.add(Term::Small(u128::MAX));
        acc.add(Term::Small(2));
        acc.add(Term::Big(BigUint::from(3u8)));
        assert_eq!(acc.total(), BigUint::from(u128::MAX) + 5u8);
    }
}
