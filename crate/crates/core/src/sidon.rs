//! Sidon sets and k-fold Sidon sets.
//!
//! A set `A` is k-fold Sidon when no equation `u1·x1 + u2·x2 + u3·x3 + u4·x4 = 0`
//! with `|ui| ≤ k` and `u1 + u2 + u3 + u4 = 0` has a nontrivial solution in
//! `A⁴`. A solution is trivial when, grouping the indices by equal `x`
//! values, every group's coefficients sum to zero.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients `(u1, u2, u3, u4)` summing to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EquationCoeffs([i64; 4]);

impl EquationCoeffs {
    pub fn new(u: [i64; 4]) -> Result<Self> {
        let sum: i64 = u.iter().sum();
        if sum != 0 {
            return Err(Error::CoefficientSum(sum));
        }
        Ok(EquationCoeffs(u))
    }

    pub fn get(&self) -> [i64; 4] {
        self.0
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|u| u.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: [u64; 4]) -> i128 {
        self.0.iter().zip(x).map(|(&u, x)| u as i128 * x as i128).sum()
    }
}

impl fmt::Display for EquationCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionClassification {
    /// Index classes (0-based) by equal `x` value, in order of first index.
    pub parts: Vec<Vec<usize>>,
    /// Coefficient sum over each part.
    pub part_sums: Vec<i64>,
    pub verdict: Verdict,
    /// Whether `x` actually satisfies the equation.
    pub is_solution: bool,
}

pub fn classify_solution(u: [i64; 4], x: [u64; 4]) -> Result<SolutionClassification> {
    let coeffs = EquationCoeffs::new(u)?;
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(4);
    let mut values: Vec<u64> = Vec::with_capacity(4);
    for (i, &xi) in x.iter().enumerate() {
        match values.iter().position(|&v| v == xi) {
            Some(p) => parts[p].push(i),
            None => {
                values.push(xi);
                parts.push(vec![i]);
            }
        }
    }
    let part_sums: Vec<i64> = parts.iter().map(|p| p.iter().map(|&i| u[i]).sum()).collect();
    let verdict = if part_sums.iter().all(|&s| s == 0) {
        Verdict::Trivial
    } else {
        Verdict::Nontrivial
    };
    Ok(SolutionClassification {
        parts,
        part_sums,
        verdict,
        is_solution: coeffs.evaluate(x) == 0,
    })
}

#[inline]
fn is_nontrivial(u: [i64; 4], x: [u64; 4]) -> bool {
    (0..4).any(|i| {
        // Only the first index of each value class needs checking.
        (0..i).all(|j| x[j] != x[i]) && (i..4).filter(|&j| x[j] == x[i]).map(|j| u[j]).sum::<i64>() != 0
    })
}

/// True iff all sums `a_i + a_j` with `i ≤ j` are distinct.
pub fn is_sidon(a: &[u64]) -> bool {
    sidon_counterexample(a).is_none()
}

/// First colliding pair of sums `x + y = z + w` (with `x ≤ y`, `z ≤ w` and
/// `{x, y} ≠ {z, w}`), scanning sums in lexicographic order of `(x, y)`.
pub fn sidon_counterexample(a: &[u64]) -> Option<[u64; 4]> {
    let mut set: Vec<u64> = a.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut sums: HashMap<u64, (u64, u64)> = HashMap::with_capacity(set.len() * (set.len() + 1) / 2);
    for (i, &x) in set.iter().enumerate() {
        for &y in &set[i..] {
            if let Some(&(z, w)) = sums.get(&(x + y)) {
                return Some([z, w, x, y]);
            }
            sums.insert(x + y, (x, y));
        }
    }
    None
}

/// Greedy Sidon sequence: starts at 1 and always appends the smallest
/// integer that keeps all pairwise sums distinct.
#[derive(Debug, Clone, Default)]
pub struct GreedySidon {
    elems: Vec<u64>,
    sums: HashSet<u64>,
}

impl GreedySidon {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for GreedySidon {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut c = self.elems.last().map_or(1, |&l| l + 1);
        while self.elems.iter().any(|&a| self.sums.contains(&(a + c))) || self.sums.contains(&(2 * c)) {
            c += 1;
        }
        self.elems.push(c);
        for &a in &self.elems {
            self.sums.insert(a + c);
        }
        Some(c)
    }
}

pub fn greedy_sidon(count: usize) -> Vec<u64> {
    GreedySidon::new().take(count).collect()
}

/// Greedy Sidon elements not exceeding `limit`.
pub fn greedy_sidon_upto(limit: u64) -> Vec<u64> {
    GreedySidon::new().take_while(|&a| a <= limit).collect()
}

/// Greedy k-fold Sidon sequence.
///
/// `a_1 = 1`; each later term is the smallest integer avoiding every value
/// forced by an equation with `|ui| ≤ k`: for an index set `S` with
/// `σ = Σ_{i∈S} ui ≠ 0` and earlier terms on the remaining indices, the
/// forced value is `−(Σ_{i∉S} ui·xi) / σ`. Forced values are accumulated
/// incrementally in a bitmap: each new term only contributes tuples that
/// contain it.
#[derive(Debug, Clone)]
pub struct GreedyKFold {
    k: i64,
    elems: Vec<u64>,
    excluded: Vec<u64>,
    /// Coefficient vectors for the free indices, grouped by free-index count
    /// (1, 2, 3), each with its `σ = −Σ u_free`.
    free_coeffs: [Vec<(Vec<i64>, i64)>; 3],
}

impl GreedyKFold {
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "k must be positive");
        let k = k as i64;
        let mut free_coeffs: [Vec<(Vec<i64>, i64)>; 3] = Default::default();
        for f in 1..=3usize {
            let j = (4 - f) as i64;
            let mut u = vec![-k; f];
            loop {
                let sigma = -u.iter().sum::<i64>();
                // The |S| = j coefficients must be able to sum to σ ≠ 0.
                if sigma != 0 && sigma.abs() <= j * k {
                    free_coeffs[f - 1].push((u.clone(), sigma));
                }
                let mut i = 0;
                while i < f && u[i] == k {
                    u[i] = -k;
                    i += 1;
                }
                if i == f {
                    break;
                }
                u[i] += 1;
            }
        }
        GreedyKFold {
            k,
            elems: Vec::new(),
            excluded: Vec::new(),
            free_coeffs,
        }
    }

    pub fn k(&self) -> u32 {
        self.k as u32
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    fn is_excluded(&self, v: u64) -> bool {
        let (w, b) = ((v / 64) as usize, v % 64);
        self.excluded.get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    fn exclude(&mut self, v: u64) {
        let (w, b) = ((v / 64) as usize, v % 64);
        if w >= self.excluded.len() {
            self.excluded.resize(w + 1, 0);
        }
        self.excluded[w] |= 1 << b;
    }

    /// Records forced values from all free tuples that use the newest term.
    fn absorb_newest(&mut self) {
        let newest = *self.elems.last().unwrap();
        let n = self.elems.len();
        let mut forced = Vec::new();
        for f in 1..=3usize {
            // Tuples over elems^f containing the newest term, keyed by the
            // position of its first occurrence: earlier positions range over
            // older terms, later positions over all terms.
            for first in 0..f {
                let ranges: Vec<(usize, usize)> = (0..f)
                    .map(|pos| match pos.cmp(&first) {
                        std::cmp::Ordering::Less => (0, n - 1),
                        std::cmp::Ordering::Equal => (n - 1, n),
                        std::cmp::Ordering::Greater => (0, n),
                    })
                    .collect();
                if ranges.iter().any(|(lo, hi)| lo >= hi) {
                    continue;
                }
                let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
                loop {
                    let x: Vec<i64> = idx.iter().map(|&i| self.elems[i] as i64).collect();
                    for (u, sigma) in &self.free_coeffs[f - 1] {
                        let v: i64 = u.iter().zip(&x).map(|(a, b)| a * b).sum();
                        if v % sigma == 0 {
                            let t = -v / sigma;
                            if t > newest as i64 {
                                forced.push(t as u64);
                            }
                        }
                    }
                    let mut pos = 0;
                    while pos < f {
                        idx[pos] += 1;
                        if idx[pos] < ranges[pos].1 {
                            break;
                        }
                        idx[pos] = ranges[pos].0;
                        pos += 1;
                    }
                    if pos == f {
                        break;
                    }
                }
            }
        }
        for t in forced {
            self.exclude(t);
        }
    }
}

impl Iterator for GreedyKFold {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut c = match self.elems.last() {
            None => 1,
            Some(&l) => l + 1,
        };
        while self.is_excluded(c) {
            c += 1;
        }
        self.elems.push(c);
        self.absorb_newest();
        Some(c)
    }
}

pub fn greedy_kfold(k: u32, count: usize) -> Vec<u64> {
    GreedyKFold::new(k).take(count).collect()
}

/// Greedy k-fold elements not exceeding `limit`.
pub fn greedy_kfold_upto(k: u32, limit: u64) -> Vec<u64> {
    GreedyKFold::new(k).take_while(|&a| a <= limit).collect()
}

/// `2^8 · k^4 · m^3`, the explicit growth bound for the greedy recursion.
pub fn kfold_growth_bound(k: u32, m: u64) -> u128 {
    256 * (k as u128).pow(4) * (m as u128).pow(3)
}

/// A nontrivial solution found in a candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KFoldCounterexample {
    pub u: EquationCoeffs,
    pub x: [u64; 4],
}

/// Exhaustive k-fold Sidon check. Returns the counterexample with
/// lexicographically least `x` (positions in order), and for that `x` the
/// lexicographically least `u` whose first nonzero entry is positive.
pub fn is_kfold_sidon(a: &[u64], k: u32) -> std::result::Result<(), KFoldCounterexample> {
    let mut set: Vec<u64> = a.to_vec();
    set.sort_unstable();
    set.dedup();
    let Some(&min) = set.first() else {
        return Ok(());
    };
    let members: HashSet<u64> = set.iter().copied().collect();
    let k = k as i64;

    for &x1 in &set {
        for &x2 in &set {
            for &x3 in &set {
                let mut best_x4: Option<u64> = None;
                for u1 in -k..=k {
                    for u2 in -k..=k {
                        for u3 in -k..=k {
                            let u4 = -(u1 + u2 + u3);
                            if u4.abs() > k {
                                continue;
                            }
                            let partial = u1 as i128 * x1 as i128 + u2 as i128 * x2 as i128 + u3 as i128 * x3 as i128;
                            let x4 = if u4 == 0 {
                                if partial != 0 {
                                    continue;
                                }
                                min
                            } else {
                                if partial % u4 as i128 != 0 {
                                    continue;
                                }
                                let v = -partial / u4 as i128;
                                if v <= 0 || !members.contains(&(v as u64)) {
                                    continue;
                                }
                                v as u64
                            };
                            if best_x4.is_some_and(|b| b <= x4) {
                                continue;
                            }
                            if is_nontrivial([u1, u2, u3, u4], [x1, x2, x3, x4]) {
                                best_x4 = Some(x4);
                            }
                        }
                    }
                }
                if let Some(x4) = best_x4 {
                    let x = [x1, x2, x3, x4];
                    return Err(canonical_witness(x, k));
                }
            }
        }
    }
    Ok(())
}

fn canonical_witness(x: [u64; 4], k: i64) -> KFoldCounterexample {
    for u1 in -k..=k {
        for u2 in -k..=k {
            for u3 in -k..=k {
                let u4 = -(u1 + u2 + u3);
                let u = [u1, u2, u3, u4];
                if u4.abs() > k || u.iter().find(|&&v| v != 0).is_none_or(|&v| v < 0) {
                    continue;
                }
                let coeffs = EquationCoeffs(u);
                if coeffs.evaluate(x) == 0 && is_nontrivial(u, x) {
                    return KFoldCounterexample { u: coeffs, x };
                }
            }
        }
    }
    unreachable!("x was selected because a nontrivial solution exists")
}

/// A set verified to be k-fold Sidon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KFoldCertificate {
    pub set: Vec<u64>,
    pub k: u32,
    /// Largest element covered by the exhaustive check.
    pub verified_upto: u64,
}

impl KFoldCertificate {
    pub fn verify(set: &[u64], k: u32) -> std::result::Result<Self, KFoldCounterexample> {
        is_kfold_sidon(set, k)?;
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        Ok(KFoldCertificate {
            verified_upto: set.last().copied().unwrap_or(0),
            set,
            k,
        })
    }

    pub fn report(&self) -> CertificateReport {
        let m = self.set.len() as u64;
        let max = self.verified_upto;
        // |A ∩ [N]| = c·k^(-4/3)·N^(1/3) at N = max(A), solved for c.
        let implied_constant = if max == 0 {
            None
        } else {
            Some(m as f64 * (self.k as f64).powf(4.0 / 3.0) / (max as f64).cbrt())
        };
        CertificateReport {
            k: self.k,
            size: m,
            max_element: max,
            growth_bound: kfold_growth_bound(self.k, m).to_string(),
            within_growth_bound: (max as u128) <= kfold_growth_bound(self.k, m),
            implied_constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub k: u32,
    pub size: u64,
    pub max_element: u64,
    /// `2^8·k^4·m^3` for `m = size`.
    pub growth_bound: String,
    pub within_growth_bound: bool,
    /// Empirical `c` in `|A| ≥ c·k^(-4/3)·N^(1/3)`; no claim is attached.
    pub implied_constant: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Greedy oracle: the smallest candidate whose addition keeps the set
    /// k-fold Sidon, checked by direct enumeration of every tuple involving
    /// the candidate.
    fn brute_force_greedy(k: i64, count: usize) -> Vec<u64> {
        let mut a = vec![1u64];
        while a.len() < count {
            let mut c = a.last().unwrap() + 1;
            loop {
                let mut s = a.clone();
                s.push(c);
                let mut bad = false;
                'search: for x in tuples(&s) {
                    if !x.contains(&c) {
                        continue;
                    }
                    for u in coeff_tuples(k) {
                        let lhs: i64 = (0..4).map(|i| u[i] * x[i] as i64).sum();
                        if lhs == 0 && classify_solution(u, x).unwrap().verdict == Verdict::Nontrivial {
                            bad = true;
                            break 'search;
                        }
                    }
                }
                if !bad {
                    break;
                }
                c += 1;
            }
            a.push(c);
        }
        a
    }

    fn tuples(s: &[u64]) -> Vec<[u64; 4]> {
        let mut out = Vec::new();
        for &a in s {
            for &b in s {
                for &c in s {
                    for &d in s {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    fn coeff_tuples(k: i64) -> Vec<[i64; 4]> {
        let mut out = Vec::new();
        for a in -k..=k {
            for b in -k..=k {
                for c in -k..=k {
                    for d in -k..=k {
                        if a + b + c + d == 0 {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn classification_examples() {
        let c = classify_solution([1, -1, 1, -1], [5, 5, 9, 9]).unwrap();
        assert_eq!(c.parts, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.part_sums, vec![0, 0]);
        assert_eq!(c.verdict, Verdict::Trivial);

        let c = classify_solution([1, 1, -1, -1], [1, 3, 2, 2]).unwrap();
        assert_eq!(c.parts, vec![vec![0], vec![1], vec![2, 3]]);
        assert_eq!(c.part_sums, vec![1, 1, -2]);
        assert_eq!(c.verdict, Verdict::Nontrivial);
        assert!(c.is_solution);

        // 2·3 − 3 − 3 + 0·7 = 0
        let c = classify_solution([2, -1, -1, 0], [3, 3, 3, 7]).unwrap();
        assert_eq!(c.parts, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(c.part_sums, vec![0, 0]);
        assert_eq!(c.verdict, Verdict::Trivial);
        assert!(c.is_solution);

        assert!(matches!(classify_solution([1, 1, 1, 1], [1, 2, 3, 4]), Err(Error::CoefficientSum(4))));
    }

    #[test]
    fn sidon_examples() {
        assert!(!is_sidon(&[1, 2, 3]));
        assert_eq!(sidon_counterexample(&[1, 2, 3]), Some([1, 3, 2, 2]));
        assert_eq!(sidon_counterexample(&[1, 2, 4, 8]), None);
        // Sums of {1,2,4,8}: 2,3,5,9,4,6,10,8,12,16 are all distinct.
        assert!(is_sidon(&[1, 2, 4, 8]));
        assert!(is_sidon(&[]));
        assert!(is_sidon(&[7]));
    }

    #[test]
    fn greedy_sidon_examples() {
        assert_eq!(greedy_sidon(1), vec![1]);
        assert_eq!(greedy_sidon(5), vec![1, 2, 4, 8, 13]);
        assert_eq!(greedy_sidon(10), vec![1, 2, 4, 8, 13, 21, 31, 45, 66, 81]);
        assert_eq!(greedy_sidon_upto(4), vec![1, 2, 4]);
        for n in 1..40 {
            assert!(is_sidon(&greedy_sidon(n)));
        }
    }

    #[test]
    fn greedy_kfold_matches_brute_force() {
        // Frozen from the brute-force oracle above.
        assert_eq!(greedy_kfold(1, 5), vec![1, 2, 4, 8, 13]);
        assert_eq!(greedy_kfold(2, 8), vec![1, 2, 5, 12, 28, 40, 49, 85]);
        assert_eq!(greedy_kfold(3, 6), vec![1, 2, 6, 19, 26, 63]);
        assert_eq!(brute_force_greedy(1, 6), greedy_kfold(1, 6));
        assert_eq!(brute_force_greedy(2, 6), greedy_kfold(2, 6));
        for k in 1..=5 {
            assert_eq!(greedy_kfold(k, 1), vec![1]);
        }
        assert_eq!(greedy_kfold_upto(2, 40), vec![1, 2, 5, 12, 28, 40]);
    }

    #[test]
    fn greedy_kfold_prefixes_certified() {
        let a = greedy_kfold(2, 10);
        for m in 1..=a.len() {
            assert_eq!(is_kfold_sidon(&a[..m], 2), Ok(()));
            assert!(a[m - 1] as u128 <= kfold_growth_bound(2, m as u64));
        }
    }

    #[test]
    fn kfold_check_examples() {
        assert_eq!(is_kfold_sidon(&[1, 2], 2), Ok(()));
        let cex = is_kfold_sidon(&[1, 2, 3], 1).unwrap_err();
        assert_eq!(cex.u.get(), [1, -1, -1, 1]);
        assert_eq!(cex.x, [1, 2, 2, 3]);
        let c = classify_solution(cex.u.get(), cex.x).unwrap();
        assert_eq!(c.part_sums, vec![1, -2, 1]);
        assert!(c.is_solution);
        assert_eq!(is_kfold_sidon(&[], 3), Ok(()));
    }

    #[test]
    fn kfold_check_matches_enumeration() {
        // Every 4-subset of [1..12]: compare against full enumeration.
        let universe: Vec<u64> = (1..=12).collect();
        let mut checked = 0;
        for mask in 0u32..(1 << 12) {
            if mask.count_ones() != 4 {
                continue;
            }
            let s: Vec<u64> = universe.iter().copied().filter(|v| mask >> (v - 1) & 1 == 1).collect();
            for k in 1..=2 {
                let brute = tuples(&s).into_iter().any(|x| {
                    coeff_tuples(k).into_iter().any(|u| {
                        (0..4).map(|i| u[i] * x[i] as i64).sum::<i64>() == 0 && is_nontrivial(u, x)
                    })
                });
                assert_eq!(is_kfold_sidon(&s, k as u32).is_err(), brute, "{s:?} k={k}");
            }
            checked += 1;
        }
        assert_eq!(checked, 495);
    }

    #[test]
    fn certificate_report() {
        let a = greedy_kfold(2, 6);
        let cert = KFoldCertificate::verify(&a, 2).unwrap();
        let rep = cert.report();
        assert_eq!(rep.size, 6);
        assert_eq!(rep.max_element, 40);
        assert_eq!(rep.growth_bound, (256u64 * 16 * 216).to_string());
        assert!(rep.within_growth_bound);
        assert!(rep.implied_constant.unwrap() > 0.0);
        assert!(KFoldCertificate::verify(&[1, 2, 3], 1).is_err());
    }

    proptest! {
        #[test]
        fn one_fold_implies_sidon(set in prop::collection::btree_set(1u64..60, 0..7)) {
            let a: Vec<u64> = set.into_iter().collect();
            if is_kfold_sidon(&a, 1).is_ok() {
                prop_assert!(is_sidon(&a));
            }
        }

        #[test]
        fn witnesses_are_nontrivial_solutions(set in prop::collection::btree_set(1u64..30, 1..6), k in 1u32..3) {
            let a: Vec<u64> = set.into_iter().collect();
            if let Err(cex) = is_kfold_sidon(&a, k) {
                let c = classify_solution(cex.u.get(), cex.x).unwrap();
                prop_assert!(c.is_solution);
                prop_assert_eq!(c.verdict, Verdict::Nontrivial);
                prop_assert!(cex.u.max_abs() <= k as u64);
                prop_assert!(cex.x.iter().all(|v| a.contains(v)));
            }
        }
    }
}
