//! Rearrangements, lp norms, best s-term approximation, the block norm whose
//! unit ball is the convex hull of unit-norm s-sparse vectors, and membership
//! in the cone of effectively sparse vectors.

use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::stats::pairwise_sum_by;

/// Relative tolerance used by the norm-identity assertions in this crate's
/// test suites.
pub const NORM_IDENTITY_RTOL: f64 = 1e-10;

/// Nonincreasing rearrangement: `|x|` sorted in descending order.
///
/// Ties keep ascending original index (stable sort), so the result is a
/// deterministic function of the input.
pub fn rearrangement(x: &DenseVector) -> DenseVector {
    let mut abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    abs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    DenseVector::new(abs).expect("rearrangement of a finite vector is finite")
}

/// Indices of the `s` largest absolute entries, ties broken by lowest index.
pub fn top_s_indices(x: &[f64], s: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| {
        x[j].abs()
            .partial_cmp(&x[i].abs())
            .unwrap()
            .then(i.cmp(&j))
    });
    idx.truncate(s);
    idx
}

/// The lp norm for `p >= 1`, with `p = f64::INFINITY` giving the max norm.
///
/// Scaled by the largest magnitude internally, so large `p` does not overflow.
pub fn lp_norm(x: &DenseVector, p: f64) -> Result<f64> {
    lp_norm_slice(x.as_slice(), p)
}

pub(crate) fn lp_norm_slice(x: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("lp_norm requires p >= 1, got {p}")));
    }
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    if p == 1.0 {
        return Ok(pairwise_sum_by(x.len(), |i| x[i].abs()));
    }
    if p == 2.0 {
        let ss = pairwise_sum_by(x.len(), |i| {
            let t = x[i] / max;
            t * t
        });
        return Ok(max * ss.sqrt());
    }
    let ss = pairwise_sum_by(x.len(), |i| (x[i].abs() / max).powf(p));
    Ok(max * ss.powf(1.0 / p))
}

/// l1 error of the best s-term approximation: the sum of the `n - s`
/// smallest absolute entries.
pub fn best_s_term_error(x: &DenseVector, s: usize) -> Result<f64> {
    let n = x.dim();
    if s > n {
        return Err(Error::invalid(format!(
            "best_s_term_error: s = {s} exceeds dimension {n}"
        )));
    }
    let sorted = rearrangement(x);
    Ok(pairwise_sum_by(n - s, |i| sorted[s + i]))
}

/// Block norm over the nonincreasing rearrangement: consecutive blocks of
/// size `s` (last block possibly smaller), summing blockwise lq norms. Its
/// unit ball is the convex hull of the s-sparse unit-lq-norm vectors.
pub fn dsq_norm(x: &DenseVector, s: usize, q: f64) -> Result<f64> {
    let n = x.dim();
    if s == 0 || s > n {
        return Err(Error::invalid(format!("dsq_norm: need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    if q.is_nan() || q < 1.0 || q.is_infinite() {
        return Err(Error::invalid(format!("dsq_norm requires finite q >= 1, got {q}")));
    }
    let sorted = rearrangement(x);
    let mut total = 0.0;
    let mut lo = 0;
    while lo < n {
        let hi = (lo + s).min(n);
        total += lp_norm_slice(&sorted.as_slice()[lo..hi], q)?;
        lo = hi;
    }
    Ok(total)
}

/// Parameters of the cone of vectors whose top-`s` lq mass dominates
/// `rho / s^(1-1/q)` times the l1 tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParams {
    pub rho: f64,
    pub s: usize,
    pub q: f64,
}

impl ConeParams {
    /// `0 < rho <= 1`, `s >= 1`, `q >= 1`. The recovery theory uses
    /// `rho < 1`; membership itself is well defined at `rho = 1`.
    pub fn new(rho: f64, s: usize, q: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::invalid(format!("cone rho must be in (0, 1], got {rho}")));
        }
        if s == 0 {
            return Err(Error::invalid("cone sparsity s must be >= 1"));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::invalid(format!("cone q must be >= 1, got {q}")));
        }
        Ok(ConeParams { rho, s, q })
    }
}

/// Result of a cone membership test: the flag plus the signed margin
/// `||x_S||_q - (rho / s^(1-1/q)) ||x_{S^c}||_1` for the top-`s` support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeMembership {
    pub member: bool,
    pub margin: f64,
}

/// Tests membership with `S` = the `s` largest absolute entries, which
/// simultaneously maximizes `||x_S||_q` and minimizes `||x_{S^c}||_1` over
/// all supports of size `s`, so the test is exact for the existential
/// definition of the cone.
pub fn cone_membership(x: &DenseVector, cp: &ConeParams) -> Result<ConeMembership> {
    let n = x.dim();
    if cp.s > n {
        return Err(Error::invalid(format!("cone s = {} exceeds dimension {n}", cp.s)));
    }
    if x.iter().all(|v| *v == 0.0) {
        return Err(Error::invalid("cone membership is undefined for the zero vector"));
    }
    let sorted = rearrangement(x);
    let head = lp_norm_slice(&sorted.as_slice()[..cp.s], cp.q)?;
    let tail = pairwise_sum_by(n - cp.s, |i| sorted[cp.s + i]);
    let factor = cp.rho / (cp.s as f64).powf(1.0 - 1.0 / cp.q);
    let margin = head - factor * tail;
    Ok(ConeMembership { member: margin >= 0.0, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;

    fn vecf(v: &[f64]) -> DenseVector {
        DenseVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(rearrangement(&vecf(&[-3.0, 1.0, 2.0])).as_slice(), &[3.0, 2.0, 1.0]);
        assert_eq!(rearrangement(&vecf(&[0.0, 0.0])).as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn rearrangement_matches_independent_sort() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let mut oracle: Vec<f64> = x.iter().map(|v| v.abs()).collect();
            oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
            oracle.reverse();
            assert_eq!(rearrangement(&vecf(&x)).as_slice(), oracle.as_slice());
        }
    }

    #[test]
    fn lp_norm_examples() {
        assert_eq!(lp_norm(&vecf(&[3.0, 4.0]), 2.0).unwrap(), 5.0);
        assert_eq!(lp_norm(&vecf(&[1.0, 1.0, 1.0]), f64::INFINITY).unwrap(), 1.0);
        assert_eq!(lp_norm(&vecf(&[1.0, -2.0, 2.0]), 1.0).unwrap(), 5.0);
    }

    #[test]
    fn lp_norm_rejects_p_below_one() {
        assert!(lp_norm(&vecf(&[1.0]), 0.5).is_err());
        assert!(lp_norm(&vecf(&[1.0]), f64::NAN).is_err());
    }

    #[test]
    fn lp_norm_large_p_no_overflow() {
        let x = vecf(&[1e200, -2e200]);
        let v = lp_norm(&x, 128.0).unwrap();
        assert!(v.is_finite());
        assert!(v >= 2e200 && v <= 2.02e200);
    }

    #[test]
    fn best_s_term_examples() {
        assert_eq!(best_s_term_error(&vecf(&[3.0, 2.0, 1.0]), 1).unwrap(), 3.0);
        assert_eq!(best_s_term_error(&vecf(&[5.0, -1.0, 0.5]), 3).unwrap(), 0.0);
        assert!(best_s_term_error(&vecf(&[1.0]), 2).is_err());
    }

    /// Brute force over all supports of size s.
    fn best_s_oracle(x: &[f64], s: usize) -> f64 {
        fn supports(n: usize, s: usize) -> Vec<Vec<usize>> {
            if s == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (0..s).collect();
            loop {
                out.push(idx.clone());
                let mut i = s;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if idx[i] != i + n - s {
                        break;
                    }
                }
                idx[i] += 1;
                for j in i + 1..s {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        supports(x.len(), s)
            .iter()
            .map(|sup| {
                x.iter()
                    .enumerate()
                    .filter(|(i, _)| !sup.contains(i))
                    .map(|(_, v)| v.abs())
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn best_s_term_matches_bruteforce() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.random_range(1..8usize);
            let s = rng.random_range(0..=n);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let got = best_s_term_error(&vecf(&x), s).unwrap();
            let want = best_s_oracle(&x, s);
            assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn best_s_term_nonincreasing_in_s() {
        let x = vecf(&[0.3, -2.0, 1.5, 0.0, 4.0, -0.7]);
        let mut prev = f64::INFINITY;
        for s in 0..=x.dim() {
            let e = best_s_term_error(&x, s).unwrap();
            assert!(e <= prev + 1e-15);
            prev = e;
        }
    }

    #[test]
    fn dsq_examples() {
        // s-sparse with unit q-norm: all mass in the first block.
        let x = vecf(&[0.0, 3.0, 0.0, -4.0, 0.0, 0.0]);
        let d = dsq_norm(&x, 2, 2.0).unwrap();
        assert!((d - 5.0).abs() < 1e-12);

        let y = vecf(&[1.0, 1.0, 1.0, 1.0]);
        let d = dsq_norm(&y, 2, 2.0).unwrap();
        assert!((d - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn dsq_equals_lq_for_sparse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(2..30usize);
            let s = rng.random_range(1..=n);
            let mut x = vec![0.0; n];
            // exactly at most s nonzeros
            for _ in 0..s {
                let i = rng.random_range(0..n);
                x[i] = rng.random_range(-2.0..2.0);
            }
            let q = *[1.0, 1.5, 2.0, 3.0].choose(&mut rng).unwrap();
            let xv = vecf(&x);
            let d = dsq_norm(&xv, s, q).unwrap();
            let l = lp_norm(&xv, q).unwrap();
            assert!((d - l).abs() <= NORM_IDENTITY_RTOL * l.max(1e-300));
        }
    }

    #[test]
    fn dsq_norm_equivalence_bounds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(1..40usize);
            let s = rng.random_range(1..=n);
            let q = *[1.0, 1.5, 2.0, 4.0].choose(&mut rng).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let xv = vecf(&x);
            let d = dsq_norm(&xv, s, q).unwrap();
            let l = lp_norm(&xv, q).unwrap();
            let blocks = n.div_ceil(s) as f64;
            assert!(d >= l * (1.0 - 1e-12));
            assert!(d <= blocks.powf(1.0 - 1.0 / q) * l * (1.0 + 1e-12));
        }
    }

    proptest! {
        #[test]
        fn rearrangement_is_nonincreasing_permutation(
            x in proptest::collection::vec(-1e6f64..1e6, 1..32)
        ) {
            let r = rearrangement(&vecf(&x));
            for w in r.as_slice().windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            let mut a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
            let mut b = r.as_slice().to_vec();
            a.sort_by(|p, q| p.partial_cmp(q).unwrap());
            b.sort_by(|p, q| p.partial_cmp(q).unwrap());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn dsq_homogeneity_and_quasi_triangle(
            x in proptest::collection::vec(-100.0f64..100.0, 4..16),
            y in proptest::collection::vec(-100.0f64..100.0, 4..16),
            c in -50.0f64..50.0,
            s in 1usize..4,
            qi in 0usize..3,
        ) {
            let q = [1.0, 2.0, 3.0][qi];
            let n = x.len().min(y.len());
            let xv = vecf(&x[..n]);
            let yv = vecf(&y[..n]);
            let sum = vecf(&(0..n).map(|i| x[i] + y[i]).collect::<Vec<_>>());
            let scaled = vecf(&x[..n].iter().map(|v| c * v).collect::<Vec<_>>());

            let dx = dsq_norm(&xv, s, q).unwrap();
            let dy = dsq_norm(&yv, s, q).unwrap();
            let dsum = dsq_norm(&sum, s, q).unwrap();
            let dscaled = dsq_norm(&scaled, s, q).unwrap();

            // Subadditivity holds only up to a factor: the value of the
            // expression on the convex hull of unit-q-norm s-sparse vectors
            // is at most 2 (first block <= ||.||_q <= 1, remaining blocks
            // sum to at most s^(1/q-1) ||.||_1 <= 1), and it dominates the
            // gauge of that hull, so f(x+y) <= 2 (f(x) + f(y)). The plain
            // triangle inequality genuinely fails; see
            // dsq_triangle_counterexample.
            prop_assert!(dsum <= 2.0 * (dx + dy) * (1.0 + NORM_IDENTITY_RTOL) + 1e-300);
            let want = c.abs() * dx;
            prop_assert!((dscaled - want).abs() <= NORM_IDENTITY_RTOL * want.max(1.0));
        }
    }

    #[test]
    fn dsq_triangle_counterexample() {
        // The sorted-block expression is a quasi-norm, not a norm: with
        // s = 3, q = 2 the sum below rearranges so that mass leaves the
        // first block, and the value exceeds the sum of the parts.
        let x = vecf(&[0.0, -97.0, 61.0, -44.0]);
        let y = vecf(&[-52.0, 0.0, 0.0, -16.0]);
        let sum = vecf(&[-52.0, -97.0, 61.0, -60.0]);
        let dx = dsq_norm(&x, 3, 2.0).unwrap();
        let dy = dsq_norm(&y, 3, 2.0).unwrap();
        let dsum = dsq_norm(&sum, 3, 2.0).unwrap();
        assert!(dsum > dx + dy, "{dsum} vs {}", dx + dy);
        assert!(dsum <= 2.0 * (dx + dy));
    }

    #[test]
    fn cone_examples() {
        let n = 6;
        let e1 = DenseVector::basis(n, 0);
        let cp = ConeParams::new(0.5, 2, 2.0).unwrap();
        let m = cone_membership(&e1, &cp).unwrap();
        assert!(m.member);
        assert!((m.margin - 1.0).abs() < 1e-12);

        // flat vector, rho = 1, s = 1, q = 1: margin = 1/n - (n-1)/n < 0
        let flat = vecf(&vec![1.0 / n as f64; n]);
        let cp = ConeParams::new(1.0, 1, 1.0).unwrap();
        let m = cone_membership(&flat, &cp).unwrap();
        assert!(!m.member);
        let want = 1.0 / n as f64 - (n as f64 - 1.0) / n as f64;
        assert!((m.margin - want).abs() < 1e-12);
    }

    #[test]
    fn cone_zero_vector_rejected() {
        let cp = ConeParams::new(0.5, 1, 2.0).unwrap();
        assert!(cone_membership(&DenseVector::zeros(3), &cp).is_err());
    }

    #[test]
    fn cone_membership_matches_support_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for trial in 0..200 {
            let n = rng.random_range(2..7usize);
            let s = rng.random_range(1..=n.min(3));
            let q = *[1.0, 2.0, 3.0].choose(&mut rng).unwrap();
            let rho = rng.random_range(0.05..1.0);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            if x.iter().all(|v| *v == 0.0) {
                continue;
            }
            let cp = ConeParams::new(rho, s, q).unwrap();
            let got = cone_membership(&vecf(&x), &cp).unwrap().member;

            // any support of size s
            let mut any = false;
            let factor = rho / (s as f64).powf(1.0 - 1.0 / q);
            let combos = combinations(n, s);
            for sup in &combos {
                let head: Vec<f64> = sup.iter().map(|&i| x[i]).collect();
                let tail: f64 = x
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !sup.contains(i))
                    .map(|(_, v)| v.abs())
                    .sum();
                let h = lp_norm_slice(&head, q).unwrap();
                if h >= factor * tail {
                    any = true;
                    break;
                }
            }
            assert_eq!(got, any, "trial {trial}: x={x:?} s={s} q={q} rho={rho}");
        }
    }

    fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, s, cur, out);
                cur.pop();
            }
        }
        rec(0, n, s, &mut cur, &mut out);
        out
    }

    #[test]
    fn cone_inclusion_in_dsq_ball() {
        // members with ||x||_q <= 1 satisfy dsq_norm <= 2 + 1/rho
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.random_range(2..24usize);
            let s = rng.random_range(1..=n.min(6));
            let q = *[1.0, 2.0, 3.0].choose(&mut rng).unwrap();
            let rho = rng.random_range(0.1..1.0);
            let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0) * 0.05).collect();
            for _ in 0..s {
                let i = rng.random_range(0..n);
                x[i] = rng.random_range(-1.0..1.0);
            }
            let xv = vecf(&x);
            let norm_q = lp_norm(&xv, q).unwrap();
            if norm_q == 0.0 {
                continue;
            }
            let unit = vecf(&x.iter().map(|v| v / norm_q).collect::<Vec<_>>());
            let cp = ConeParams::new(rho, s, q).unwrap();
            if !cone_membership(&unit, &cp).unwrap().member {
                continue;
            }
            let d = dsq_norm(&unit, s, q).unwrap();
            assert!(d <= 2.0 + 1.0 / rho + 1e-9, "d = {d}, bound = {}", 2.0 + 1.0 / rho);
            checked += 1;
        }
    }

    #[test]
    fn sparse_norm_comparisons() {
        // ||x||_q <= ||x||_2 for q >= 2 and ||x||_2 <= s^(1/2-1/q) ||x||_q
        // for s-sparse x
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let n = rng.random_range(2..20usize);
            let s = rng.random_range(1..=n);
            let q = *[2.0, 3.0, 4.0, 8.0].choose(&mut rng).unwrap();
            let mut x = vec![0.0; n];
            let mut nz: Vec<usize> = (0..n).collect();
            nz.shuffle(&mut rng);
            for &i in nz.iter().take(s) {
                x[i] = rng.random_range(-4.0..4.0);
            }
            let xv = vecf(&x);
            let lq = lp_norm(&xv, q).unwrap();
            let l2 = lp_norm(&xv, 2.0).unwrap();
            assert!(lq <= l2 * (1.0 + 1e-12));
            assert!(l2 <= (s as f64).powf(0.5 - 1.0 / q) * lq * (1.0 + 1e-12));
        }
    }
}
