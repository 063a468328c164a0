//! Shared test oracles, independent of the library's solution paths:
//! a dense two-phase simplex for desk-scale LP reformulations and an
//! adaptive Simpson quadrature for moment integrals.

#![allow(dead_code)]

use sparserec::{DenseMatrix, DenseVector};

const EPS: f64 = 1e-9;

#[derive(Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { objective: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// Minimizes `c'x` subject to `A x = b`, `x >= 0` by the two-phase simplex
/// method with Bland's rule (no cycling).
pub fn simplex_solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), m);

    // tableau with artificial variables: columns [x (n) | artificial (m) | rhs]
    let cols = n + m + 1;
    let mut t = vec![vec![0.0; cols]; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][cols - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize the sum of artificials; reduced costs start from
    // cost 1 on each artificial column and are reduced against the
    // artificial basis
    let mut obj1 = vec![0.0; cols];
    for j in n..n + m {
        obj1[j] = 1.0;
    }
    for i in 0..m {
        for (j, v) in obj1.iter_mut().enumerate() {
            *v -= t[i][j];
        }
    }
    if !run_simplex(&mut t, &mut basis, &mut obj1, n + m) {
        return LpOutcome::Unbounded; // cannot happen in phase 1
    }
    let phase1 = -obj1[cols - 1];
    if phase1 > 1e-7 {
        return LpOutcome::Infeasible;
    }
    // drive out any artificial still in the basis (degenerate rows)
    for i in 0..m {
        if basis[i] >= n {
            let pivot_col = (0..n).find(|&j| t[i][j].abs() > EPS);
            if let Some(j) = pivot_col {
                pivot(&mut t, &mut basis, i, j, &mut obj1);
            }
        }
    }

    // phase 2: the real objective, reduced against the current basis
    let mut obj2 = vec![0.0; cols];
    obj2[..n].copy_from_slice(c);
    for i in 0..m {
        let coef = obj2[basis[i]];
        if coef != 0.0 {
            for j in 0..cols {
                obj2[j] -= coef * t[i][j];
            }
        }
    }
    if !run_simplex(&mut t, &mut basis, &mut obj2, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][cols - 1];
        }
    }
    let objective: f64 = c.iter().zip(x.iter()).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { objective, x }
}

/// Bland's rule iteration; `max_col` restricts the entering candidates
/// (phase 2 never re-enters artificials). Returns false on unboundedness.
fn run_simplex(t: &mut [Vec<f64>], basis: &mut [usize], obj: &mut [f64], max_col: usize) -> bool {
    let rows = t.len();
    let cols = t[0].len();
    for _ in 0..100_000 {
        // entering: smallest index with negative reduced cost
        let Some(enter) = (0..max_col).find(|&j| obj[j] < -EPS) else {
            return true;
        };
        // leaving: min ratio, ties by smallest basis index
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            if t[i][enter] > EPS {
                let ratio = t[i][cols - 1] / t[i][enter];
                let better = ratio < best - EPS
                    || (ratio < best + EPS && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(row) = leave else {
            return false;
        };
        pivot(t, basis, row, enter, obj);
    }
    panic!("simplex failed to terminate");
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize, obj: &mut [f64]) {
    let cols = t[0].len();
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..cols {
                t[i][j] -= f * t[row][j];
            }
        }
    }
    let f = obj[col];
    if f != 0.0 {
        for j in 0..cols {
            obj[j] -= f * t[row][j];
        }
    }
    basis[row] = col;
}

/// Exact LP value of `min ||z||_1 s.t. ||A z - y||_inf <= eps` via the
/// standard split reformulation.
pub fn lp_bpdn_inf(a: &DenseMatrix, y: &DenseVector, eps: f64) -> LpOutcome {
    let (m, n) = (a.rows(), a.cols());
    // variables: z+ (n), z- (n), s1 (m), s2 (m)
    let nv = 2 * n + 2 * m;
    let mut rows = Vec::with_capacity(2 * m);
    let mut rhs = Vec::with_capacity(2 * m);
    for i in 0..m {
        let mut r1 = vec![0.0; nv];
        let mut r2 = vec![0.0; nv];
        for j in 0..n {
            r1[j] = a.get(i, j);
            r1[n + j] = -a.get(i, j);
            r2[j] = -a.get(i, j);
            r2[n + j] = a.get(i, j);
        }
        r1[2 * n + i] = 1.0;
        r2[2 * n + m + i] = 1.0;
        rows.push(r1);
        rhs.push(y[i] + eps);
        rows.push(r2);
        rhs.push(eps - y[i]);
    }
    let mut c = vec![0.0; nv];
    for v in c.iter_mut().take(2 * n) {
        *v = 1.0;
    }
    simplex_solve(&rows, &rhs, &c)
}

/// Exact LP value of `min ||z||_1 s.t. ||A z - y||_1 <= eps`.
pub fn lp_bpdn_one(a: &DenseMatrix, y: &DenseVector, eps: f64) -> LpOutcome {
    let (m, n) = (a.rows(), a.cols());
    // variables: z+ (n), z- (n), r+ (m), r- (m), slack (1)
    let nv = 2 * n + 2 * m + 1;
    let mut rows = Vec::with_capacity(m + 1);
    let mut rhs = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut r = vec![0.0; nv];
        for j in 0..n {
            r[j] = a.get(i, j);
            r[n + j] = -a.get(i, j);
        }
        r[2 * n + i] = -1.0;
        r[2 * n + m + i] = 1.0;
        rows.push(r);
        rhs.push(y[i]);
    }
    let mut budget = vec![0.0; nv];
    for j in 0..2 * m {
        budget[2 * n + j] = 1.0;
    }
    budget[nv - 1] = 1.0;
    rows.push(budget);
    rhs.push(eps);
    let mut c = vec![0.0; nv];
    for v in c.iter_mut().take(2 * n) {
        *v = 1.0;
    }
    simplex_solve(&rows, &rhs, &c)
}

/// Adaptive Simpson quadrature on `[lo, hi]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    fn simpson(_f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(f, a, m, fa, flm, fm);
        let right = simpson(f, m, b, fm, frm, fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(lo);
    let fb = f(hi);
    let fm = f(0.5 * (lo + hi));
    let whole = simpson(f, lo, hi, fa, fm, fb);
    rec(f, lo, hi, fa, fm, fb, whole, tol, 40)
}

/// `E |xi|^p` for the heavy-tailed density by numerical quadrature: the
/// bulk on `[0, 1]` directly, the tail via `x = 1/t` and a power
/// substitution that smooths the endpoint.
pub fn heavy_tail_moment_quadrature(gamma: f64, p: f64) -> f64 {
    assert!(p < gamma - 1.0, "moment must exist");
    let norm = (gamma - 1.0) / (2.0 * gamma);
    // bulk: 2 int_0^1 x^p * norm dx
    let bulk = 2.0 * norm * adaptive_simpson(&|x: f64| x.powf(p), 0.0, 1.0, 1e-12);
    // tail: 2 int_1^inf x^(p-gamma) norm dx = 2 norm int_0^1 t^(gamma-p-2) dt,
    // then t = u^4 to tame the endpoint
    let a = gamma - p - 2.0;
    let tail_integrand = move |u: f64| 4.0 * u.powf(4.0 * a + 3.0);
    let tail = 2.0 * norm * adaptive_simpson(&tail_integrand, 0.0, 1.0, 1e-12);
    bulk + tail
}

/// Density of the heavy-tailed entry distribution.
pub fn heavy_tail_density(gamma: f64, x: f64) -> f64 {
    (gamma - 1.0) / (2.0 * gamma) * x.abs().powf(-gamma).min(1.0)
}

pub fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}
