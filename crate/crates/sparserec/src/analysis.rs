//! Certifiers and estimators for sparse-recovery conditions: the l1-robust
//! null space property, the cone infimum, restricted-isometry constants, the
//! l1/l1 isometry gap, small-ball probabilities, Rademacher suprema, the
//! width bound, and the composed lower-bound transcript they feed.

use rand::prelude::*;
use rand_distr::StandardNormal;

use crate::ensembles::{fill_row, EnsembleKind, EnsembleSpec, RngStream};
use crate::error::{Error, Result};
use crate::geometry::{cone_membership, lp_norm_slice, top_s_indices, ConeParams};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::prox;
use crate::solvers::{operator_norm, pdhg_loop};
use crate::stats::McEstimate;

/// Cap on `C(n,s) * 2^s` subproblems for exact certification.
pub const NSP_ENUMERATION_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NspVerdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl std::fmt::Display for NspVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NspVerdict::Certified => "certified",
            NspVerdict::Refuted => "refuted",
            NspVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Margin record for one (support, sign pattern) subproblem.
#[derive(Debug, Clone)]
pub struct NspSubproblem {
    pub support_id: usize,
    pub sign_id: usize,
    pub support: Vec<usize>,
    /// Upper bound on the sphere margin for this subproblem (from the dual
    /// certificate), or the witness violation when positive.
    pub margin: f64,
}

/// Outcome of null-space-property certification.
#[derive(Debug, Clone)]
pub struct NspCertificate {
    pub q: f64,
    pub s: usize,
    pub rho: f64,
    pub tau: f64,
    /// Exponent of the right-hand-side norm `||A x||_p`.
    pub norm_p: f64,
    /// Whether the right-hand norm was scaled by `m^(-1/p)`.
    pub scaled_by_m: bool,
    pub verdict: NspVerdict,
    /// Largest margin over all subproblems. Negative margins certify; the
    /// value is exact when above `-rho` and clamped at `-rho` otherwise.
    pub worst_margin: f64,
    pub witness: Option<DenseVector>,
    pub tolerance: f64,
    pub note: Option<String>,
    pub subproblems: Vec<NspSubproblem>,
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u128::from(u64::MAX) {
            return usize::MAX;
        }
    }
    acc.min(usize::MAX as u128) as usize
}

fn for_each_support(n: usize, s: usize, mut f: impl FnMut(usize, &[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..s).collect();
    let mut id = 0;
    loop {
        if f(id, &idx) {
            return;
        }
        id += 1;
        let mut i = s;
        loop {
            if i == 0 {
                return;
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

/// Direct evaluation of the q = 1 null-space-property margin at `x`
/// (normalized to the unit l1 sphere): `||x_S||_1 - rho ||x_Sc||_1 -
/// c ||A x||_p` with `S` the top-`s` support.
fn nsp_margin_at(a: &DenseMatrix, x: &[f64], s: usize, rho: f64, c: f64, p: f64) -> f64 {
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    let xs: Vec<f64> = x.iter().map(|v| v / l1).collect();
    let top = top_s_indices(&xs, s);
    let head: f64 = top.iter().map(|&i| xs[i].abs()).sum();
    let tail: f64 = xs.iter().map(|v| v.abs()).sum::<f64>() - head;
    let ax = {
        let mut out = vec![0.0; a.rows()];
        a.matvec_into(&xs, &mut out);
        out
    };
    head - rho * tail - c * lp_norm_slice(&ax, p).unwrap()
}

/// Certifies or refutes the l1-robust null space property of order `s` with
/// parameters `(rho, tau)` with respect to `m^(-1/p) ||A .||_p` (or the raw
/// norm when `raw_norm` is set).
///
/// Every support `S` of size `s` and sign pattern on `S` yields one concave
/// maximization over the unit l1 ball, solved by the primal-dual engine with
/// a dual bound certifying each subproblem margin. The property holds iff
/// every sphere margin is nonpositive; `certified` requires all margins
/// below `-tol`, `refuted` produces a witness violating the inequality by
/// more than `tol`.
pub fn certify_nsp_q1(
    a: &DenseMatrix,
    s: usize,
    rho: f64,
    tau: f64,
    p: f64,
    tol: f64,
    raw_norm: bool,
) -> Result<NspCertificate> {
    let n = a.cols();
    let m = a.rows();
    if s == 0 || s > n {
        return Err(Error::invalid(format!("certify_nsp_q1: need 1 <= s <= n, got s={s}")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(format!("certify_nsp_q1: need 0 < rho < 1, got {rho}")));
    }
    if !(tau > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid("certify_nsp_q1: tau and tol must be positive"));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("certify_nsp_q1: bad exponent {p}")));
    }

    let mut cert = NspCertificate {
        q: 1.0,
        s,
        rho,
        tau,
        norm_p: p,
        scaled_by_m: !raw_norm,
        verdict: NspVerdict::Inconclusive,
        worst_margin: f64::NEG_INFINITY,
        witness: None,
        tolerance: tol,
        note: None,
        subproblems: Vec::new(),
    };

    let n_subproblems = binomial(n, s).saturating_mul(1 << s);
    if n_subproblems > NSP_ENUMERATION_GUARD {
        cert.note = Some(format!(
            "enumeration guard exceeded: C({n},{s})*2^{s} = {n_subproblems} > {NSP_ENUMERATION_GUARD}"
        ));
        cert.worst_margin = f64::NAN;
        return Ok(cert);
    }

    // weight of the ||A x||_p term
    let c = if raw_norm { tau } else { tau / (m as f64).powf(1.0 / p) };
    let p_dual = if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    };

    // normalize the operator once for the whole enumeration
    let norm_a = operator_norm(a, 200);
    let scale = if norm_a > 0.0 { norm_a * 1.02 } else { 1.0 };
    let a_hat = a.scaled(1.0 / scale);
    let c_hat = c * scale;

    let max_iters = 60_000;
    let check_every = 25;

    let mut worst = f64::NEG_INFINITY;
    let mut all_certified = true;
    let mut best_witness: Option<(f64, Vec<f64>)> = None;

    for_each_support(n, s, |support_id, support| {
        for sign_id in 0..(1usize << s) {
            // b = (1 + rho) * sigma on S; the subproblem margin is
            // max_{||x||_1 <= 1} b'x - c ||A x||_p, minus rho
            let mut b = vec![0.0; n];
            for (j, &col) in support.iter().enumerate() {
                let sgn = if sign_id & (1 << j) == 0 { 1.0 } else { -1.0 };
                b[col] = (1.0 + rho) * sgn;
            }

            let mut upper = f64::INFINITY;
            let mut lower = 0.0f64; // x = 0 is feasible with value 0
            let mut sub_witness: Option<(f64, Vec<f64>)> = None;

            {
                let b_ref = &b;
                let mut shift = vec![0.0; n];
                let prox_primal = |x: &mut [f64], t: f64| {
                    for ((sh, xi), bi) in shift.iter_mut().zip(x.iter()).zip(b_ref.iter()) {
                        *sh = xi + t * bi;
                    }
                    prox::project_ball_at_origin(&mut shift, 1.0, 1.0).unwrap();
                    x.copy_from_slice(&shift);
                };
                let prox_dual = |w: &mut [f64], _sgm: f64| {
                    prox::project_ball_at_origin(w, p_dual, c_hat).unwrap();
                };
                let mut atw = vec![0.0; n];
                let on_iter = |k: usize, x: &[f64], ax: &[f64], w: &[f64]| -> bool {
                    if (k + 1) % check_every != 0 && k + 1 != max_iters {
                        return false;
                    }
                    // dual bound: M <= || b - A^T w ||_inf for feasible w
                    a_hat.transpose_matvec_into(w, &mut atw);
                    let mut m_upper = 0.0f64;
                    for (bi, ai) in b_ref.iter().zip(atw.iter()) {
                        m_upper = m_upper.max((bi - ai).abs());
                    }
                    upper = upper.min(m_upper);
                    if upper - rho <= -tol {
                        return true; // certified subproblem
                    }
                    // primal value: feasible x in the l1 ball
                    let bx: f64 = b_ref.iter().zip(x.iter()).map(|(u, v)| u * v).sum();
                    let m_lower = bx - c_hat * lp_norm_slice(ax, p).unwrap();
                    if m_lower > lower {
                        lower = m_lower;
                        if m_lower - rho > tol {
                            let l1: f64 = x.iter().map(|v| v.abs()).sum();
                            if l1 > 1e-9 {
                                let xs: Vec<f64> = x.iter().map(|v| v / l1).collect();
                                let viol = nsp_margin_at(a, &xs, s, rho, c, p);
                                if viol > tol
                                    && sub_witness.as_ref().map_or(true, |(v, _)| viol > *v)
                                {
                                    sub_witness = Some((viol, xs));
                                }
                            }
                        }
                    }
                    // stop once the margin is pinned to the tolerance
                    upper - lower <= 0.5 * tol
                };
                pdhg_loop(
                    &a_hat,
                    &vec![0.0; n],
                    0.98,
                    0.98,
                    max_iters,
                    prox_primal,
                    prox_dual,
                    on_iter,
                );
            }

            // sound upper bound on this subproblem's sphere margin; the
            // sphere margin also never lies below -rho
            let margin = (upper - rho).max(-rho);
            cert.subproblems.push(NspSubproblem {
                support_id,
                sign_id,
                support: support.to_vec(),
                margin,
            });
            worst = worst.max(margin);
            if margin > -tol {
                all_certified = false;
            }
            if let Some((viol, xs)) = sub_witness {
                if best_witness.as_ref().map_or(true, |(v, _)| viol > *v) {
                    best_witness = Some((viol, xs));
                }
            }
        }
        false
    });

    cert.worst_margin = worst;
    if let Some((_, xs)) = best_witness {
        cert.witness = Some(DenseVector::new(xs).expect("finite witness"));
        cert.verdict = NspVerdict::Refuted;
    } else if all_certified {
        cert.verdict = NspVerdict::Certified;
    } else {
        cert.verdict = NspVerdict::Inconclusive;
    }
    Ok(cert)
}

/// Result of the randomized cone-infimum search: an upper bound on
/// `inf ||A x||_p` over the cone intersected with the unit lq sphere.
#[derive(Debug, Clone)]
pub struct ConeInfimum {
    pub value: f64,
    pub witness: DenseVector,
    pub restarts: usize,
}

/// Start-point policy for [`cone_infimum_estimate_with_mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeStartMode {
    /// Random s-sparse unit vectors only.
    SparseOnly,
    /// Sparse starts plus near-sparse cone members (a superset of the
    /// sparse starts under the same seed).
    FullCone,
}

/// Multi-start projected-subgradient minimization of `||A x||_p` over the
/// nonconvex set (cone members of unit lq norm). The returned value is an
/// upper bound on the infimum; it never exceeds the objective at any of its
/// own start points.
pub fn cone_infimum_estimate(
    a: &DenseMatrix,
    cp: &ConeParams,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<ConeInfimum> {
    cone_infimum_estimate_with_mode(a, cp, p, restarts, seed, ConeStartMode::FullCone)
}

pub fn cone_infimum_estimate_with_mode(
    a: &DenseMatrix,
    cp: &ConeParams,
    p: f64,
    restarts: usize,
    seed: u64,
    mode: ConeStartMode,
) -> Result<ConeInfimum> {
    let n = a.cols();
    if restarts == 0 {
        return Err(Error::invalid("cone_infimum_estimate needs restarts >= 1"));
    }
    if cp.s > n {
        return Err(Error::invalid("cone sparsity exceeds dimension"));
    }

    let normalize_q = |x: &mut [f64]| {
        let nq = lp_norm_slice(x, cp.q).unwrap();
        if nq > 0.0 {
            x.iter_mut().for_each(|v| *v /= nq);
        }
    };
    let in_cone = |x: &[f64]| -> bool {
        if x.iter().all(|v| *v == 0.0) {
            return false;
        }
        let xv = DenseVector::new(x.to_vec()).unwrap();
        cone_membership(&xv, cp).map(|c| c.member).unwrap_or(false)
    };

    let mut best_val = f64::INFINITY;
    let mut best_x = vec![0.0; n];

    let run_from = |x0: Vec<f64>, best_val: &mut f64, best_x: &mut Vec<f64>| {
        let mut ax = vec![0.0; a.rows()];
        let mut grad = vec![0.0; n];
        let mut cand = vec![0.0; n];
        let mut x = x0;
        normalize_q(&mut x);
        if !in_cone(&x) {
            return;
        }
        a.matvec_into(&x, &mut ax);
        let mut fx = lp_norm_slice(&ax, p).unwrap();
        if fx < *best_val {
            *best_val = fx;
            best_x.copy_from_slice(&x);
        }
        let mut eta = 0.2;
        for _ in 0..300 {
            // subgradient of ||A x||_p through the residual
            let norm = lp_norm_slice(&ax, p).unwrap();
            if norm == 0.0 {
                break;
            }
            let mut u = vec![0.0; ax.len()];
            if p.is_infinite() {
                let mut imax = 0;
                for (i, v) in ax.iter().enumerate() {
                    if v.abs() > ax[imax].abs() {
                        imax = i;
                    }
                }
                u[imax] = ax[imax].signum();
            } else if p == 1.0 {
                for (ui, v) in u.iter_mut().zip(ax.iter()) {
                    *ui = v.signum();
                }
            } else {
                for (ui, v) in u.iter_mut().zip(ax.iter()) {
                    *ui = v.signum() * (v.abs() / norm).powf(p - 1.0);
                }
            }
            a.transpose_matvec_into(&u, &mut grad);
            let gnorm = lp_norm_slice(&grad, 2.0).unwrap();
            if gnorm == 0.0 {
                break;
            }
            for ((c, xi), g) in cand.iter_mut().zip(x.iter()).zip(grad.iter()) {
                *c = xi - eta * g / gnorm;
            }
            normalize_q(&mut cand);
            if in_cone(&cand) {
                a.matvec_into(&cand, &mut ax);
                let fc = lp_norm_slice(&ax, p).unwrap();
                if fc < fx {
                    x.copy_from_slice(&cand);
                    fx = fc;
                    if fx < *best_val {
                        *best_val = fx;
                        best_x.copy_from_slice(&x);
                    }
                    eta *= 1.1;
                    continue;
                }
            }
            eta *= 0.5;
            if eta < 1e-8 {
                break;
            }
            a.matvec_into(&x, &mut ax);
        }
    };

    for r in 0..restarts {
        // sparse start: substream 2r
        let mut st = RngStream::with_stream(seed, 2 * r as u64);
        let mut x0 = vec![0.0; n];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(st.rng());
        for &i in idx.iter().take(cp.s) {
            x0[i] = st.rng().sample::<f64, _>(StandardNormal);
        }
        if x0.iter().all(|v| *v == 0.0) {
            x0[idx[0]] = 1.0;
        }
        run_from(x0, &mut best_val, &mut best_x);

        if mode == ConeStartMode::FullCone {
            // near-sparse start: substream 2r + 1, tail shrunk until the
            // point is a cone member
            let mut st = RngStream::with_stream(seed, 2 * r as u64 + 1);
            let mut sparse = vec![0.0; n];
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(st.rng());
            for &i in idx.iter().take(cp.s) {
                sparse[i] = st.rng().sample::<f64, _>(StandardNormal);
            }
            if sparse.iter().all(|v| *v == 0.0) {
                sparse[idx[0]] = 1.0;
            }
            let tail: Vec<f64> =
                (0..n).map(|_| st.rng().sample::<f64, _>(StandardNormal)).collect();
            let snorm = lp_norm_slice(&sparse, cp.q).unwrap();
            let tnorm = lp_norm_slice(&tail, cp.q).unwrap();
            let mut scale = 0.5 * snorm / tnorm.max(1e-300);
            for _ in 0..40 {
                let mut x0: Vec<f64> = sparse
                    .iter()
                    .zip(tail.iter())
                    .map(|(s, t)| s + scale * t)
                    .collect();
                normalize_q(&mut x0);
                if in_cone(&x0) {
                    run_from(x0, &mut best_val, &mut best_x);
                    break;
                }
                scale *= 0.5;
            }
        }
    }

    Ok(ConeInfimum {
        value: best_val,
        witness: DenseVector::new(best_x)?,
        restarts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RipMethod {
    MonteCarlo,
    LocalSearch,
}

/// Inner estimates of the restricted-isometry constants: extremes of the
/// observed ratio `||A x||_p / ||x||_q` over s-sparse probes.
#[derive(Debug, Clone)]
pub struct RipEstimate {
    pub p: f64,
    pub q: f64,
    pub s: usize,
    /// Smallest ratio found: an upper bound on the true lower constant c.
    pub c_lower_est: f64,
    /// Largest ratio found: a lower bound on the true upper constant C.
    pub c_upper_est: f64,
    pub samples: usize,
    pub method: RipMethod,
}

/// Samples random s-sparse unit-lq vectors, all signed basis vectors, and
/// spread vectors, then refines both extremes by sparse local search.
pub fn rip_pq_estimate(
    a: &DenseMatrix,
    s: usize,
    p: f64,
    q: f64,
    samples: usize,
    seed: u64,
) -> Result<RipEstimate> {
    let n = a.cols();
    if s == 0 || s > n {
        return Err(Error::invalid(format!("rip_pq_estimate: need 1 <= s <= n, got {s}")));
    }
    if samples == 0 {
        return Err(Error::invalid("rip_pq_estimate needs samples >= 1"));
    }

    let mut ax = vec![0.0; a.rows()];
    let mut lo = (f64::INFINITY, vec![0.0; n]);
    let mut hi = (f64::NEG_INFINITY, vec![0.0; n]);

    macro_rules! consider {
        ($x:expr) => {{
            let x: &[f64] = $x;
            let nq = lp_norm_slice(x, q).unwrap();
            a.matvec_into(x, &mut ax);
            let r = lp_norm_slice(&ax, p).unwrap() / nq;
            if r < lo.0 {
                lo.0 = r;
                lo.1.copy_from_slice(x);
            }
            if r > hi.0 {
                hi.0 = r;
                hi.1.copy_from_slice(x);
            }
            r
        }};
    }

    // signed basis vectors
    for i in 0..n {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        consider!(&x);
        x[i] = -1.0;
        consider!(&x);
    }
    // spread vectors on the leading support and random supports
    let mut st = RngStream::with_stream(seed, 0);
    let spread = (s as f64).powf(-1.0 / q);
    for k in 0..8 {
        let mut x = vec![0.0; n];
        if k == 0 {
            for v in x.iter_mut().take(s) {
                *v = spread;
            }
        } else {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(st.rng());
            for &i in idx.iter().take(s) {
                x[i] = spread;
            }
        }
        consider!(&x);
    }
    // random s-sparse Gaussian probes
    for _ in 0..samples {
        let mut x = vec![0.0; n];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(st.rng());
        for &i in idx.iter().take(s) {
            x[i] = st.rng().sample::<f64, _>(StandardNormal);
        }
        if x.iter().all(|v| *v == 0.0) {
            x[idx[0]] = 1.0;
        }
        consider!(&x);
    }

    // local refinement on both extremes
    let mut method = RipMethod::MonteCarlo;
    for minimize in [true, false] {
        let mut x = if minimize { lo.1.clone() } else { hi.1.clone() };
        let mut fx = if minimize { lo.0 } else { hi.0 };
        let mut eta = 0.3;
        for _ in 0..200 {
            let support: Vec<usize> =
                x.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i).collect();
            if support.is_empty() {
                break;
            }
            let mut cand = x.clone();
            let j = support[st.rng().random_range(0..support.len())];
            cand[j] += eta * st.rng().sample::<f64, _>(StandardNormal);
            if cand.iter().filter(|v| **v != 0.0).count() > s || cand.iter().all(|v| *v == 0.0) {
                eta *= 0.8;
                continue;
            }
            let r = consider!(&cand);
            let improved = if minimize { r < fx } else { r > fx };
            if improved {
                x = cand;
                fx = r;
                method = RipMethod::LocalSearch;
                eta *= 1.05;
            } else {
                eta *= 0.8;
                if eta < 1e-6 {
                    break;
                }
            }
        }
    }

    Ok(RipEstimate {
        p,
        q,
        s,
        c_lower_est: lo.0,
        c_upper_est: hi.0,
        samples,
        method,
    })
}

/// Monte Carlo mean of `||A e_1||_1 / ||A x~||_1` over standard Gaussian
/// draws, where `x~` spreads unit l1 mass over `s` coordinates. Both have
/// unit l1 norm, so a mean ratio near `sqrt(s)` exhibits the failure of an
/// l1/l1 isometry at a measurement count where recovery succeeds.
pub fn rip11_gap_demo(m: usize, s: usize, trials: usize, seed: u64) -> Result<McEstimate> {
    if m == 0 || s == 0 || trials == 0 {
        return Err(Error::invalid("rip11_gap_demo needs m, s, trials >= 1"));
    }
    let mut st = RngStream::new(seed);
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        // only the first s columns matter; sample an m x s block
        let mut num = 0.0;
        let mut den = 0.0;
        for _ in 0..m {
            let row: Vec<f64> =
                (0..s).map(|_| st.rng().sample::<f64, _>(StandardNormal)).collect();
            num += row[0].abs();
            den += (row.iter().sum::<f64>() / s as f64).abs();
        }
        ratios.push(num / den);
    }
    Ok(McEstimate::from_values(&ratios))
}

/// Empirical frequency of `|<X, x>| >= u` over fresh row draws, with a 95%
/// binomial half-width. `x` is normalized to the unit l2 sphere internally.
pub fn small_ball_estimate(
    spec: &EnsembleSpec,
    x: &DenseVector,
    u: f64,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    spec.validate()?;
    if x.dim() != spec.n {
        return Err(Error::dims(format!(
            "small_ball_estimate: direction has dim {}, spec.n = {}",
            x.dim(),
            spec.n
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("small_ball_estimate needs trials >= 1"));
    }
    let l2 = lp_norm_slice(x.as_slice(), 2.0)?;
    if l2 == 0.0 {
        return Err(Error::invalid("small_ball_estimate: zero direction"));
    }
    let xs: Vec<f64> = x.iter().map(|v| v / l2).collect();
    let mut st = RngStream::new(seed);
    let mut row = vec![0.0; spec.n];
    let mut hits = 0;
    for _ in 0..trials {
        fill_row(spec, st.rng(), &mut row);
        let dot: f64 = row.iter().zip(xs.iter()).map(|(a, b)| a * b).sum();
        if dot.abs() >= u {
            hits += 1;
        }
    }
    Ok(McEstimate::from_frequency(hits, trials))
}

/// l2 norm of the top-`s` entries of `|v|`.
pub fn top_s_l2(v: &[f64], s: usize) -> f64 {
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    mags.truncate(s);
    lp_norm_slice(&mags, 2.0).unwrap()
}

/// Monte Carlo mean of the top-`s` l2 statistic of the symmetrized row sum
/// `V = m^(-1/2) sum_i eps_i X_i`, drawing fresh rows and signs per trial.
/// The inner supremum over s-sparse unit-l2 vectors is this closed form.
pub fn rademacher_sup_estimate(
    spec: &EnsembleSpec,
    m: usize,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    spec.validate()?;
    if s > spec.n || s == 0 {
        return Err(Error::invalid("rademacher_sup_estimate: need 1 <= s <= n"));
    }
    if m == 0 || trials == 0 {
        return Err(Error::invalid("rademacher_sup_estimate needs m, trials >= 1"));
    }
    let mut st = RngStream::new(seed);
    let mut row = vec![0.0; spec.n];
    let mut values = Vec::with_capacity(trials);
    let scale = 1.0 / (m as f64).sqrt();
    for _ in 0..trials {
        let mut v = vec![0.0; spec.n];
        for _ in 0..m {
            fill_row(spec, st.rng(), &mut row);
            let sgn: f64 = if st.rng().random::<bool>() { 1.0 } else { -1.0 };
            for (vi, ri) in v.iter_mut().zip(row.iter()) {
                *vi += sgn * ri;
            }
        }
        v.iter_mut().for_each(|x| *x *= scale);
        values.push(top_s_l2(&v, s));
    }
    Ok(McEstimate::from_values(&values))
}

/// `sqrt(2 s log(e n / s)) + sqrt(s)`: upper bound on the Gaussian width of
/// the s-sparse unit-l2 vectors.
pub fn gaussian_width_bound(n: usize, s: usize) -> Result<f64> {
    if s == 0 || s > n {
        return Err(Error::invalid(format!("gaussian_width_bound: need 1 <= s <= n, got {s}")));
    }
    let (nf, sf) = (n as f64, s as f64);
    Ok((2.0 * sf * (std::f64::consts::E * nf / sf).ln()).sqrt() + sf.sqrt())
}

/// Value of the small-ball lower bound together with its failure
/// probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallBallBound {
    /// `u^p (Q(2u) - 4 R_m / u - t / sqrt(m))`; may be negative (vacuous).
    pub value: f64,
    /// `2 exp(-2 t^2)`.
    pub failure_probability: f64,
}

/// Evaluates the small-ball lower bound on `inf (1/m) sum |f(X_i)|^p`.
pub fn small_ball_lower_bound(u: f64, p: f64, q2u: f64, rm: f64, t: f64, m: usize) -> Result<SmallBallBound> {
    if !(u > 0.0) {
        return Err(Error::invalid("small_ball_lower_bound needs u > 0"));
    }
    if !(p >= 1.0) {
        return Err(Error::invalid("small_ball_lower_bound needs p >= 1"));
    }
    if !(0.0..=1.0).contains(&q2u) {
        return Err(Error::invalid("small_ball_lower_bound needs Q(2u) in [0, 1]"));
    }
    if !(rm >= 0.0) || !(t >= 0.0) || m == 0 {
        return Err(Error::invalid("small_ball_lower_bound needs Rm >= 0, t >= 0, m >= 1"));
    }
    let value = u.powf(p) * (q2u - 4.0 * rm / u - t / (m as f64).sqrt());
    Ok(SmallBallBound { value, failure_probability: 2.0 * (-2.0 * t * t).exp() })
}

/// Half the median of `|N(0,1)|`: the threshold with `P(|g| >= 2u) = 1/2`.
pub const GAUSSIAN_MEDIAN_HALF: f64 = 0.6744897501960817 / 2.0;

/// Executable transcript of the lower-bound argument for Gaussian rows at
/// given `(m, s, n)`.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub n: usize,
    pub s: usize,
    pub q: f64,
    pub rho: f64,
    pub p: f64,
    pub m: usize,
    pub t: f64,
    /// Monte Carlo estimate of the top-s l2 statistic of `V`.
    pub sup_estimate: McEstimate,
    /// `s^(1/2 - 1/q) (2 + 1/rho)`.
    pub cone_factor: f64,
    /// Estimated Rademacher complexity of the cone class:
    /// `cone_factor * sup / sqrt(m)`.
    pub rademacher_bound: f64,
    pub u_star: f64,
    /// Monte Carlo small-ball frequency at `2 u_star` (about 1/2).
    pub small_ball: McEstimate,
    pub bound: SmallBallBound,
    pub positive: bool,
    /// `4^(1/p) / u_star` when the bound is positive: the cone infimum then
    /// exceeds `m^(1/p) / tau` with the stated probability.
    pub tau: Option<f64>,
    /// Smallest m making the bound positive, holding the estimates fixed.
    pub min_positive_m: f64,
}

/// Composes the Rademacher-supremum estimate, the cone factors, the
/// small-ball estimate at the Gaussian median device, and the lower bound.
pub fn lower_bound_pipeline(
    n: usize,
    s: usize,
    q: f64,
    rho: f64,
    p: f64,
    m: usize,
    trials: usize,
    t: f64,
    seed: u64,
) -> Result<PipelineReport> {
    if s == 0 || s > n || m == 0 {
        return Err(Error::invalid("lower_bound_pipeline: bad dimensions"));
    }
    if !(q >= 1.0) || !(rho > 0.0 && rho < 1.0) || !(p >= 1.0) || !(t >= 0.0) {
        return Err(Error::invalid("lower_bound_pipeline: bad parameters"));
    }
    let spec = EnsembleSpec::new(EnsembleKind::Gaussian, None, 1, n, seed)?;
    // for Gaussian rows the law of V does not depend on the row count, so
    // the simulation caps it while sqrt(m) uses the requested m
    let m_sim = m.min(256);
    let sup = rademacher_sup_estimate(&spec, m_sim, s, trials, seed)?;
    let cone_factor = (s as f64).powf(0.5 - 1.0 / q) * (2.0 + 1.0 / rho);
    let r_m = cone_factor * sup.value / (m as f64).sqrt();

    let u_star = GAUSSIAN_MEDIAN_HALF;
    let dir = DenseVector::new(vec![1.0 / (n as f64).sqrt(); n])?;
    let sb_spec = EnsembleSpec::new(EnsembleKind::Gaussian, None, 1, n, seed ^ 0x5bd1)?;
    let small_ball = small_ball_estimate(&sb_spec, &dir, 2.0 * u_star, trials, seed ^ 0x5bd1)?;

    let bound = small_ball_lower_bound(u_star, p, small_ball.value, r_m, t, m)?;
    let positive = bound.value > 0.0;

    // paren(m) = q2u - (4 cone_factor sup / u + t) / sqrt(m)
    let numer = 4.0 * cone_factor * sup.value / u_star + t;
    let min_positive_m = if small_ball.value > 0.0 {
        (numer / small_ball.value).powi(2)
    } else {
        f64::INFINITY
    };

    Ok(PipelineReport {
        n,
        s,
        q,
        rho,
        p,
        m,
        t,
        sup_estimate: sup,
        cone_factor,
        rademacher_bound: r_m,
        u_star,
        small_ball,
        bound,
        positive,
        tau: positive.then(|| 4f64.powf(1.0 / p) / u_star),
        min_positive_m,
    })
}
