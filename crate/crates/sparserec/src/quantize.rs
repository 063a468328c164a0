//! Uniform scalar quantization of measurements, quantization-consistent
//! basis pursuit, consistency checking, and the high-resolution noise
//! budget.
//!
//! The quantizer maps each coordinate to the center of its bin:
//! `Q(z)_i = theta * floor(z_i / theta) + theta / 2`, so `z = k theta` lands
//! in the bin `[k theta, (k+1) theta)`. Consistency of a reconstruction is
//! membership of the residual in the half-open box `[-theta/2, theta/2)^m`.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::solvers::{solve_bpdn, SolveResult, SolverConfig};

/// Bin width of the uniform quantizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerConfig {
    pub theta: f64,
}

impl QuantizerConfig {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::invalid(format!("quantizer bin width must be > 0, got {theta}")));
        }
        Ok(QuantizerConfig { theta })
    }
}

/// Largest bin index magnitude exactly representable in an f64.
const MAX_BIN_INDEX: f64 = 9.007_199_254_740_992e15; // 2^53

/// Entrywise `theta * floor(z_i / theta) + theta / 2`.
pub fn quantize(z: &DenseVector, theta: f64) -> Result<DenseVector> {
    QuantizerConfig::new(theta)?;
    let mut out = Vec::with_capacity(z.dim());
    for (i, v) in z.iter().enumerate() {
        let scaled = v / theta;
        if scaled.abs() >= MAX_BIN_INDEX / 2.0 {
            return Err(Error::invalid(format!(
                "entry {i}: |z|/theta = {} exceeds the exactly representable bin range",
                scaled.abs()
            )));
        }
        out.push(theta * scaled.floor() + theta / 2.0);
    }
    DenseVector::new(out)
}

/// Outcome of a consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyCheck {
    /// Residual `A x - y` lies in the half-open box `[-theta/2, theta/2)^m`.
    pub consistent: bool,
    /// Set when `y` is not on the quantizer lattice `theta Z + theta/2`;
    /// the check is still performed.
    pub off_lattice_warning: bool,
}

/// Checks quantization consistency of `x` against lattice-valued
/// measurements `y`: left-closed, right-open per coordinate.
pub fn is_consistent(
    a: &DenseMatrix,
    x: &DenseVector,
    y: &DenseVector,
    theta: f64,
) -> Result<ConsistencyCheck> {
    QuantizerConfig::new(theta)?;
    if y.dim() != a.rows() {
        return Err(Error::dims("is_consistent: y does not match the matrix rows"));
    }
    let ax = a.matvec(x)?;
    let mut off_lattice = false;
    for v in y.iter() {
        let idx = (v - theta / 2.0) / theta;
        if (idx - idx.round()).abs() > 1e-9 * idx.abs().max(1.0) {
            off_lattice = true;
            break;
        }
    }
    let half = theta / 2.0;
    let consistent = ax
        .iter()
        .zip(y.iter())
        .all(|(axi, yi)| {
            let r = axi - yi;
            (-half..half).contains(&r)
        });
    Ok(ConsistencyCheck { consistent, off_lattice_warning: off_lattice })
}

/// Result of quantization-consistent basis pursuit.
#[derive(Debug, Clone)]
pub struct QcbpResult {
    pub solve: SolveResult,
    /// Whether the returned point is quantization consistent (half-open
    /// box). The solver optimizes over the closed box, so a minimizer on
    /// the upper face is reported inconsistent rather than perturbed.
    pub consistent: bool,
    pub off_lattice_warning: bool,
}

/// Solves the closed-box relaxation (`||A z - y||_inf <= theta/2`) and
/// reports half-open consistency of the result.
pub fn solve_qcbp(
    a: &DenseMatrix,
    y: &DenseVector,
    theta: f64,
    cfg: &SolverConfig,
) -> Result<QcbpResult> {
    QuantizerConfig::new(theta)?;
    let solve = solve_bpdn(a, y, f64::INFINITY, theta / 2.0, cfg)?;
    let check = is_consistent(a, &solve.estimate, y, theta)?;
    Ok(QcbpResult {
        solve,
        consistent: check.consistent,
        off_lattice_warning: check.off_lattice_warning,
    })
}

/// The high-resolution noise budget together with its confidence level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighResBound {
    /// `theta / (2 (p+1)^(1/p)) * (m + t (p+1) sqrt(m))^(1/p)`.
    pub epsilon: f64,
    /// `1 - exp(-2 t^2)`.
    pub probability: f64,
}

/// Budget for `||e||_p` when the quantization errors are i.i.d. uniform on
/// `[-theta/2, theta/2]`. Finite `p` only.
pub fn high_res_noise_bound(theta: f64, p: f64, m: usize, t: f64) -> Result<HighResBound> {
    QuantizerConfig::new(theta)?;
    if p.is_infinite() {
        return Err(Error::invalid("high_res_noise_bound is defined for finite p only"));
    }
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("high_res_noise_bound needs p >= 1, got {p}")));
    }
    if m == 0 {
        return Err(Error::invalid("high_res_noise_bound needs m >= 1"));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid("high_res_noise_bound needs t >= 0"));
    }
    let mf = m as f64;
    let epsilon =
        theta / (2.0 * (p + 1.0).powf(1.0 / p)) * (mf + t * (p + 1.0) * mf.sqrt()).powf(1.0 / p);
    Ok(HighResBound { epsilon, probability: 1.0 - (-2.0 * t * t).exp() })
}
