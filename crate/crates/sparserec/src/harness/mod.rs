//! Reproducible experiment orchestration: signal generation, trial
//! scheduling, parameter sweeps, config parsing, and CSV persistence.
//!
//! Every trial is a pure function of `(config, derived seed)`; trials run in
//! parallel on the ambient rayon pool and results are ordered by trial
//! index, so a config and base seed produce identical records regardless of
//! thread count.

mod config;
mod csv;

pub use config::{parse_config, parse_config_str, write_config, write_config_str};
pub use csv::write_csv;

use rand::prelude::*;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::ensembles::{sample_matrix, splitmix64, EnsembleKind, EnsembleSpec, RngStream};
use crate::error::{Error, Result};
use crate::geometry::{best_s_term_error, lp_norm_slice};
use crate::linalg::DenseVector;
use crate::quantize::{quantize, solve_qcbp};
use crate::solvers::{solve_bpdn, SolveStatus, SolverConfig};
use crate::stats::{ls_slope, median};

/// Success means `err_l2 <= SUCCESS_RTOL * max(1, ||signal||_2)`.
pub const SUCCESS_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// +-1 entries on a random support of size `s`.
    FlatSigns,
    /// Standard normal entries on a random support of size `s`.
    GaussianCoeffs,
    /// Full-support magnitudes `i^(-alpha)` with random signs and positions.
    Compressible,
}

impl SignalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignalKind::FlatSigns => "flat_signs",
            SignalKind::GaussianCoeffs => "gaussian_coeffs",
            SignalKind::Compressible => "compressible",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "flat_signs" => Ok(SignalKind::FlatSigns),
            "gaussian_coeffs" => Ok(SignalKind::GaussianCoeffs),
            "compressible" => Ok(SignalKind::Compressible),
            other => Err(Error::invalid(format!("unknown signal kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalize {
    None,
    UnitL2,
}

impl Normalize {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalize::None => "none",
            Normalize::UnitL2 => "unit_l2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalize::None),
            "unit_l2" => Ok(Normalize::UnitL2),
            other => Err(Error::invalid(format!("unknown normalization `{other}`"))),
        }
    }
}

/// Description of the target signal distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub n: usize,
    pub s: usize,
    pub kind: SignalKind,
    /// Decay exponent for [`SignalKind::Compressible`].
    pub alpha: Option<f64>,
    pub normalize: Normalize,
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.s == 0 || self.s > self.n {
            return Err(Error::invalid(format!(
                "signal needs 1 <= s <= n, got s={} n={}",
                self.s, self.n
            )));
        }
        match (self.kind, self.alpha) {
            (SignalKind::Compressible, Some(a)) if a > 0.0 => {}
            (SignalKind::Compressible, _) => {
                return Err(Error::invalid("compressible signals need alpha > 0"));
            }
            (_, Some(_)) => {
                return Err(Error::invalid("alpha is only meaningful for compressible signals"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Draws one signal realization from the stream.
    pub fn realize(&self, stream: &mut RngStream) -> DenseVector {
        let rng = stream.rng();
        let mut x = vec![0.0; self.n];
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.shuffle(rng);
        match self.kind {
            SignalKind::FlatSigns => {
                for &i in idx.iter().take(self.s) {
                    x[i] = if rng.random::<bool>() { 1.0 } else { -1.0 };
                }
            }
            SignalKind::GaussianCoeffs => {
                for &i in idx.iter().take(self.s) {
                    x[i] = rng.sample::<f64, _>(StandardNormal);
                }
                if x.iter().all(|v| *v == 0.0) {
                    x[idx[0]] = 1.0;
                }
            }
            SignalKind::Compressible => {
                let alpha = self.alpha.expect("validated");
                for (rank, &i) in idx.iter().enumerate() {
                    let mag = ((rank + 1) as f64).powf(-alpha);
                    x[i] = if rng.random::<bool>() { mag } else { -mag };
                }
            }
        }
        if self.normalize == Normalize::UnitL2 {
            let l2 = lp_norm_slice(&x, 2.0).unwrap();
            if l2 > 0.0 {
                x.iter_mut().for_each(|v| *v /= l2);
            }
        }
        DenseVector::new(x).expect("finite signal")
    }
}

/// How the solver's noise budget (and the measurement noise) is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonRule {
    /// Noiseless measurements, solver budget `eps` as given.
    Fixed(f64),
    /// Gaussian direction scaled so `||e||_p = eps` exactly.
    NoiseScaled(f64),
    /// `y = Q_theta(A x)`; quantization-consistent solve with `eps = theta/2`.
    Quantizer(f64),
}

/// Full description of one experiment sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: EnsembleKind,
    pub gamma: Option<f64>,
    pub signal: SignalSpec,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub epsilon_rule: EpsilonRule,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub solver: SolverConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.signal.validate()?;
        EnsembleSpec::new(self.kind, self.gamma, 1, self.signal.n, 0)?;
        if self.m_values.is_empty() {
            return Err(Error::invalid("m_values must be nonempty"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if self.q < 1.0 || self.r < 1.0 {
            return Err(Error::invalid("q and r must be >= 1"));
        }
        match self.epsilon_rule {
            EpsilonRule::Fixed(e) | EpsilonRule::NoiseScaled(e) if e < 0.0 => {
                return Err(Error::invalid("epsilon must be >= 0"));
            }
            EpsilonRule::Quantizer(t) if t <= 0.0 => {
                return Err(Error::invalid("theta must be > 0"));
            }
            _ => {}
        }
        Ok(())
    }
}

/// One experiment trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_id: usize,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub seed: u64,
    pub err_l1: f64,
    pub err_l2: f64,
    pub err_lq: f64,
    pub sigma_s_l1: f64,
    pub eps_used: f64,
    pub objective: f64,
    pub status: SolveStatus,
    pub consistent: Option<bool>,
    pub wall_time_ms: f64,
}

impl TrialRecord {
    /// Recovery success at the standard threshold; `signal_l2` is the l2
    /// norm of the ground truth.
    pub fn success(&self, signal_l2: f64) -> bool {
        self.err_l2 <= SUCCESS_RTOL * signal_l2.max(1.0)
    }
}

/// Derives the 64-bit seed of one trial; injective over `(cell, trial)`
/// pairs for trial counts below 2^32.
pub fn derive_trial_seed(base_seed: u64, cell: u64, trial: u64) -> u64 {
    base_seed ^ splitmix64((cell << 32) | (trial & 0xFFFF_FFFF))
}

struct TrialOutput {
    record: TrialRecord,
    signal_l2: f64,
}

fn run_trial(cfg: &ExperimentConfig, m: usize, cell: u64, trial: usize) -> Result<TrialOutput> {
    let t0 = std::time::Instant::now();
    let n = cfg.signal.n;
    let trial_seed = derive_trial_seed(cfg.base_seed, cell, trial as u64);
    let matrix_seed = splitmix64(trial_seed ^ 1);
    let spec = EnsembleSpec::new(cfg.kind, cfg.gamma, m, n, matrix_seed)?;
    let a = sample_matrix(&spec)?;

    let mut signal_stream = RngStream::with_stream(trial_seed, 2);
    let x_hat = cfg.signal.realize(&mut signal_stream);
    let ax = a.matvec(&x_hat)?;

    let (result, eps_used, consistent) = match cfg.epsilon_rule {
        EpsilonRule::Fixed(eps) => {
            let r = solve_bpdn(&a, &ax, cfg.p, eps, &cfg.solver)?;
            (r, eps, None)
        }
        EpsilonRule::NoiseScaled(eps) => {
            let mut noise_stream = RngStream::with_stream(trial_seed, 3);
            let mut e: Vec<f64> =
                (0..m).map(|_| noise_stream.rng().sample::<f64, _>(StandardNormal)).collect();
            if eps > 0.0 {
                let en = lp_norm_slice(&e, cfg.p)?;
                e.iter_mut().for_each(|v| *v *= eps / en);
            } else {
                e.fill(0.0);
            }
            let y = DenseVector::new(
                ax.iter().zip(e.iter()).map(|(a, b)| a + b).collect::<Vec<_>>(),
            )?;
            let r = solve_bpdn(&a, &y, cfg.p, eps, &cfg.solver)?;
            (r, eps, None)
        }
        EpsilonRule::Quantizer(theta) => {
            let y = quantize(&ax, theta)?;
            let r = solve_qcbp(&a, &y, theta, &cfg.solver)?;
            (r.solve, theta / 2.0, Some(r.consistent))
        }
    };

    let diff: Vec<f64> = x_hat
        .iter()
        .zip(result.estimate.iter())
        .map(|(u, v)| u - v)
        .collect();
    let record = TrialRecord {
        trial_id: trial,
        m,
        n,
        s: cfg.signal.s,
        seed: trial_seed,
        err_l1: lp_norm_slice(&diff, 1.0)?,
        err_l2: lp_norm_slice(&diff, 2.0)?,
        err_lq: lp_norm_slice(&diff, cfg.q)?,
        sigma_s_l1: best_s_term_error(&x_hat, cfg.signal.s)?,
        eps_used,
        objective: result.objective,
        status: result.status,
        consistent,
        wall_time_ms: t0.elapsed().as_secs_f64() * 1e3,
    };
    Ok(TrialOutput { record, signal_l2: lp_norm_slice(x_hat.as_slice(), 2.0)? })
}

fn run_cells(cfg: &ExperimentConfig, cells: &[(usize, usize)]) -> Result<Vec<TrialOutput>> {
    // cells are (cell_index << trials) jobs; solver failures are recorded
    // per trial and never abort the sweep, but setup errors do
    let jobs: Vec<(usize, usize, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, &(m, _))| (0..cfg.trials).map(move |t| (ci, m, t)))
        .collect();
    jobs.par_iter()
        .map(|&(ci, m, t)| run_trial(cfg, m, ci as u64, t))
        .collect()
}

/// Runs the full sweep: every `m` in `m_values` times `trials` seeded
/// trials. Deterministic given the config; trial order in the output is
/// `(m index, trial index)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg.m_values.iter().map(|&m| (m, cfg.signal.s)).collect();
    Ok(run_cells(cfg, &cells)?.into_iter().map(|o| o.record).collect())
}

/// One cell of a phase grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub m: usize,
    pub s: usize,
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
}

/// Success-rate table over an `(m, s)` grid; the signal spec's `s` is
/// overridden per cell.
pub fn phase_grid(
    cfg: &ExperimentConfig,
    m_list: &[usize],
    s_list: &[usize],
) -> Result<Vec<PhaseCell>> {
    if m_list.is_empty() || s_list.is_empty() {
        return Err(Error::invalid("phase_grid needs nonempty m and s lists"));
    }
    let mut cells = Vec::new();
    for &s in s_list {
        for &m in m_list {
            cells.push((m, s));
        }
    }
    let mut out = Vec::new();
    for (ci, &(m, s)) in cells.iter().enumerate() {
        let mut cell_cfg = cfg.clone();
        cell_cfg.signal.s = s;
        cell_cfg.validate()?;
        // distinct base seeds per cell keep trial seeds injective over the
        // whole grid
        cell_cfg.base_seed = derive_trial_seed(cfg.base_seed, 0xFACE, ci as u64);
        let outputs = run_cells(&cell_cfg, &[(m, s)])?;
        let successes: usize =
            outputs.iter().map(|o| usize::from(o.record.success(o.signal_l2))).sum();
        let trials = outputs.len();
        out.push(PhaseCell {
            m,
            s,
            successes,
            trials,
            rate: successes as f64 / trials as f64,
        });
    }
    Ok(out)
}

/// Slope report of a noise-scaling sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    /// Least-squares slope of `log median err_l2` against `log m`.
    pub slope: f64,
    /// 95% half-width from a trial-level bootstrap.
    pub half_width: f64,
    /// Set when `eps = 0`: errors sit at the solver-tolerance floor and the
    /// slope is meaningless.
    pub skipped: bool,
    pub medians: Vec<(usize, f64)>,
}

/// Median reconstruction error versus `m` on a log-log grid, with a
/// bootstrap confidence band. Requires the noise-scaled rule and `p` in
/// `{1, 2}`.
pub fn noise_scaling_sweep(cfg: &ExperimentConfig) -> Result<SlopeReport> {
    let eps = match cfg.epsilon_rule {
        EpsilonRule::NoiseScaled(e) => e,
        _ => {
            return Err(Error::invalid(
                "noise_scaling_sweep requires the noise_scaled epsilon rule",
            ))
        }
    };
    if cfg.p != 1.0 && cfg.p != 2.0 {
        return Err(Error::invalid("noise_scaling_sweep requires p in {1, 2}"));
    }
    if cfg.m_values.len() < 2 {
        return Err(Error::invalid("noise_scaling_sweep needs at least two m values"));
    }
    let records = run_experiment(cfg)?;

    let mut medians = Vec::new();
    let mut by_m: Vec<Vec<f64>> = vec![Vec::new(); cfg.m_values.len()];
    for (i, &m) in cfg.m_values.iter().enumerate() {
        for r in records.iter().filter(|r| r.m == m) {
            by_m[i].push(r.err_l2);
        }
        medians.push((m, median(&by_m[i])));
    }

    if eps == 0.0 {
        return Ok(SlopeReport { slope: 0.0, half_width: 0.0, skipped: true, medians });
    }

    let log_m: Vec<f64> = cfg.m_values.iter().map(|&m| (m as f64).ln()).collect();
    let log_err: Vec<f64> = medians.iter().map(|(_, e)| e.max(1e-300).ln()).collect();
    let (slope, _) = ls_slope(&log_m, &log_err);

    // trial-level bootstrap of the medians
    let boots = 200;
    let mut slopes = Vec::with_capacity(boots);
    let mut st = RngStream::with_stream(cfg.base_seed ^ 0xB007, 0);
    for _ in 0..boots {
        let mut log_err_b = Vec::with_capacity(by_m.len());
        for errs in &by_m {
            let resampled: Vec<f64> = (0..errs.len())
                .map(|_| errs[st.rng().random_range(0..errs.len())])
                .collect();
            log_err_b.push(median(&resampled).max(1e-300).ln());
        }
        let (sb, _) = ls_slope(&log_m, &log_err_b);
        slopes.push(sb);
    }
    let hw = 1.96 * crate::stats::sample_std(&slopes);
    Ok(SlopeReport { slope, half_width: hw, skipped: false, medians })
}
