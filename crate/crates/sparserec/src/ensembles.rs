//! Seeded samplers for random measurement-matrix ensembles and the
//! closed-form moment formulas used to validate them.
//!
//! All randomness flows through ChaCha8 streams keyed by 64-bit seeds, so a
//! spec with a fixed seed produces the same matrix bit-for-bit on every
//! platform, and independent streams can be derived per trial.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Identifier of the generator backing [`RngStream`].
pub const RNG_ALGORITHM: &str = "chacha8 (64-bit seed, 64-bit stream id)";

/// A named, splittable random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// A stream independent of every other stream id under the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// SplitMix64 finalizer; a bijection on u64 used to derive per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The measurement-row distributions shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// i.i.d. standard normal entries.
    Gaussian,
    /// i.i.d. +-1 entries.
    Rademacher,
    /// i.i.d. entries with density `exp(-|x|)/2` (variance 2).
    SymExponential,
    /// i.i.d. entries with density `(gamma-1)/(2 gamma) min(1, |x|^-gamma)`.
    HeavyTail,
    /// Rows uniform on `r * B_1^n`, scaled for unit coordinate variance.
    LogconcaveL1Ball,
}

impl EnsembleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Rademacher => "rademacher",
            EnsembleKind::SymExponential => "sym_exponential",
            EnsembleKind::HeavyTail => "heavy_tail",
            EnsembleKind::LogconcaveL1Ball => "logconcave_l1ball",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(EnsembleKind::Gaussian),
            "rademacher" => Ok(EnsembleKind::Rademacher),
            "sym_exponential" => Ok(EnsembleKind::SymExponential),
            "heavy_tail" => Ok(EnsembleKind::HeavyTail),
            "logconcave_l1ball" => Ok(EnsembleKind::LogconcaveL1Ball),
            other => Err(Error::invalid(format!("unknown ensemble kind `{other}`"))),
        }
    }

    /// Whether the rows have i.i.d. entries (moment checks apply entrywise).
    pub fn iid_entries(&self) -> bool {
        !matches!(self, EnsembleKind::LogconcaveL1Ball)
    }

    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::Gaussian,
        EnsembleKind::Rademacher,
        EnsembleKind::SymExponential,
        EnsembleKind::HeavyTail,
        EnsembleKind::LogconcaveL1Ball,
    ];
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully specified random matrix draw.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// Tail exponent; required (and > 1) for [`EnsembleKind::HeavyTail`].
    pub gamma: Option<f64>,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, gamma: Option<f64>, m: usize, n: usize, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec { kind, gamma, m, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.gamma) {
            (EnsembleKind::HeavyTail, Some(g)) if g > 1.0 => {}
            (EnsembleKind::HeavyTail, Some(g)) => {
                return Err(Error::invalid(format!("heavy_tail needs gamma > 1, got {g}")));
            }
            (EnsembleKind::HeavyTail, None) => {
                return Err(Error::invalid("heavy_tail needs a gamma parameter"));
            }
            (_, Some(_)) => {
                return Err(Error::invalid(format!(
                    "gamma is only meaningful for heavy_tail, not {}",
                    self.kind
                )));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn with_dims_seed(&self, m: usize, seed: u64) -> EnsembleSpec {
        EnsembleSpec { m, seed, ..self.clone() }
    }

    /// For heavy tails: whether `gamma >= max(log n + 2, 6)`, the sufficient
    /// condition for the moment bound with exponent 1/2. `None` otherwise.
    pub fn heavy_tail_condition_ok(&self) -> Option<bool> {
        match (self.kind, self.gamma) {
            (EnsembleKind::HeavyTail, Some(g)) => {
                Some(g >= ((self.n as f64).ln() + 2.0).max(6.0))
            }
            _ => None,
        }
    }

    /// Serializes to the harness config-file dialect (an `[ensemble]`
    /// section of `key = value` lines).
    pub fn to_config_string(&self) -> String {
        let mut s = String::from("[ensemble]\n");
        s.push_str(&format!("kind = {}\n", self.kind));
        if let Some(g) = self.gamma {
            s.push_str(&format!("gamma = {g}\n"));
        }
        s.push_str(&format!("m = {}\n", self.m));
        s.push_str(&format!("n = {}\n", self.n));
        s.push_str(&format!("seed = {}\n", self.seed));
        s
    }

    /// Parses the `[ensemble]` section format written by
    /// [`EnsembleSpec::to_config_string`]. Unknown keys are errors.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut gamma = None;
        let mut m = None;
        let mut n = None;
        let mut seed = None;
        let mut in_section = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[ensemble]" {
                in_section = true;
                continue;
            }
            if line.starts_with('[') {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("unexpected section `{line}` in an ensemble spec"),
                });
            }
            if !in_section {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected an [ensemble] header".into(),
                });
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected `key = value`, got `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse {
                line: idx + 1,
                msg: format!("bad {what} `{value}`"),
            };
            match key {
                "kind" => kind = Some(EnsembleKind::parse(value)?),
                "gamma" => gamma = Some(value.parse::<f64>().map_err(|_| bad("number"))?),
                "m" => m = Some(value.parse::<usize>().map_err(|_| bad("integer"))?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad("integer"))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("integer"))?),
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("unknown key `{other}` in [ensemble]"),
                    });
                }
            }
        }
        fn require<T>(opt: Option<T>, name: &str) -> Result<T> {
            opt.ok_or_else(|| Error::invalid(format!("missing required key `{name}`")))
        }
        EnsembleSpec::new(
            require(kind, "kind")?,
            gamma,
            require(m, "m")?,
            require(n, "n")?,
            require(seed, "seed")?,
        )
    }
}

/// Isotropy scaling for rows uniform on the l1 ball: coordinates of the unit
/// ball have variance `2 / ((n+1)(n+2))`.
pub fn l1_ball_isotropy_radius(n: usize) -> f64 {
    let nf = n as f64;
    ((nf + 1.0) * (nf + 2.0) / 2.0).sqrt()
}

/// Fills one measurement row in place. Public so estimators can draw rows
/// without materializing a matrix.
pub fn fill_row(spec: &EnsembleSpec, rng: &mut ChaCha8Rng, row: &mut [f64]) {
    debug_assert_eq!(row.len(), spec.n);
    match spec.kind {
        EnsembleKind::Gaussian => {
            for v in row.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
        }
        EnsembleKind::Rademacher => {
            for v in row.iter_mut() {
                *v = if rng.random::<bool>() { 1.0 } else { -1.0 };
            }
        }
        EnsembleKind::SymExponential => {
            let exp = Exp::new(1.0).unwrap();
            for v in row.iter_mut() {
                let mag: f64 = rng.sample(exp);
                *v = if rng.random::<bool>() { mag } else { -mag };
            }
        }
        EnsembleKind::HeavyTail => {
            let gamma = spec.gamma.expect("validated");
            let bulk_mass = (gamma - 1.0) / gamma;
            for v in row.iter_mut() {
                let branch: f64 = rng.random();
                if branch < bulk_mass {
                    *v = rng.random_range(-1.0..1.0);
                } else {
                    let u: f64 = rng.random();
                    // inverse CDF of the tail: magnitude u^(-1/(gamma-1)) >= 1
                    let mag = u.powf(-1.0 / (gamma - 1.0));
                    *v = if rng.random::<bool>() { mag } else { -mag };
                }
            }
        }
        EnsembleKind::LogconcaveL1Ball => {
            let exp = Exp::new(1.0).unwrap();
            let r = l1_ball_isotropy_radius(spec.n);
            let mut total: f64 = 0.0;
            for v in row.iter_mut() {
                let e: f64 = rng.sample(exp);
                *v = if rng.random::<bool>() { e } else { -e };
                total += e;
            }
            // the extra exponential places the point strictly inside the ball
            total += rng.sample::<f64, _>(exp);
            for v in row.iter_mut() {
                *v *= r / total;
            }
        }
    }
}

/// Samples the full `m x n` matrix described by `spec`. Deterministic:
/// identical specs give bit-identical matrices.
pub fn sample_matrix(spec: &EnsembleSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    if spec.m == 0 || spec.n == 0 {
        return Err(Error::invalid("sample_matrix needs m >= 1 and n >= 1"));
    }
    let mut stream = RngStream::new(spec.seed);
    let mut data = vec![0.0; spec.m * spec.n];
    for i in 0..spec.m {
        fill_row(spec, stream.rng(), &mut data[i * spec.n..(i + 1) * spec.n]);
    }
    DenseMatrix::new(spec.m, spec.n, data)
}

/// Samples a matrix from a caller-supplied row distribution; the plug-in
/// point for subgaussian (or any other) rows beyond the built-ins.
pub fn sample_matrix_with<F>(m: usize, n: usize, seed: u64, mut row_fn: F) -> Result<DenseMatrix>
where
    F: FnMut(&mut ChaCha8Rng, &mut [f64]),
{
    if m == 0 || n == 0 {
        return Err(Error::invalid("sample_matrix_with needs m >= 1 and n >= 1"));
    }
    let mut stream = RngStream::new(seed);
    let mut data = vec![0.0; m * n];
    for i in 0..m {
        row_fn(stream.rng(), &mut data[i * n..(i + 1) * n]);
    }
    DenseMatrix::new(m, n, data)
}

/// `E |xi|^p` for the heavy-tailed entry distribution; `inf` for
/// `p >= gamma - 1`.
pub fn heavy_tail_moment(gamma: f64, p: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::invalid(format!("heavy_tail_moment needs gamma > 1, got {gamma}")));
    }
    if !(p >= 0.0) {
        return Err(Error::invalid(format!("heavy_tail_moment needs p >= 0, got {p}")));
    }
    if p >= gamma - 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok((gamma - 1.0) / gamma * (1.0 / (gamma - p - 1.0) + 1.0 / (p + 1.0)))
}

/// `E |xi|^r` for integer `r`, per entry distribution. `None` when the
/// moment does not exist.
pub fn entry_abs_moment(kind: EnsembleKind, gamma: Option<f64>, r: u32) -> Result<Option<f64>> {
    match kind {
        EnsembleKind::Gaussian => {
            // (r-1)!! for even r; sqrt(2/pi) * 2*4*...*(r-1) for odd r
            let mut prod = 1.0;
            let mut k = if r % 2 == 0 { 1 } else { 2 };
            while k < r {
                prod *= k as f64;
                k += 2;
            }
            let val = if r % 2 == 0 {
                prod
            } else {
                prod * (2.0 / std::f64::consts::PI).sqrt()
            };
            Ok(Some(val))
        }
        EnsembleKind::Rademacher => Ok(Some(1.0)),
        EnsembleKind::SymExponential => {
            let mut f = 1.0;
            for k in 2..=r {
                f *= k as f64;
            }
            Ok(Some(f))
        }
        EnsembleKind::HeavyTail => {
            let g = gamma.ok_or_else(|| Error::invalid("heavy_tail needs gamma"))?;
            let v = heavy_tail_moment(g, r as f64)?;
            Ok(if v.is_finite() { Some(v) } else { None })
        }
        EnsembleKind::LogconcaveL1Ball => Err(Error::invalid(
            "entrywise moments require an i.i.d.-entry ensemble",
        )),
    }
}

/// Report of the moment growth condition `(E|xi|^r)^(1/r) <= lambda r^alpha`
/// over the integer grid `r = 2 .. floor(log n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentConditionReport {
    pub r_max: u32,
    /// `(r, (E|xi|^r)^(1/r))`; `inf` marks a nonexistent moment.
    pub normalized_moments: Vec<(u32, f64)>,
    /// Smallest lambda for alpha = 1/2; `inf` if some moment is infinite.
    pub lambda_half: f64,
    /// Smallest lambda for alpha = 1.
    pub lambda_one: f64,
}

/// Computes the smallest `lambda` satisfying the moment bound for
/// `alpha in {1/2, 1}`, from closed-form moments.
pub fn moment_condition_check(spec: &EnsembleSpec, n: usize) -> Result<MomentConditionReport> {
    if !spec.kind.iid_entries() {
        return Err(Error::invalid(format!(
            "moment_condition_check requires i.i.d. entries; {} rows are not",
            spec.kind
        )));
    }
    let r_max = ((n as f64).ln().floor() as u32).max(2);
    let mut normalized = Vec::new();
    let mut lambda_half: f64 = 0.0;
    let mut lambda_one: f64 = 0.0;
    for r in 2..=r_max {
        let norm_moment = match entry_abs_moment(spec.kind, spec.gamma, r)? {
            Some(v) => v.powf(1.0 / r as f64),
            None => f64::INFINITY,
        };
        normalized.push((r, norm_moment));
        lambda_half = lambda_half.max(norm_moment / (r as f64).sqrt());
        lambda_one = lambda_one.max(norm_moment / r as f64);
    }
    Ok(MomentConditionReport { r_max, normalized_moments: normalized, lambda_half, lambda_one })
}

/// Smallest lambda for a caller-supplied normalized-moment function
/// `r -> (E|xi|^r)^(1/r)` (for plug-in row distributions, typically
/// evaluated by quadrature).
pub fn moment_condition_check_custom(
    normalized_moment: impl Fn(u32) -> f64,
    n: usize,
    alpha: f64,
) -> f64 {
    let r_max = ((n as f64).ln().floor() as u32).max(2);
    (2..=r_max)
        .map(|r| normalized_moment(r) / (r as f64).powf(alpha))
        .fold(0.0, f64::max)
}
