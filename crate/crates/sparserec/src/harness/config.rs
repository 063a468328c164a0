//! Plain-text experiment configs: `key = value` lines under bracketed
//! section headers. Unknown sections or keys are errors (fail-closed), and
//! every parse error carries its line number.
//!
//! ```text
//! [ensemble]
//! kind = gaussian
//!
//! [signal]
//! kind = gaussian_coeffs
//! s = 2
//! normalize = unit_l2
//!
//! [solver]
//! max_iters = 50000
//! primal_step = auto
//! dual_step = auto
//! tol_feas = 1e-8
//! tol_obj = 1e-7
//! operator_norm_iters = 100
//!
//! [experiment]
//! n = 64
//! p = 2
//! q = 2
//! r = 2
//! epsilon_rule = fixed
//! epsilon = 0
//! m_values = 16,32,64
//! trials = 100
//! base_seed = 1234
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};
use crate::solvers::{SolverConfig, StepRule};

use super::{EpsilonRule, ExperimentConfig, Normalize, SignalKind, SignalSpec};

const SECTIONS: [&str; 4] = ["ensemble", "signal", "solver", "experiment"];

const KEYS: [(&str, &[&str]); 4] = [
    ("ensemble", &["kind", "gamma"]),
    ("signal", &["kind", "s", "alpha", "normalize"]),
    (
        "solver",
        &["max_iters", "primal_step", "dual_step", "tol_feas", "tol_obj", "operator_norm_iters"],
    ),
    (
        "experiment",
        &["n", "p", "q", "r", "epsilon_rule", "epsilon", "theta", "m_values", "trials", "base_seed"],
    ),
];

struct RawConfig {
    // (section, key) -> (line, value)
    entries: BTreeMap<(String, String), (usize, String)>,
}

impl RawConfig {
    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, section: &str, key: &str) -> Result<&str> {
        self.get(section, key).ok_or_else(|| {
            Error::invalid(format!("missing required key `{key}` in section [{section}]"))
        })
    }
}

fn parse_raw(text: &str) -> Result<RawConfig> {
    let mut entries = BTreeMap::new();
    let mut section: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if !SECTIONS.contains(&name) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown section [{name}]"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some(sec) = section.clone() else {
            return Err(Error::Parse {
                line: line_no,
                msg: "key before any [section] header".into(),
            });
        };
        let allowed = KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap();
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unknown key `{key}` in section [{sec}]"),
            });
        }
        if entries.insert((sec.clone(), key.clone()), (line_no, value)).is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate key `{key}` in section [{sec}]"),
            });
        }
    }
    Ok(RawConfig { entries })
}

fn parse_f64(raw: &RawConfig, section: &str, key: &str) -> Result<f64> {
    let v = raw.require(section, key)?;
    parse_exponent(v)
        .ok_or_else(|| Error::invalid(format!("key `{key}`: bad number `{v}`")))
}

/// Accepts "inf" for the sup-norm exponent.
fn parse_exponent(v: &str) -> Option<f64> {
    if v == "inf" {
        return Some(f64::INFINITY);
    }
    v.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_usize(raw: &RawConfig, section: &str, key: &str) -> Result<usize> {
    let v = raw.require(section, key)?;
    v.parse::<usize>()
        .map_err(|_| Error::invalid(format!("key `{key}`: bad integer `{v}`")))
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config_str(&std::fs::read_to_string(path)?)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let raw = parse_raw(text)?;

    let kind = EnsembleKind::parse(raw.require("ensemble", "kind")?)?;
    let gamma = match raw.get("ensemble", "gamma") {
        Some(v) => Some(
            v.parse::<f64>()
                .map_err(|_| Error::invalid(format!("key `gamma`: bad number `{v}`")))?,
        ),
        None => None,
    };

    let n = parse_usize(&raw, "experiment", "n")?;
    let signal = SignalSpec {
        n,
        s: parse_usize(&raw, "signal", "s")?,
        kind: SignalKind::parse(raw.require("signal", "kind")?)?,
        alpha: match raw.get("signal", "alpha") {
            Some(v) => Some(
                v.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("key `alpha`: bad number `{v}`")))?,
            ),
            None => None,
        },
        normalize: Normalize::parse(raw.require("signal", "normalize")?)?,
    };

    let step = |key: &str| -> Result<StepRule> {
        let v = raw.require("solver", key)?;
        if v == "auto" {
            Ok(StepRule::Auto)
        } else {
            let x = v
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("key `{key}`: bad step `{v}`")))?;
            Ok(StepRule::Fixed(x))
        }
    };
    let solver = SolverConfig {
        max_iters: parse_usize(&raw, "solver", "max_iters")?,
        primal_step: step("primal_step")?,
        dual_step: step("dual_step")?,
        tol_feas: parse_f64(&raw, "solver", "tol_feas")?,
        tol_obj: parse_f64(&raw, "solver", "tol_obj")?,
        operator_norm_iters: parse_usize(&raw, "solver", "operator_norm_iters")?,
    };

    let epsilon_rule = match raw.require("experiment", "epsilon_rule")? {
        "fixed" => EpsilonRule::Fixed(parse_f64(&raw, "experiment", "epsilon")?),
        "noise_scaled" => EpsilonRule::NoiseScaled(parse_f64(&raw, "experiment", "epsilon")?),
        "quantizer" => EpsilonRule::Quantizer(parse_f64(&raw, "experiment", "theta")?),
        other => {
            return Err(Error::invalid(format!("unknown epsilon_rule `{other}`")));
        }
    };

    let m_values: Vec<usize> = raw
        .require("experiment", "m_values")?
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("m_values: bad integer `{t}`")))
        })
        .collect::<Result<_>>()?;

    let base_seed = raw
        .require("experiment", "base_seed")?
        .parse::<u64>()
        .map_err(|_| Error::invalid("base_seed: expected a 64-bit unsigned integer"))?;

    let cfg = ExperimentConfig {
        kind,
        gamma,
        signal,
        p: parse_f64(&raw, "experiment", "p")?,
        q: parse_f64(&raw, "experiment", "q")?,
        r: parse_f64(&raw, "experiment", "r")?,
        epsilon_rule,
        m_values,
        trials: parse_usize(&raw, "experiment", "trials")?,
        base_seed,
        solver: SolverConfig { ..solver },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

pub fn write_config_str(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[ensemble]");
    let _ = writeln!(s, "kind = {}", cfg.kind);
    if let Some(g) = cfg.gamma {
        let _ = writeln!(s, "gamma = {g}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "[signal]");
    let _ = writeln!(s, "kind = {}", cfg.signal.kind.as_str());
    let _ = writeln!(s, "s = {}", cfg.signal.s);
    if let Some(a) = cfg.signal.alpha {
        let _ = writeln!(s, "alpha = {a}");
    }
    let _ = writeln!(s, "normalize = {}", cfg.signal.normalize.as_str());
    let _ = writeln!(s);
    let _ = writeln!(s, "[solver]");
    let _ = writeln!(s, "max_iters = {}", cfg.solver.max_iters);
    let step = |r: StepRule| match r {
        StepRule::Auto => "auto".to_string(),
        StepRule::Fixed(v) => format!("{v}"),
    };
    let _ = writeln!(s, "primal_step = {}", step(cfg.solver.primal_step));
    let _ = writeln!(s, "dual_step = {}", step(cfg.solver.dual_step));
    let _ = writeln!(s, "tol_feas = {}", cfg.solver.tol_feas);
    let _ = writeln!(s, "tol_obj = {}", cfg.solver.tol_obj);
    let _ = writeln!(s, "operator_norm_iters = {}", cfg.solver.operator_norm_iters);
    let _ = writeln!(s);
    let _ = writeln!(s, "[experiment]");
    let _ = writeln!(s, "n = {}", cfg.signal.n);
    let _ = writeln!(s, "p = {}", fmt_exponent(cfg.p));
    let _ = writeln!(s, "q = {}", fmt_exponent(cfg.q));
    let _ = writeln!(s, "r = {}", fmt_exponent(cfg.r));
    match cfg.epsilon_rule {
        EpsilonRule::Fixed(e) => {
            let _ = writeln!(s, "epsilon_rule = fixed");
            let _ = writeln!(s, "epsilon = {e}");
        }
        EpsilonRule::NoiseScaled(e) => {
            let _ = writeln!(s, "epsilon_rule = noise_scaled");
            let _ = writeln!(s, "epsilon = {e}");
        }
        EpsilonRule::Quantizer(t) => {
            let _ = writeln!(s, "epsilon_rule = quantizer");
            let _ = writeln!(s, "theta = {t}");
        }
    }
    let m_strs: Vec<String> = cfg.m_values.iter().map(|m| m.to_string()).collect();
    let _ = writeln!(s, "m_values = {}", m_strs.join(","));
    let _ = writeln!(s, "trials = {}", cfg.trials);
    let _ = writeln!(s, "base_seed = {}", cfg.base_seed);
    s
}

pub fn write_config(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, write_config_str(cfg))?;
    Ok(())
}
