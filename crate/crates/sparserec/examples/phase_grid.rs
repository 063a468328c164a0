//! Phase transition of exact recovery: success rate over an (m, s) grid
//! for noiseless Gaussian measurements. Rates jump from 0 to 1 as m
//! crosses ~ s log(en/s).
//!
//! Run with: cargo run --release --example phase_grid

use sparserec::ensembles::EnsembleKind;
use sparserec::harness::{
    phase_grid, EpsilonRule, ExperimentConfig, Normalize, SignalKind, SignalSpec,
};
use sparserec::solvers::SolverConfig;

fn main() {
    let n = 48usize;
    let cfg = ExperimentConfig {
        kind: EnsembleKind::Gaussian,
        gamma: None,
        signal: SignalSpec {
            n,
            s: 1, // overridden per cell
            kind: SignalKind::GaussianCoeffs,
            alpha: None,
            normalize: Normalize::UnitL2,
        },
        p: 2.0,
        q: 2.0,
        r: 2.0,
        epsilon_rule: EpsilonRule::Fixed(0.0),
        m_values: vec![1], // overridden per cell
        trials: 25,
        base_seed: 4096,
        solver: SolverConfig::default(),
    };

    let m_list = [6usize, 12, 18, 24, 32, 40, 48];
    let s_list = [1usize, 2, 4, 8];
    let grid = phase_grid(&cfg, &m_list, &s_list).unwrap();

    print!("{:>6}", "s\\m");
    for m in &m_list {
        print!("{m:>6}");
    }
    println!();
    for (si, s) in s_list.iter().enumerate() {
        print!("{s:>6}");
        for (mi, _) in m_list.iter().enumerate() {
            let cell = &grid[si * m_list.len() + mi];
            print!("{:>6.2}", cell.rate);
        }
        println!();
    }
    println!("\n(n = {n}, 25 trials per cell; success = l2 error below 1e-6)");
}
