//! Recovery from quantized measurements: observe y = Q(A x) through a
//! uniform scalar quantizer with bin width theta, reconstruct with the
//! consistent basis pursuit program (sup-norm ball of radius theta/2), and
//! watch the error track theta.
//!
//! Run with: cargo run --release --example quantized_recovery

use rand::prelude::*;
use sparserec::ensembles::{sample_matrix, EnsembleKind, EnsembleSpec, RngStream};
use sparserec::quantize::{high_res_noise_bound, quantize, solve_qcbp};
use sparserec::solvers::SolverConfig;
use sparserec::stats::median;
use sparserec::DenseVector;

fn main() {
    let (n, s) = (64usize, 2usize);
    let m = 4 * (s as f64 * (std::f64::consts::E * n as f64 / s as f64).ln()).ceil() as usize;
    let trials = 30;
    println!("m = {m}, n = {n}, s = {s}, {trials} trials per bin width\n");
    println!("theta      median err  err/theta  consistent");

    for theta in [0.8, 0.2, 0.05] {
        let mut errs = Vec::new();
        let mut consistent = 0;
        for trial in 0..trials {
            let seed = 31_000 + trial;
            let a = sample_matrix(
                &EnsembleSpec::new(EnsembleKind::Gaussian, None, m, n, seed).unwrap(),
            )
            .unwrap();
            let mut stream = RngStream::with_stream(seed, 4);
            let mut x = vec![0.0; n];
            for _ in 0..s {
                let i = stream.rng().random_range(0..n);
                x[i] = if stream.rng().random::<bool>() { 1.0 } else { -1.0 };
            }
            let xv = DenseVector::new(x).unwrap();
            let y = quantize(&a.matvec(&xv).unwrap(), theta).unwrap();
            let r = solve_qcbp(&a, &y, theta, &SolverConfig::default()).unwrap();
            if r.consistent {
                consistent += 1;
            }
            let err: f64 = r
                .solve
                .estimate
                .iter()
                .zip(xv.iter())
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt();
            errs.push(err);
        }
        let med = median(&errs);
        println!(
            "{theta:<9}  {med:<10.4}  {:<9.3}  {consistent}/{trials}",
            med / theta
        );
    }

    println!("\nconsistency is checked against the half-open box: minimizers of the");
    println!("closed-box program typically press against box faces, and landing on");
    println!("an upper face (or an ulp outside) is reported inconsistent rather");
    println!("than nudged - the error still tracks theta either way.");

    println!("\nhigh-resolution noise budgets for finite-p alternatives (theta = 0.2, m = {m}):");
    for p in [1.0, 2.0, 4.0] {
        for t in [0.5, 1.0, 2.0] {
            let b = high_res_noise_bound(0.2, p, m, t).unwrap();
            print!("  p={p} t={t}: eps_p={:.3} (prob {:.3})", b.epsilon, b.probability);
        }
        println!();
    }
}
