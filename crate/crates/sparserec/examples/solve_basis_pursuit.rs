//! Recover a sparse vector from noisy compressed measurements.
//!
//! Builds a 20x40 Gaussian measurement matrix, observes a 3-sparse signal
//! through it with bounded l2 noise, and solves
//!
//!   minimize ||z||_1  subject to  ||A z - y||_2 <= eps
//!
//! Run with: cargo run --release --example solve_basis_pursuit

use rand::prelude::*;
use rand_distr::StandardNormal;
use sparserec::ensembles::{sample_matrix, EnsembleKind, EnsembleSpec, RngStream};
use sparserec::geometry::lp_norm;
use sparserec::solvers::{solve_bpdn, SolverConfig};
use sparserec::DenseVector;

fn main() {
    let (m, n, s) = (20, 40, 3);
    let spec = EnsembleSpec::new(EnsembleKind::Gaussian, None, m, n, 7).unwrap();
    let a = sample_matrix(&spec).unwrap();

    // plant a sparse signal
    let mut stream = RngStream::with_stream(7, 1);
    let mut x = vec![0.0; n];
    for i in [3, 17, 31].iter().take(s) {
        x[*i] = stream.rng().sample::<f64, _>(StandardNormal);
    }
    let x = DenseVector::new(x).unwrap();

    // noisy measurements with ||e||_2 = 0.9 * eps
    let eps = 0.05;
    let ax = a.matvec(&x).unwrap();
    let mut e: Vec<f64> = (0..m).map(|_| stream.rng().sample(StandardNormal)).collect();
    let en = (e.iter().map(|v| v * v).sum::<f64>()).sqrt();
    e.iter_mut().for_each(|v| *v *= 0.9 * eps / en);
    let y = DenseVector::new(ax.iter().zip(&e).map(|(a, b)| a + b).collect::<Vec<_>>()).unwrap();

    let result = solve_bpdn(&a, &y, 2.0, eps, &SolverConfig::default()).unwrap();

    println!("status       : {}", result.status);
    println!("iterations   : {}", result.iterations);
    println!("objective    : {:.6} (true signal has ||x||_1 = {:.6})", result.objective, lp_norm(&x, 1.0).unwrap());
    println!("feasibility  : residual over budget = {:.2e}", result.feasibility_residual);

    let err = DenseVector::new(
        x.iter().zip(result.estimate.iter()).map(|(u, v)| u - v).collect::<Vec<_>>(),
    )
    .unwrap();
    println!("l2 error     : {:.4e}", lp_norm(&err, 2.0).unwrap());

    println!("\nrecovered support (|entry| > 1e-4):");
    for (i, v) in result.estimate.iter().enumerate() {
        if v.abs() > 1e-4 {
            println!("  x[{i:2}] = {v:+.5}   (truth {:+.5})", x[i]);
        }
    }
}
