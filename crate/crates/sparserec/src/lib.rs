//! # sparserec
//!
//! A laboratory for sparse recovery from underdetermined linear measurements.
//!
//! The crate solves lp-constrained basis pursuit denoising
//!
//! ```text
//! minimize ||z||_1   subject to   ||A z - y||_p <= eps
//! ```
//!
//! with a first-order primal-dual method for any `p` in `[1, inf]`, and ships
//! the surrounding machinery needed to study when recovery succeeds:
//!
//! - [`geometry`]: rearrangements, lp norms, best s-term approximation error,
//!   the block norm whose unit ball is the convex hull of unit-norm s-sparse
//!   vectors, and membership in the cone of effectively sparse vectors.
//! - [`ensembles`]: seeded samplers for Gaussian, Rademacher, symmetric
//!   exponential, heavy-tailed, and uniform-on-the-l1-ball measurement rows,
//!   with closed-form moment formulas to validate them.
//! - [`prox`]: soft thresholding and exact Euclidean projections onto lp
//!   balls, the solver's building blocks.
//! - [`solvers`]: the basis pursuit solver, with feasibility and
//!   suboptimality diagnostics.
//! - [`analysis`]: certification of the l1-robust null space property by
//!   support/sign enumeration, restricted-isometry constant estimation, the
//!   l1/l1 isometry gap demonstration, small-ball and Rademacher-supremum
//!   estimators, and an executable transcript of the lower-bound argument
//!   they feed.
//! - [`quantize`]: uniform scalar quantization, quantization-consistent
//!   basis pursuit, and the high-resolution noise budget.
//! - [`harness`]: reproducible seeded experiments (recovery sweeps, phase
//!   grids, noise scaling), config parsing, and CSV persistence.
//!
//! ## Examples
//!
//! Each major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run --release --example solve_basis_pursuit
//! cargo run --release --example exact_recovery_all_p
//! cargo run --release --example certify_nsp
//! cargo run --release --example rip_gap
//! cargo run --release --example quantized_recovery
//! cargo run --release --example ensemble_tour
//! cargo run --release --example noise_scaling
//! cargo run --release --example phase_grid
//! cargo run --release --example proof_pipeline
//! ```
//!
//! A thin CLI (`sparserec`) exposes the same operations for scripting; see
//! the README for the subcommand list.

pub mod analysis;
pub mod ensembles;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod prox;
pub mod quantize;
pub mod solvers;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector};
