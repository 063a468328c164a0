//! Thin command-line front end over the sparserec library.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sparserec::analysis;
use sparserec::ensembles::{EnsembleKind, EnsembleSpec};
use sparserec::error::Error;
use sparserec::harness;
use sparserec::prox::MAX_FINITE_P;
use sparserec::quantize;
use sparserec::solvers::{solve_bpdn, SolverConfig, StepRule};
use sparserec::{DenseMatrix, DenseVector};

#[derive(Parser)]
#[command(name = "sparserec", version, about = "Sparse recovery laboratory")]
struct Cli {
    /// Base seed for commands that draw randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to SPARSEREC_THREADS, then all cores).
    #[arg(long, global = true, env = "SPARSEREC_THREADS")]
    threads: Option<usize>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a measurement matrix and write it in the text format.
    GenMatrix(GenMatrixArgs),
    /// Solve basis pursuit denoising from matrix/vector files.
    Solve(SolveArgs),
    /// Certify or refute the l1-robust null space property.
    CertifyNsp(CertifyArgs),
    /// Estimate restricted-isometry constants of a matrix file.
    EstimateRip(RipArgs),
    /// Mean l1-isometry gap ratio for Gaussian draws.
    GapDemo(GapArgs),
    /// Executable transcript of the recovery lower-bound argument.
    PipelineCheck(PipelineArgs),
    /// Quantized-measurement recovery sweep; writes a CSV.
    QuantizeDemo(QuantizeArgs),
    /// Run an experiment config; writes trial records as CSV.
    Experiment(ExperimentArgs),
    /// Success-rate table over an (m, s) grid; writes a CSV.
    PhaseGrid(PhaseGridArgs),
    /// Noise-scaling sweep: slope of median error against m.
    NoiseSweep(NoiseSweepArgs),
}

#[derive(Args)]
struct GenMatrixArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Output file (defaults to `<out-dir>/matrix.txt`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix file in the text format.
    #[arg(long)]
    matrix: PathBuf,
    /// Measurement vector file.
    #[arg(long)]
    y: PathBuf,
    /// Constraint exponent: a number in [1, 128] or `inf`.
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol_feas: f64,
    #[arg(long, default_value_t = 1e-7)]
    tol_obj: f64,
    /// Output estimate vector file (defaults to `<out-dir>/estimate.txt`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Use the raw norm ||Ax||_p instead of m^(-1/p) ||Ax||_p.
    #[arg(long)]
    raw_norm: bool,
    /// Per-subproblem margin CSV (defaults to `<out-dir>/nsp_margins.csv`).
    #[arg(long)]
    detail: Option<PathBuf>,
}

#[derive(Args)]
struct RipArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, default_value_t = 500)]
    samples: usize,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long, default_value_t = 400)]
    m: usize,
    #[arg(long, default_value_t = 16)]
    s: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
}

#[derive(Args)]
struct QuantizeArgs {
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Output CSV (defaults to `<out-dir>/quantize_demo.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Record measured wall times instead of zeros (breaks byte-level
    /// reproducibility of the CSV).
    #[arg(long)]
    timings: bool,
    /// Output CSV (defaults to `<out-dir>/experiment.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseGridArgs {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated m values.
    #[arg(long)]
    m_list: String,
    /// Comma-separated s values.
    #[arg(long)]
    s_list: String,
    /// Output CSV (defaults to `<out-dir>/phase_grid.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseSweepArgs {
    #[arg(long)]
    config: PathBuf,
}

fn parse_exponent(s: &str) -> Result<f64, Error> {
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    let p: f64 = s
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad exponent `{s}`")))?;
    if p < 1.0 || p > MAX_FINITE_P {
        return Err(Error::InvalidParameter(format!(
            "exponent must lie in [1, {MAX_FINITE_P}] or be `inf`, got {s}"
        )));
    }
    Ok(p)
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad integer `{t}` in list")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    std::fs::create_dir_all(&cli.out_dir)?;
    match cli.command {
        Command::GenMatrix(args) => {
            let kind = EnsembleKind::parse(&args.kind)?;
            let spec = EnsembleSpec::new(kind, args.gamma, args.m, args.n, cli.seed)?;
            let a = sparserec::ensembles::sample_matrix(&spec)?;
            let out = args.out.unwrap_or_else(|| cli.out_dir.join("matrix.txt"));
            a.write_text(&out)?;
            if let Some(ok) = spec.heavy_tail_condition_ok() {
                println!("heavy_tail moment condition (gamma >= max(log n + 2, 6)): {ok}");
            }
            println!("wrote {}x{} {} matrix to {}", args.m, args.n, kind, out.display());
        }
        Command::Solve(args) => {
            let a = DenseMatrix::read_text(&args.matrix)?;
            let y = DenseVector::read_text(&args.y)?;
            let p = parse_exponent(&args.p)?;
            let cfg = SolverConfig {
                max_iters: args.max_iters,
                primal_step: StepRule::Auto,
                dual_step: StepRule::Auto,
                tol_feas: args.tol_feas,
                tol_obj: args.tol_obj,
                operator_norm_iters: 100,
            };
            let r = solve_bpdn(&a, &y, p, args.eps, &cfg)?;
            let out = args.out.unwrap_or_else(|| cli.out_dir.join("estimate.txt"));
            r.estimate.write_text(&out)?;
            println!(
                "{} {} {} {}",
                r.status, r.iterations, r.objective, r.feasibility_residual
            );
        }
        Command::CertifyNsp(args) => {
            let a = DenseMatrix::read_text(&args.matrix)?;
            let p = parse_exponent(&args.p)?;
            let cert =
                analysis::certify_nsp_q1(&a, args.s, args.rho, args.tau, p, args.tol, args.raw_norm)?;
            let detail = args.detail.unwrap_or_else(|| cli.out_dir.join("nsp_margins.csv"));
            let mut csv = String::from("support_id,sign_id,margin\n");
            for sp in &cert.subproblems {
                csv.push_str(&format!("{},{},{}\n", sp.support_id, sp.sign_id, sp.margin));
            }
            std::fs::write(&detail, csv)?;
            println!(
                "{} worst_margin={} tau={} rho={} s={} subproblems={}",
                cert.verdict,
                cert.worst_margin,
                cert.tau,
                cert.rho,
                cert.s,
                cert.subproblems.len()
            );
            if let Some(note) = cert.note {
                println!("note: {note}");
            }
        }
        Command::EstimateRip(args) => {
            let a = DenseMatrix::read_text(&args.matrix)?;
            let p = parse_exponent(&args.p)?;
            let q = parse_exponent(&args.q)?;
            let e = analysis::rip_pq_estimate(&a, args.s, p, q, args.samples, cli.seed)?;
            println!(
                "c_lower_est={} C_upper_est={} ratio={} samples={} method={:?}",
                e.c_lower_est,
                e.c_upper_est,
                e.c_upper_est / e.c_lower_est,
                e.samples,
                e.method
            );
        }
        Command::GapDemo(args) => {
            let e = analysis::rip11_gap_demo(args.m, args.s, args.trials, cli.seed)?;
            println!(
                "mean_ratio={} half_width={} sqrt_s={} trials={}",
                e.value,
                e.half_width,
                (args.s as f64).sqrt(),
                args.trials
            );
        }
        Command::PipelineCheck(args) => {
            let q = parse_exponent(&args.q)?;
            let p = parse_exponent(&args.p)?;
            let r = analysis::lower_bound_pipeline(
                args.n, args.s, q, args.rho, p, args.m, args.trials, args.t, cli.seed,
            )?;
            println!(
                "sup_estimate={} (+-{}) cone_factor={} rademacher_bound={}",
                r.sup_estimate.value, r.sup_estimate.half_width, r.cone_factor, r.rademacher_bound
            );
            println!(
                "u_star={} small_ball={} (+-{})",
                r.u_star, r.small_ball.value, r.small_ball.half_width
            );
            println!(
                "bound={} failure_probability={} positive={} min_positive_m={:.3e}",
                r.bound.value, r.bound.failure_probability, r.positive, r.min_positive_m
            );
            if let Some(tau) = r.tau {
                println!("tau={tau}");
            }
        }
        Command::QuantizeDemo(args) => {
            let mut rows = String::from("trial,theta,err_l2,err_l1,consistent\n");
            for trial in 0..args.trials {
                let seed = harness::derive_trial_seed(cli.seed, 0, trial as u64);
                let spec = EnsembleSpec::new(
                    EnsembleKind::Gaussian,
                    None,
                    args.m,
                    args.n,
                    sparserec::ensembles::splitmix64(seed ^ 1),
                )?;
                let a = sparserec::ensembles::sample_matrix(&spec)?;
                let sig = harness::SignalSpec {
                    n: args.n,
                    s: args.s,
                    kind: harness::SignalKind::GaussianCoeffs,
                    alpha: None,
                    normalize: harness::Normalize::UnitL2,
                };
                let mut stream = sparserec::ensembles::RngStream::with_stream(seed, 2);
                let x = sig.realize(&mut stream);
                let y = quantize::quantize(&a.matvec(&x)?, args.theta)?;
                let r = quantize::solve_qcbp(&a, &y, args.theta, &SolverConfig::default())?;
                let d: Vec<f64> =
                    x.iter().zip(r.solve.estimate.iter()).map(|(u, v)| u - v).collect();
                let err2 = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                let err1: f64 = d.iter().map(|v| v.abs()).sum();
                rows.push_str(&format!(
                    "{},{},{},{},{}\n",
                    trial, args.theta, err2, err1, r.consistent
                ));
            }
            let out = args.out.unwrap_or_else(|| cli.out_dir.join("quantize_demo.csv"));
            std::fs::write(&out, rows)?;
            println!("wrote {} trials to {}", args.trials, out.display());
        }
        Command::Experiment(args) => {
            let cfg = harness::parse_config(&args.config)?;
            let records = harness::run_experiment(&cfg)?;
            let out = args.out.unwrap_or_else(|| cli.out_dir.join("experiment.csv"));
            harness::write_csv(&records, &out, args.timings)?;
            let converged = records
                .iter()
                .filter(|r| r.status == sparserec::solvers::SolveStatus::Converged)
                .count();
            println!(
                "wrote {} records to {} ({} converged)",
                records.len(),
                out.display(),
                converged
            );
        }
        Command::PhaseGrid(args) => {
            let cfg = harness::parse_config(&args.config)?;
            let m_list = parse_usize_list(&args.m_list)?;
            let s_list = parse_usize_list(&args.s_list)?;
            let grid = harness::phase_grid(&cfg, &m_list, &s_list)?;
            let out = args.out.unwrap_or_else(|| cli.out_dir.join("phase_grid.csv"));
            let mut csv = String::from("m,s,successes,trials,rate\n");
            for c in &grid {
                csv.push_str(&format!("{},{},{},{},{}\n", c.m, c.s, c.successes, c.trials, c.rate));
            }
            std::fs::write(&out, csv)?;
            println!("wrote {} cells to {}", grid.len(), out.display());
        }
        Command::NoiseSweep(args) => {
            let cfg = harness::parse_config(&args.config)?;
            let rep = harness::noise_scaling_sweep(&cfg)?;
            if rep.skipped {
                println!("skipped: eps = 0 leaves errors at the solver floor");
            } else {
                println!("slope={} half_width={}", rep.slope, rep.half_width);
            }
            for (m, med) in rep.medians {
                println!("m={m} median_err_l2={med}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, bad flags are input errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
