//! Executable transcript of the recovery lower-bound argument: estimate the
//! Rademacher supremum over sparse vectors, apply the cone factors, take
//! the Gaussian small-ball probability at the median device, and feed
//! everything to the small-ball lower bound. Positivity of the composed
//! bound certifies the cone infimum (and hence recovery) at that m.
//!
//! Run with: cargo run --release --example proof_pipeline

use sparserec::analysis::lower_bound_pipeline;

fn main() {
    let (n, s, q, rho, p, t) = (64, 2, 2.0, 0.5, 2.0, 1.0);
    println!("n = {n}, s = {s}, q = {q}, rho = {rho}, p = {p}, t = {t}\n");
    println!(
        "{:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "m", "R_m", "Q(2u*)", "bound", "positive", "tau"
    );

    for m in [100usize, 1_000, 10_000, 100_000, 1_000_000, 10_000_000] {
        let r = lower_bound_pipeline(n, s, q, rho, p, m, 2000, t, 12).unwrap();
        println!(
            "{m:>10} {:>10.4} {:>10.3} {:>10.4} {:>10} {:>9}",
            r.rademacher_bound,
            r.small_ball.value,
            r.bound.value,
            r.positive,
            r.tau.map_or("-".into(), |t| format!("{t:.2}")),
        );
    }

    let r = lower_bound_pipeline(n, s, q, rho, p, 10_000, 2000, t, 12).unwrap();
    println!(
        "\nwith these estimates the bound first turns positive near m = {:.2e};",
        r.min_positive_m
    );
    println!("the complexity term 4 R_m / u* must drop below the small-ball mass.");
    println!("(failure probability of the certificate at t = {t}: {:.3})", r.bound.failure_probability);
}
