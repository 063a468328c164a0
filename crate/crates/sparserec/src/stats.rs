//! Small numeric helpers shared across modules.
//!
//! Summations that feed reproducibility-sensitive results go through
//! [`pairwise_sum`] so that serial and parallel callers can agree bit-for-bit
//! by fixing the reduction order.

/// Pairwise (cascade) summation; deterministic for a fixed element order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Pairwise summation of `f(0..n)` without materializing the values.
pub fn pairwise_sum_by(n: usize, f: impl Fn(usize) -> f64) -> f64 {
    fn rec(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        let len = hi - lo;
        if len <= 8 {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + len / 2;
            rec(lo, mid, f) + rec(mid, hi, f)
        }
    }
    if n == 0 {
        0.0
    } else {
        rec(0, n, &f)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    pairwise_sum(values) / values.len() as f64
}

/// Sample standard deviation (n-1 denominator).
pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss = pairwise_sum_by(n, |i| {
        let d = values[i] - m;
        d * d
    });
    (ss / (n - 1) as f64).sqrt()
}

/// Median by sorting a copy; averages the two central order statistics.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// A Monte Carlo point estimate with a 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    /// 95% half-width (1.96 standard errors; Wald interval for frequencies).
    pub half_width: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Mean and half-width of a sample of real values.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let se = if n > 1 { sample_std(values) / (n as f64).sqrt() } else { 0.0 };
        McEstimate { value: mean(values), half_width: 1.96 * se, samples: n }
    }

    /// Wald interval for an empirical frequency `hits/trials`.
    pub fn from_frequency(hits: usize, trials: usize) -> Self {
        let p = hits as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        McEstimate { value: p, half_width: 1.96 * se, samples: trials }
    }

    pub fn std_error(&self) -> f64 {
        self.half_width / 1.96
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y.iter()) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let _ = n;
    (slope, intercept)
}
