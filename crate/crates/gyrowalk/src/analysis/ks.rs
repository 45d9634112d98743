//! One-sample Kolmogorov-Smirnov distance against a reference CDF.

use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided KS statistic of a sample against `cdf`. Sorts a copy of the
/// sample; D_n = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n).
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let hi = (i as f64 + 1.0) / n - f;
        let lo = f - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    d
}

/// CDF of a normal distribution.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    Normal::new(mean, sd)
        .expect("sd must be positive and finite")
        .cdf(x)
}
