//! Numerical building blocks: special functions, SPD matrix primitives,
//! scalar root finding and seeded random sampling.
//!
//! Everything here is pure given its inputs. Random sampling goes through
//! [`rng::Rng`], an explicitly seeded xoshiro256++ generator, so results are
//! bit-reproducible across runs on the same build.

pub mod linalg;
pub mod rng;
pub mod roots;
pub mod sample;
pub mod special;

pub use linalg::{factorize_spd, mahalanobis_sq, Mat, SpdFactor};
pub use rng::Rng;
pub use roots::{find_root, RootBracket};
pub use sample::{sample, Distribution};
pub use special::{digamma, log_gamma};

/// Numerically stable log(sum(exp(v))) with max shift.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let sum: f64 = values.iter().map(|v| (v - m).exp()).sum();
    m + sum.ln()
}

/// Pairwise (cascade) summation over a slice, in index order.
///
/// Deterministic regardless of how the values were produced, and more
/// accurate than a running sum for long aggregations.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Mean via pairwise summation; 0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        pairwise_sum(values) / values.len() as f64
    }
}

/// Sample standard deviation (n-1 denominator); 0 when fewer than two values.
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    (pairwise_sum(&sq) / (n - 1) as f64).sqrt()
}
