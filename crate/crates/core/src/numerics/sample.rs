//! Random sampling from the distributions the simulations need.

use crate::error::{Error, Result};
use crate::numerics::linalg::{factorize_spd, Mat};
use crate::numerics::rng::Rng;

/// A distribution that [`sample`] can draw from.
#[derive(Clone, Debug)]
pub enum Distribution {
    /// Multivariate Gaussian with mean vector and SPD covariance.
    Gaussian { mean: Vec<f64>, scale: Mat },
    /// Multivariate t with location, SPD scale matrix and degrees of freedom.
    /// Drawn through its normal scale-mixture form: x = μ + L z / √w with
    /// w ~ Gamma(ν/2, ν/2).
    StudentT {
        mean: Vec<f64>,
        scale: Mat,
        dof: f64,
    },
    /// Gamma(shape, rate); samples are a single column.
    Gamma { shape: f64, rate: f64 },
}

/// Draws `n` rows from `dist` using the caller's generator.
///
/// Deterministic given the generator state; multivariate draws consume the
/// stream row by row.
pub fn sample(dist: &Distribution, n: usize, rng: &mut Rng) -> Result<Mat> {
    match dist {
        Distribution::Gaussian { mean, scale } => {
            let factor = factorize_spd(scale)?;
            if mean.len() != factor.dim() {
                return Err(Error::Dimension {
                    expected: factor.dim(),
                    found: mean.len(),
                });
            }
            let p = mean.len();
            let mut out = Mat::zeros(n, p);
            let mut z = vec![0.0; p];
            for i in 0..n {
                for zj in z.iter_mut() {
                    *zj = rng.next_standard_normal();
                }
                let lz = factor.apply_lower(&z);
                for j in 0..p {
                    out[(i, j)] = mean[j] + lz[j];
                }
            }
            Ok(out)
        }
        Distribution::StudentT { mean, scale, dof } => {
            if !(*dof > 0.0) {
                return Err(Error::domain(format!(
                    "student t needs positive degrees of freedom, got {dof}"
                )));
            }
            let factor = factorize_spd(scale)?;
            if mean.len() != factor.dim() {
                return Err(Error::Dimension {
                    expected: factor.dim(),
                    found: mean.len(),
                });
            }
            let p = mean.len();
            let mut out = Mat::zeros(n, p);
            let mut z = vec![0.0; p];
            for i in 0..n {
                for zj in z.iter_mut() {
                    *zj = rng.next_standard_normal();
                }
                let w = rng.next_gamma(0.5 * dof, 0.5 * dof);
                let s = 1.0 / w.sqrt();
                let lz = factor.apply_lower(&z);
                for j in 0..p {
                    out[(i, j)] = mean[j] + s * lz[j];
                }
            }
            Ok(out)
        }
        Distribution::Gamma { shape, rate } => {
            if !(*shape > 0.0) || !(*rate > 0.0) {
                return Err(Error::domain(format!(
                    "gamma needs positive shape and rate, got ({shape}, {rate})"
                )));
            }
            let mut out = Mat::zeros(n, 1);
            for i in 0..n {
                out[(i, 0)] = rng.next_gamma(*shape, *rate);
            }
            Ok(out)
        }
    }
}
