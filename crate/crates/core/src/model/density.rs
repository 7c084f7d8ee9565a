//! Component log-densities.

use crate::error::Result;
use crate::model::{Family, MixtureModel};
use crate::numerics::linalg::{factorize_spd, mahalanobis_sq, Mat, SpdFactor};
use crate::numerics::special::log_gamma;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// Log-density of one mixture component at `x`.
///
/// Gaussian: −p/2 ln(2π) − ½ ln|Σ| − ½ δ.
/// Student t: ln Γ((ν+p)/2) − ln Γ(ν/2) − (p/2) ln(πν) − ½ ln|Σ|
///            − ((ν+p)/2) ln(1 + δ/ν),
/// with δ the squared Mahalanobis distance.
pub fn log_density(
    family: Family,
    x: &[f64],
    mu: &[f64],
    scale: &Mat,
    dof: Option<f64>,
) -> Result<f64> {
    let factor = factorize_spd(scale)?;
    let delta = mahalanobis_sq(x, mu, &factor)?;
    let p = x.len() as f64;
    match family {
        Family::Gaussian => Ok(-0.5 * p * LN_TWO_PI - 0.5 * factor.log_det() - 0.5 * delta),
        Family::StudentT => {
            let nu = dof.ok_or_else(|| {
                crate::error::Error::domain("t density requires degrees of freedom")
            })?;
            Ok(log_t_terms(nu, p, factor.log_det(), delta)?)
        }
    }
}

fn log_t_terms(nu: f64, p: f64, log_det: f64, delta: f64) -> Result<f64> {
    Ok(log_gamma(0.5 * (nu + p))?
        - log_gamma(0.5 * nu)?
        - 0.5 * p * (LN_PI + nu.ln())
        - 0.5 * log_det
        - 0.5 * (nu + p) * (1.0 + delta / nu).ln())
}

/// Per-component quantities factorized once per model so E-steps and
/// likelihood evaluations do not refactorize Σ_g for every observation.
pub struct ComponentCache {
    pub factors: Vec<SpdFactor>,
    pub log_weights: Vec<f64>,
    family: Family,
    dof: Vec<f64>,
    dim: f64,
    /// Constant part of the log-density per component.
    log_norm: Vec<f64>,
}

impl ComponentCache {
    pub fn build(model: &MixtureModel) -> Result<Self> {
        let p = model.dim() as f64;
        let mut factors = Vec::with_capacity(model.n_groups());
        let mut log_norm = Vec::with_capacity(model.n_groups());
        let dof = match (&model.family, &model.dof) {
            (Family::StudentT, Some(nu)) => nu.clone(),
            _ => vec![0.0; model.n_groups()],
        };
        for (g, sigma) in model.scales.iter().enumerate() {
            let factor = factorize_spd(sigma)?;
            let c = match model.family {
                Family::Gaussian => -0.5 * p * LN_TWO_PI - 0.5 * factor.log_det(),
                Family::StudentT => {
                    let nu = dof[g];
                    log_gamma(0.5 * (nu + p))?
                        - log_gamma(0.5 * nu)?
                        - 0.5 * p * (LN_PI + nu.ln())
                        - 0.5 * factor.log_det()
                }
            };
            log_norm.push(c);
            factors.push(factor);
        }
        Ok(ComponentCache {
            factors,
            log_weights: model.weights.iter().map(|w| w.ln()).collect(),
            family: model.family,
            dof,
            dim: p,
            log_norm,
        })
    }

    /// Squared Mahalanobis distance of `x` to component `g`.
    pub fn delta(&self, g: usize, x: &[f64], mu: &[f64]) -> Result<f64> {
        mahalanobis_sq(x, mu, &self.factors[g])
    }

    /// Component log-density given a precomputed δ.
    pub fn log_density_from_delta(&self, g: usize, delta: f64) -> f64 {
        match self.family {
            Family::Gaussian => self.log_norm[g] - 0.5 * delta,
            Family::StudentT => {
                let nu = self.dof[g];
                self.log_norm[g] - 0.5 * (nu + self.dim) * (1.0 + delta / nu).ln()
            }
        }
    }

    /// Latent scale weight (ν+p)/(ν+δ); 1 for Gaussian components.
    pub fn scale_weight_from_delta(&self, g: usize, delta: f64) -> f64 {
        match self.family {
            Family::Gaussian => 1.0,
            Family::StudentT => {
                let nu = self.dof[g];
                (nu + self.dim) / (nu + delta)
            }
        }
    }
}
