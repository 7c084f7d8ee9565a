//! Weighted observed and complete-data log-likelihoods.
//!
//! Everything stays in log space; the unlabelled mixture term goes through
//! log-sum-exp with a max shift.

use crate::error::{Error, Result};
use crate::model::{ComponentCache, DataSet, LikelihoodVariant, MixtureModel, Responsibilities, WeightConfig};
use crate::numerics::log_sum_exp;

/// Weighted observed log-likelihood of `model` on `data`.
///
/// Original form: α Σ_labelled Σ_g z_jg ln(π_g f_g) +
/// (1−α) Σ_unlabelled ln Σ_g π_g f_g.
///
/// Alternative form keeps the labelled term and replaces the unlabelled term
/// with Σ_j ln Σ_g (π_g f_g)^{1−α}; at α = 1 it degenerates, so the labelled
/// (discriminant-analysis) term alone is returned there.
///
/// Empty blocks contribute zero, so n₁ = 0 or n₂ = 0 are both legal.
pub fn weighted_observed_loglik(
    model: &MixtureModel,
    data: &DataSet,
    cfg: &WeightConfig,
) -> Result<f64> {
    let cache = ComponentCache::build(model)?;
    let g_count = model.n_groups();
    if data.n_indicator_groups() > g_count {
        return Err(Error::Dimension {
            expected: g_count,
            found: data.n_indicator_groups(),
        });
    }
    let alpha = cfg.alpha;

    let mut labelled_term = 0.0;
    for j in 0..data.n_labelled() {
        let x = data.labelled_x().row(j);
        let g = data.labelled_class(j);
        let delta = cache.delta(g, x, &model.locations[g])?;
        labelled_term += cache.log_weights[g] + cache.log_density_from_delta(g, delta);
    }

    let mut log_terms = vec![0.0; g_count];
    let mut unlabelled_term = 0.0;
    for j in 0..data.n_unlabelled() {
        let x = data.unlabelled_x().row(j);
        for g in 0..g_count {
            let delta = cache.delta(g, x, &model.locations[g])?;
            log_terms[g] = cache.log_weights[g] + cache.log_density_from_delta(g, delta);
        }
        match cfg.variant {
            LikelihoodVariant::Original => {
                unlabelled_term += log_sum_exp(&log_terms);
            }
            LikelihoodVariant::Alternative => {
                let powered: Vec<f64> = log_terms.iter().map(|t| (1.0 - alpha) * t).collect();
                unlabelled_term += log_sum_exp(&powered);
            }
        }
    }

    Ok(match cfg.variant {
        LikelihoodVariant::Original => alpha * labelled_term + (1.0 - alpha) * unlabelled_term,
        LikelihoodVariant::Alternative => {
            if alpha == 1.0 {
                labelled_term
            } else {
                alpha * labelled_term + unlabelled_term
            }
        }
    })
}

/// Complete-data weighted log-likelihood
/// Σ_i Σ_j Σ_g α_i ẑ_jg^{(i)} [ln π_g + ln f_g(x_ij)].
pub fn complete_data_loglik(
    model: &MixtureModel,
    data: &DataSet,
    resp: &Responsibilities,
    cfg: &WeightConfig,
) -> Result<f64> {
    if resp.labelled_z_hat.rows() != data.n_labelled()
        || resp.unlabelled_z_hat.rows() != data.n_unlabelled()
    {
        return Err(Error::Dimension {
            expected: data.n_total(),
            found: resp.n_total(),
        });
    }
    let cache = ComponentCache::build(model)?;
    let g_count = model.n_groups();
    let block_weight = [cfg.alpha, 1.0 - cfg.alpha];

    let mut total = 0.0;
    for i in 0..data.n_total() {
        let (w_block, x, z_row) = if i < data.n_labelled() {
            (block_weight[0], data.labelled_x().row(i), resp.labelled_z_hat.row(i))
        } else {
            let k = i - data.n_labelled();
            (block_weight[1], data.unlabelled_x().row(k), resp.unlabelled_z_hat.row(k))
        };
        if w_block == 0.0 {
            continue;
        }
        for g in 0..g_count {
            let z = z_row[g];
            if z == 0.0 {
                continue;
            }
            let delta = cache.delta(g, x, &model.locations[g])?;
            total += w_block * z * (cache.log_weights[g] + cache.log_density_from_delta(g, delta));
        }
    }
    Ok(total)
}
