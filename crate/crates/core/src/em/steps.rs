//! E-step and the family-specific maximization steps.

use crate::error::{Error, Result};
use crate::model::{
    ComponentCache, DataSet, Family, LikelihoodVariant, MixtureModel, Responsibilities,
};
use crate::numerics::linalg::Mat;
use crate::numerics::log_sum_exp;
use crate::numerics::roots::find_root;
use crate::numerics::special::digamma;
use crate::parsimonious::{project_structure, CovarianceStructure};

use super::FitConfig;

/// Effective mass below which a component counts as degenerate.
pub(crate) const DEGENERACY_FLOOR: f64 = 1e-8;

/// Posterior update.
///
/// Unlabelled responsibilities are proportional to π_g f_g (original form)
/// or (π_g f_g)^{1−α} (alternative form), normalized per row in log space;
/// labelled rows are copies of the known indicators. For t models the
/// latent scale weights ŵ_jg = (ν_g + p)/(ν_g + δ_jg) are filled for every
/// row and component.
pub fn e_step(model: &MixtureModel, data: &DataSet, cfg: &FitConfig) -> Result<Responsibilities> {
    let cache = ComponentCache::build(model)?;
    let g_count = model.n_groups();
    let n1 = data.n_labelled();
    let n2 = data.n_unlabelled();
    let power = match cfg.weight.variant {
        LikelihoodVariant::Original => 1.0,
        LikelihoodVariant::Alternative => 1.0 - cfg.weight.alpha,
    };

    let mut labelled = Mat::zeros(n1, g_count);
    for i in 0..n1 {
        labelled[(i, data.labelled_class(i))] = 1.0;
    }

    let is_t = model.family == Family::StudentT;
    let mut w_hat = is_t.then(|| Mat::zeros(n1 + n2, g_count));

    if let Some(w) = w_hat.as_mut() {
        for i in 0..n1 {
            let x = data.labelled_x().row(i);
            for g in 0..g_count {
                let delta = cache.delta(g, x, &model.locations[g])?;
                w[(i, g)] = cache.scale_weight_from_delta(g, delta);
            }
        }
    }

    let mut unlabelled = Mat::zeros(n2, g_count);
    let mut log_terms = vec![0.0; g_count];
    for i in 0..n2 {
        let x = data.unlabelled_x().row(i);
        for g in 0..g_count {
            let delta = cache.delta(g, x, &model.locations[g])?;
            log_terms[g] = cache.log_weights[g] + cache.log_density_from_delta(g, delta);
            if let Some(w) = w_hat.as_mut() {
                w[(n1 + i, g)] = cache.scale_weight_from_delta(g, delta);
            }
        }
        let powered: Vec<f64> = log_terms.iter().map(|t| power * t).collect();
        let norm = log_sum_exp(&powered);
        for g in 0..g_count {
            unlabelled[(i, g)] = (powered[g] - norm).exp();
        }
    }

    Ok(Responsibilities {
        labelled_z_hat: labelled,
        unlabelled_z_hat: unlabelled,
        w_hat,
    })
}

/// Row iteration helper: block weight α_i, feature row, membership row and
/// latent scale row (`None` when the fit has no scale weights).
fn for_each_row<F: FnMut(f64, &[f64], &[f64], Option<&[f64]>)>(
    data: &DataSet,
    resp: &Responsibilities,
    alpha: f64,
    mut f: F,
) {
    let n1 = data.n_labelled();
    for i in 0..n1 {
        f(
            alpha,
            data.labelled_x().row(i),
            resp.labelled_z_hat.row(i),
            resp.w_hat.as_ref().map(|w| w.row(i)),
        );
    }
    for i in 0..data.n_unlabelled() {
        f(
            1.0 - alpha,
            data.unlabelled_x().row(i),
            resp.unlabelled_z_hat.row(i),
            resp.w_hat.as_ref().map(|w| w.row(n1 + i)),
        );
    }
}

/// Masses m_g = Σ α_i ẑ, scale masses Σ α_i ẑ ŵ, and the means weighted by
/// whichever of the two the caller asks for.
struct FirstMoments {
    masses: Vec<f64>,
    means: Vec<Vec<f64>>,
}

fn first_moments(
    data: &DataSet,
    resp: &Responsibilities,
    alpha: f64,
    g_count: usize,
    use_scale_weights: bool,
) -> Result<FirstMoments> {
    let p = data.dim();
    let mut masses = vec![0.0; g_count];
    let mut mean_masses = vec![0.0; g_count];
    let mut sums = vec![vec![0.0; p]; g_count];

    for_each_row(data, resp, alpha, |a, x, z, w| {
        for g in 0..g_count {
            let az = a * z[g];
            if az == 0.0 {
                continue;
            }
            masses[g] += az;
            let azw = if use_scale_weights {
                az * w.map_or(1.0, |row| row[g])
            } else {
                az
            };
            mean_masses[g] += azw;
            for (s, v) in sums[g].iter_mut().zip(x) {
                *s += azw * v;
            }
        }
    });

    for (g, &m) in masses.iter().enumerate() {
        if m <= DEGENERACY_FLOOR {
            return Err(Error::DegenerateComponent { component: g });
        }
    }
    let means = sums
        .iter()
        .zip(&mean_masses)
        .map(|(s, &m)| s.iter().map(|v| v / m).collect())
        .collect();
    Ok(FirstMoments { masses, means })
}

/// Σ α_i ẑ (ŵ) (x − μ_g)(x − μ_g)ᵀ about the given centers.
fn weighted_scatters(
    data: &DataSet,
    resp: &Responsibilities,
    alpha: f64,
    centers: &[Vec<f64>],
    use_scale_weights: bool,
) -> Vec<Mat> {
    let g_count = centers.len();
    let p = data.dim();
    let mut scatters = vec![Mat::zeros(p, p); g_count];
    let mut diff = vec![0.0; p];
    for_each_row(data, resp, alpha, |a, x, z, w| {
        for g in 0..g_count {
            let az = a * z[g];
            if az == 0.0 {
                continue;
            }
            let azw = if use_scale_weights {
                az * w.map_or(1.0, |row| row[g])
            } else {
                az
            };
            for ((d, v), mu) in diff.iter_mut().zip(x).zip(&centers[g]) {
                *d = v - mu;
            }
            scatters[g].add_scaled_outer(&diff, azw);
        }
    });
    scatters
}

/// Gaussian maximization: π_g = S_g/ΣS_g, μ_g the weighted mean, Σ_g the
/// weighted scatter over S_g pushed through the structure projection.
pub fn m_step_gaussian(
    data: &DataSet,
    resp: &Responsibilities,
    cfg: &FitConfig,
    structure: &CovarianceStructure,
) -> Result<MixtureModel> {
    let g_count = resp.n_groups();
    let alpha = cfg.weight.alpha;
    let moments = first_moments(data, resp, alpha, g_count, false)?;
    let total: f64 = moments.masses.iter().sum();
    let scatters = weighted_scatters(data, resp, alpha, &moments.means, false);
    let scales = project_structure(structure, &scatters, &moments.masses)?;
    Ok(MixtureModel {
        family: Family::Gaussian,
        weights: moments.masses.iter().map(|m| m / total).collect(),
        locations: moments.means,
        scales,
        dof: None,
        structure: *structure,
    })
}

/// Left side of the degrees-of-freedom equation: ln(ν/2) − Ψ(ν/2) + c.
/// Strictly decreasing in ν.
pub(crate) fn dof_equation(nu: f64, constant: f64) -> f64 {
    let half = 0.5 * nu;
    half.ln() - digamma(half).expect("positive argument") + constant
}

/// Solves the degrees-of-freedom equation over the configured bracket.
/// Without a sign change the nearer endpoint is adopted and flagged.
pub(crate) fn solve_nu(constant: f64, cfg: &FitConfig) -> (f64, bool) {
    let b = &cfg.nu_bracket;
    let f_lo = dof_equation(b.lo, constant);
    let f_hi = dof_equation(b.hi, constant);
    if f_lo <= 0.0 {
        // Decreasing f is negative on the whole bracket: maximum at the floor.
        return (b.lo, true);
    }
    if f_hi >= 0.0 {
        return (b.hi, true);
    }
    match find_root(|nu| dof_equation(nu, constant), b) {
        Ok(root) => (root, false),
        Err(_) => (0.5 * (b.lo + b.hi), true),
    }
}

/// Per-component constants for the degrees-of-freedom update:
/// 1 + Ψ((ν_old+p)/2) − ln((ν_old+p)/2) + (1/m_g) Σ α_i ẑ (ln ŵ − ŵ).
/// With the shared-ν constraint a single constant sums over every group.
fn dof_constants(
    data: &DataSet,
    resp: &Responsibilities,
    prev: &MixtureModel,
    alpha: f64,
    masses: &[f64],
    constrain: bool,
) -> Result<Vec<f64>> {
    let g_count = prev.n_groups();
    let p = data.dim() as f64;
    let prev_nu = prev
        .dof
        .as_ref()
        .ok_or_else(|| Error::domain("t step requires previous degrees of freedom"))?;

    let mut weight_sums = vec![0.0; g_count];
    for_each_row(data, resp, alpha, |a, _x, z, w| {
        let w_row = w.expect("t step requires scale weights");
        for g in 0..g_count {
            let az = a * z[g];
            if az == 0.0 {
                continue;
            }
            let wv = w_row[g];
            weight_sums[g] += az * (wv.ln() - wv);
        }
    });

    let correction = |nu_old: f64| -> Result<f64> {
        let h = 0.5 * (nu_old + p);
        Ok(digamma(h)? - h.ln())
    };

    if constrain {
        let total: f64 = masses.iter().sum();
        let mut acc = 0.0;
        for g in 0..g_count {
            acc += weight_sums[g] + masses[g] * correction(prev_nu[g])?;
        }
        let c = 1.0 + acc / total;
        Ok(vec![c; g_count])
    } else {
        (0..g_count)
            .map(|g| Ok(1.0 + correction(prev_nu[g])? + weight_sums[g] / masses[g]))
            .collect()
    }
}

/// Multicycle conditional maximization for the t family.
///
/// First CM-step updates π_g, the scale-weighted locations and the degrees
/// of freedom; an intermediate E-step then refreshes ẑ and ŵ before the
/// second CM-step rebuilds the scale matrices and projects them onto the
/// requested structure. Returns the new model together with the refreshed
/// responsibilities and a flag marking any ν pinned at a bracket endpoint.
pub fn cm_steps_t(
    data: &DataSet,
    resp: &Responsibilities,
    prev: &MixtureModel,
    cfg: &FitConfig,
) -> Result<(MixtureModel, Responsibilities, bool)> {
    let g_count = prev.n_groups();
    let alpha = cfg.weight.alpha;
    let first = first_moments(data, resp, alpha, g_count, true)?;
    let total: f64 = first.masses.iter().sum();

    let constrain = cfg.constrain_nu || prev.structure.constrain_dof();
    let constants = dof_constants(data, resp, prev, alpha, &first.masses, constrain)?;
    let mut boundary = false;
    let dof: Vec<f64> = if constrain {
        let (nu, hit) = solve_nu(constants[0], cfg);
        boundary |= hit;
        vec![nu; g_count]
    } else {
        constants
            .iter()
            .map(|&c| {
                let (nu, hit) = solve_nu(c, cfg);
                boundary |= hit;
                nu
            })
            .collect()
    };

    let half_model = MixtureModel {
        family: Family::StudentT,
        weights: first.masses.iter().map(|m| m / total).collect(),
        locations: first.means,
        scales: prev.scales.clone(),
        dof: Some(dof),
        structure: prev.structure,
    };

    // Multicycle: refresh expectations before the scale update.
    let refreshed = e_step(&half_model, data, cfg)?;
    let fresh = first_moments(data, &refreshed, alpha, g_count, true)?;
    let scatters = weighted_scatters(data, &refreshed, alpha, &half_model.locations, true);
    let scales = project_structure(&prev.structure, &scatters, &fresh.masses)?;

    let model = MixtureModel {
        scales,
        ..half_model
    };
    Ok((model, refreshed, boundary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightConfig;
    use crate::numerics::Rng;

    fn cfg(alpha: f64) -> FitConfig {
        FitConfig::new(WeightConfig::original(alpha).unwrap())
    }

    fn structure(code: &str) -> CovarianceStructure {
        CovarianceStructure::parse(code).unwrap()
    }

    fn random_dataset(rng: &mut Rng, n1: usize, n2: usize, p: usize, g: usize) -> DataSet {
        let mut lx = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n1 {
            let class = i % g;
            labels.push(class);
            lx.push(
                (0..p)
                    .map(|_| 3.0 * class as f64 + rng.next_standard_normal())
                    .collect::<Vec<_>>(),
            );
        }
        let ux: Vec<Vec<f64>> = (0..n2)
            .map(|i| {
                let class = i % g;
                (0..p)
                    .map(|_| 3.0 * class as f64 + rng.next_standard_normal())
                    .collect()
            })
            .collect();
        DataSet::from_labels(
            Mat::from_rows(&lx).unwrap(),
            &labels,
            g,
            Mat::from_rows(&ux).unwrap(),
        )
        .unwrap()
    }

    fn gaussian_model(g: usize, p: usize) -> MixtureModel {
        MixtureModel {
            family: Family::Gaussian,
            weights: vec![1.0 / g as f64; g],
            locations: (0..g).map(|k| vec![3.0 * k as f64; p]).collect(),
            scales: vec![Mat::identity(p); g],
            dof: None,
            structure: structure("UUUU"),
        }
    }

    #[test]
    fn single_component_gives_unit_responsibilities() {
        let mut rng = Rng::seed_from(1);
        let data = random_dataset(&mut rng, 2, 5, 2, 1);
        let model = MixtureModel {
            family: Family::StudentT,
            weights: vec![1.0],
            locations: vec![vec![0.0, 0.0]],
            scales: vec![Mat::identity(2)],
            dof: Some(vec![4.0]),
            structure: structure("UUUU"),
        };
        let resp = e_step(&model, &data, &cfg(0.5)).unwrap();
        for i in 0..data.n_unlabelled() {
            assert_eq!(resp.unlabelled_z_hat[(i, 0)], 1.0);
        }
        let w = resp.w_hat.as_ref().unwrap();
        for i in 0..data.n_total() {
            let x = data.row(i);
            let delta: f64 = x.iter().map(|v| v * v).sum();
            let expected = (4.0 + 2.0) / (4.0 + delta);
            assert!((w[(i, 0)] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_components_split_evenly() {
        let mut rng = Rng::seed_from(2);
        let data = random_dataset(&mut rng, 2, 6, 2, 2);
        let model = MixtureModel {
            family: Family::Gaussian,
            weights: vec![0.5, 0.5],
            locations: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            scales: vec![Mat::identity(2), Mat::identity(2)],
            dof: None,
            structure: structure("UUUU"),
        };
        let resp = e_step(&model, &data, &cfg(0.5)).unwrap();
        for i in 0..data.n_unlabelled() {
            assert!((resp.unlabelled_z_hat[(i, 0)] - 0.5).abs() < 1e-12);
            assert!((resp.unlabelled_z_hat[(i, 1)] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn alternative_matches_original_at_alpha_zero() {
        let mut rng = Rng::seed_from(3);
        let data = random_dataset(&mut rng, 3, 9, 2, 2);
        let model = gaussian_model(2, 2);
        let original = e_step(&model, &data, &cfg(0.0)).unwrap();
        let mut alt_cfg = cfg(0.0);
        alt_cfg.weight.variant = LikelihoodVariant::Alternative;
        let alternative = e_step(&model, &data, &alt_cfg).unwrap();
        assert!(
            original
                .unlabelled_z_hat
                .max_abs_diff(&alternative.unlabelled_z_hat)
                < 1e-15
        );
    }

    #[test]
    fn half_weight_m_step_equals_classical_em() {
        // With α = 0.5 every sum carries the same factor, which cancels in
        // all ratios; compare against unweighted moments done by hand.
        let mut rng = Rng::seed_from(4);
        let data = random_dataset(&mut rng, 4, 8, 2, 2);
        let model = gaussian_model(2, 2);
        let resp = e_step(&model, &data, &cfg(0.5)).unwrap();
        let fitted = m_step_gaussian(&data, &resp, &cfg(0.5), &structure("UUUU")).unwrap();

        let n1 = data.n_labelled();
        let z_of = |i: usize, g: usize| -> f64 {
            if i < n1 {
                resp.labelled_z_hat[(i, g)]
            } else {
                resp.unlabelled_z_hat[(i - n1, g)]
            }
        };
        for g in 0..2 {
            let mass: f64 = (0..data.n_total()).map(|i| z_of(i, g)).sum();
            let mut mean = vec![0.0; 2];
            for i in 0..data.n_total() {
                for (m, v) in mean.iter_mut().zip(data.row(i)) {
                    *m += z_of(i, g) * v;
                }
            }
            for m in mean.iter_mut() {
                *m /= mass;
            }
            for (a, b) in fitted.locations[g].iter().zip(&mean) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hard_alpha_one_recovers_per_class_sample_moments() {
        let mut rng = Rng::seed_from(5);
        let data = random_dataset(&mut rng, 10, 4, 2, 2);
        let mut resp = Responsibilities {
            labelled_z_hat: data.labelled_z().clone(),
            unlabelled_z_hat: Mat::zeros(4, 2),
            w_hat: None,
        };
        // Unlabelled rows get uniform soft weights; at α = 1 they are ignored.
        for i in 0..4 {
            resp.unlabelled_z_hat[(i, 0)] = 0.5;
            resp.unlabelled_z_hat[(i, 1)] = 0.5;
        }
        let fitted = m_step_gaussian(&data, &resp, &cfg(1.0), &structure("UUUU")).unwrap();
        for g in 0..2 {
            let members: Vec<usize> = (0..data.n_labelled())
                .filter(|&i| data.labelled_class(i) == g)
                .collect();
            let mut mean = vec![0.0; 2];
            for &i in &members {
                for (m, v) in mean.iter_mut().zip(data.labelled_x().row(i)) {
                    *m += v;
                }
            }
            for m in mean.iter_mut() {
                *m /= members.len() as f64;
            }
            for (a, b) in fitted.locations[g].iter().zip(&mean) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn m_step_matches_direct_weighted_moment_oracle() {
        let mut rng = Rng::seed_from(6);
        let data = random_dataset(&mut rng, 3, 5, 2, 2);
        let model = gaussian_model(2, 2);
        let alpha = 0.3;
        let resp = e_step(&model, &data, &cfg(alpha)).unwrap();
        let fitted = m_step_gaussian(&data, &resp, &cfg(alpha), &structure("UUUU")).unwrap();

        let n1 = data.n_labelled();
        for g in 0..2 {
            let mut mass = 0.0;
            let mut mean = vec![0.0; 2];
            for i in 0..data.n_total() {
                let (a, z) = if i < n1 {
                    (alpha, resp.labelled_z_hat[(i, g)])
                } else {
                    (1.0 - alpha, resp.unlabelled_z_hat[(i - n1, g)])
                };
                mass += a * z;
                for (m, v) in mean.iter_mut().zip(data.row(i)) {
                    *m += a * z * v;
                }
            }
            for m in mean.iter_mut() {
                *m /= mass;
            }
            let mut scatter = Mat::zeros(2, 2);
            for i in 0..data.n_total() {
                let (a, z) = if i < n1 {
                    (alpha, resp.labelled_z_hat[(i, g)])
                } else {
                    (1.0 - alpha, resp.unlabelled_z_hat[(i - n1, g)])
                };
                let d: Vec<f64> = data.row(i).iter().zip(&mean).map(|(v, m)| v - m).collect();
                scatter.add_scaled_outer(&d, a * z);
            }
            let sigma = scatter.scale(1.0 / mass);
            for (a, b) in fitted.locations[g].iter().zip(&mean) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(fitted.scales[g].max_abs_diff(&sigma) < 1e-12);
        }
    }

    #[test]
    fn degenerate_component_is_reported() {
        let mut rng = Rng::seed_from(7);
        let data = random_dataset(&mut rng, 2, 4, 2, 2);
        let mut resp = e_step(&gaussian_model(2, 2), &data, &cfg(0.5)).unwrap();
        // Starve component 1 of all mass.
        for i in 0..resp.unlabelled_z_hat.rows() {
            resp.unlabelled_z_hat[(i, 0)] = 1.0;
            resp.unlabelled_z_hat[(i, 1)] = 0.0;
        }
        for i in 0..resp.labelled_z_hat.rows() {
            resp.labelled_z_hat.row_mut(i).copy_from_slice(&[1.0, 0.0]);
        }
        assert!(matches!(
            m_step_gaussian(&data, &resp, &cfg(0.5), &structure("UUUU")),
            Err(Error::DegenerateComponent { component: 1 })
        ));
    }

    #[test]
    fn unit_scale_weights_match_gaussian_updates() {
        // In the Gaussian limit (huge ν, so ŵ ≈ 1) the conditional
        // maximization formulas collapse to the Gaussian M-step. One
        // component keeps the intermediate E-step from moving ẑ, so the
        // comparison is exact up to the 1/ν scale-weight perturbation.
        let mut rng = Rng::seed_from(8);
        let data = random_dataset(&mut rng, 3, 12, 2, 1);
        let prev = MixtureModel {
            family: Family::StudentT,
            weights: vec![1.0],
            locations: vec![vec![0.5, -0.5]],
            scales: vec![Mat::identity(2)],
            dof: Some(vec![1e9]),
            structure: structure("UUUU"),
        };
        let mut fit_cfg = cfg(0.5);
        fit_cfg.nu_bracket.hi = 4e9;
        let resp_t = e_step(&prev, &data, &fit_cfg).unwrap();
        let (t_model, _, _) = cm_steps_t(&data, &resp_t, &prev, &fit_cfg).unwrap();

        let gauss_prev = MixtureModel {
            family: Family::Gaussian,
            weights: vec![1.0],
            locations: vec![vec![0.5, -0.5]],
            scales: vec![Mat::identity(2)],
            dof: None,
            structure: structure("UUUU"),
        };
        let resp_g = e_step(&gauss_prev, &data, &fit_cfg).unwrap();
        let g_model = m_step_gaussian(&data, &resp_g, &fit_cfg, &structure("UUUU")).unwrap();

        assert!((t_model.weights[0] - g_model.weights[0]).abs() < 1e-8);
        for (a, b) in t_model.locations[0].iter().zip(&g_model.locations[0]) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(t_model.scales[0].max_abs_diff(&g_model.scales[0]) < 1e-5);
    }

    #[test]
    fn mixing_weights_sum_to_one_on_random_inputs() {
        let mut rng = Rng::seed_from(9);
        for _ in 0..10 {
            let data = random_dataset(&mut rng, 4, 10, 2, 2);
            let prev = MixtureModel {
                family: Family::StudentT,
                weights: vec![0.4, 0.6],
                locations: vec![vec![0.0, 0.0], vec![3.0, 3.0]],
                scales: vec![Mat::identity(2), Mat::identity(2)],
                dof: Some(vec![10.0, 10.0]),
                structure: structure("UUUU"),
            };
            let resp = e_step(&prev, &data, &cfg(0.4)).unwrap();
            let (model, _, _) = cm_steps_t(&data, &resp, &prev, &cfg(0.4)).unwrap();
            let sum: f64 = model.weights.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nu_solution_matches_grid_scan() {
        // Synthetic sufficient statistics: pick a constant, solve, then
        // confirm the root against a 1e-4-step scan for the sign change.
        let fit_cfg = cfg(0.5);
        for &constant in &[-0.12, -0.3] {
            let (nu, boundary) = solve_nu(constant, &fit_cfg);
            assert!(!boundary, "constant {constant} should be interior");
            let mut scan = 2.0;
            let mut found = None;
            while scan < 200.0 {
                let here = dof_equation(scan, constant);
                let next = dof_equation(scan + 1e-4, constant);
                if here >= 0.0 && next < 0.0 {
                    found = Some(scan);
                    break;
                }
                scan += 1e-4;
            }
            let grid_root = found.expect("grid scan must find the sign change");
            assert!(
                (nu - grid_root).abs() < 1e-3,
                "constant {constant}: solver {nu} vs grid {grid_root}"
            );
        }
    }

    #[test]
    fn nu_boundary_is_adopted_with_flag() {
        let fit_cfg = cfg(0.5);
        // Strongly negative constant drives the root below the bracket.
        let (nu_lo, hit_lo) = solve_nu(-5.0, &fit_cfg);
        assert_eq!(nu_lo, fit_cfg.nu_bracket.lo);
        assert!(hit_lo);
        // Positive constant pushes it above.
        let (nu_hi, hit_hi) = solve_nu(0.5, &fit_cfg);
        assert_eq!(nu_hi, fit_cfg.nu_bracket.hi);
        assert!(hit_hi);
    }
}
