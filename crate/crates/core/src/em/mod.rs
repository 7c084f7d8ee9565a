//! Weighted EM (Gaussian) and multicycle ECM (t) fitting.
//!
//! A fit is initialized by restarted k-means, runs an initial maximization
//! to get a model, then alternates expectation and maximization steps until
//! the Aitken-accelerated stopping rule fires or the iteration budget runs
//! out. Restart seeds derive as `seed + restart_index`, so fits are fully
//! reproducible.

mod aitken;
mod kmeans;
mod steps;

pub use aitken::aitken_converged;
pub use kmeans::kmeans_init;
pub(crate) use kmeans::greedy_class_alignment;
pub use steps::{cm_steps_t, e_step, m_step_gaussian};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    weighted_observed_loglik, DataSet, Family, LikelihoodVariant, MixtureModel, Responsibilities,
    WeightConfig,
};
use crate::numerics::linalg::Mat;
use crate::numerics::roots::RootBracket;
use crate::parsimonious::CovarianceStructure;

/// Starting degrees of freedom for every t component (mid-bracket).
const INITIAL_NU: f64 = 50.0;

/// Knobs for a single fit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FitConfig {
    /// k-means restarts used for initialization.
    pub n_starts: usize,
    pub max_iterations: usize,
    pub aitken_epsilon: f64,
    /// Search interval for the degrees-of-freedom update.
    #[serde(skip, default = "default_nu_bracket")]
    pub nu_bracket: RootBracket,
    /// Share one ν across components regardless of the structure code.
    pub constrain_nu: bool,
    pub weight: WeightConfig,
    pub seed: u64,
}

fn default_nu_bracket() -> RootBracket {
    RootBracket {
        lo: 2.0,
        hi: 200.0,
        tolerance: 1e-6,
        max_iterations: 100,
    }
}

impl FitConfig {
    pub fn new(weight: WeightConfig) -> Self {
        FitConfig {
            n_starts: 50,
            max_iterations: 1000,
            aitken_epsilon: 1e-5,
            nu_bracket: default_nu_bracket(),
            constrain_nu: false,
            weight,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.weight = WeightConfig::new(alpha, self.weight.variant)?;
        Ok(self)
    }
}

/// A converged (or iteration-capped) fit.
#[derive(Clone, Debug)]
pub struct FitResult {
    pub model: MixtureModel,
    /// Model posteriors synchronized to the final parameters. At α = 0 the
    /// labelled block is outside the fit, so its rows are the known
    /// indicators and its scale-weight rows are a neutral 1.
    pub responsibilities: Responsibilities,
    /// Weighted observed log-likelihood after the initial maximization and
    /// after each iteration.
    pub loglik_trace: Vec<f64>,
    pub converged: bool,
    pub n_iterations: usize,
    /// Hard assignment per row in stacked order (labelled block first);
    /// labelled rows keep their known classes.
    pub map_partition: Vec<usize>,
    /// Components whose ν landed on a bracket endpoint on the last update.
    pub nu_at_boundary: bool,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn final_loglik(&self) -> f64 {
        *self.loglik_trace.last().expect("non-empty trace")
    }
}

/// Fits a `family` mixture with `n_groups` components under `structure`.
///
/// At α = 0 the labelled block is excluded from every computation (its
/// features are never read); the returned responsibilities and partition
/// still cover all rows, with labelled rows pinned to their known classes.
///
/// Initialization candidates are walked best-WCSS-first; a restart that
/// degenerates is discarded and the next distinct partition tried. When all
/// of them fail the per-restart causes are reported.
pub fn fit(
    data: &DataSet,
    n_groups: usize,
    family: Family,
    structure: &CovarianceStructure,
    cfg: &FitConfig,
) -> Result<FitResult> {
    if !structure.is_implemented() {
        return Err(Error::Unsupported(structure.code()));
    }
    if data.n_indicator_groups() > n_groups {
        return Err(Error::Dimension {
            expected: n_groups,
            found: data.n_indicator_groups(),
        });
    }
    let alpha = cfg.weight.alpha;
    let mut warnings = Vec::new();
    if alpha == 1.0 && data.n_labelled() < n_groups * (data.dim() + 1) {
        warnings.push(format!(
            "alpha = 1 with only {} labelled points for {} groups in {} dimensions is under-determined",
            data.n_labelled(),
            n_groups,
            data.dim(),
        ));
    }

    // Cluster analysis never reads labelled features.
    let reduced;
    let work: &DataSet = if alpha == 0.0 && data.n_labelled() > 0 {
        if data.n_unlabelled() == 0 {
            return Err(Error::domain("alpha = 0 requires unlabelled points"));
        }
        reduced = data.unlabelled_only()?;
        &reduced
    } else {
        data
    };

    let candidates = kmeans::kmeans_candidates(work, n_groups, cfg)?;
    let mut causes: Vec<(usize, String)> = Vec::new();
    for (restart, candidate) in candidates.iter().enumerate() {
        let init = kmeans::candidate_to_responsibilities(work, n_groups, candidate);
        match run_from(work, n_groups, family, structure, cfg, init) {
            Ok(run) => return Ok(finalize(data, work, cfg, run, warnings)),
            Err(e) => causes.push((restart, e.to_string())),
        }
    }
    Err(Error::FitFailed { causes })
}

struct EmRun {
    model: MixtureModel,
    trace: Vec<f64>,
    converged: bool,
    nu_at_boundary: bool,
}

fn initial_model(
    work: &DataSet,
    n_groups: usize,
    family: Family,
    structure: &CovarianceStructure,
    cfg: &FitConfig,
    init: &Responsibilities,
) -> Result<MixtureModel> {
    let base = m_step_gaussian(work, init, cfg, structure)?;
    Ok(match family {
        Family::Gaussian => base,
        Family::StudentT => MixtureModel {
            family: Family::StudentT,
            dof: Some(vec![INITIAL_NU; n_groups]),
            ..base
        },
    })
}

fn run_from(
    work: &DataSet,
    n_groups: usize,
    family: Family,
    structure: &CovarianceStructure,
    cfg: &FitConfig,
    init: Responsibilities,
) -> Result<EmRun> {
    let mut model = initial_model(work, n_groups, family, structure, cfg, &init)?;
    let mut trace = vec![weighted_observed_loglik(&model, work, &cfg.weight)?];
    let mut converged = false;
    let mut nu_at_boundary = false;

    for _ in 0..cfg.max_iterations {
        let resp = e_step(&model, work, cfg)?;
        match family {
            Family::Gaussian => {
                model = m_step_gaussian(work, &resp, cfg, structure)?;
            }
            Family::StudentT => {
                let (next, _refreshed, boundary) = cm_steps_t(work, &resp, &model, cfg)?;
                model = next;
                nu_at_boundary = boundary;
            }
        }
        trace.push(weighted_observed_loglik(&model, work, &cfg.weight)?);
        if aitken_converged(&trace, cfg.aitken_epsilon) {
            converged = true;
            break;
        }
    }

    Ok(EmRun {
        model,
        trace,
        converged,
        nu_at_boundary,
    })
}

/// Builds the public result: posteriors synchronized to the final model and
/// re-expanded to the full dataset when the fit ran on the unlabelled view.
fn finalize(
    data: &DataSet,
    work: &DataSet,
    cfg: &FitConfig,
    run: EmRun,
    mut warnings: Vec<String>,
) -> FitResult {
    // Reported responsibilities are genuine model posteriors regardless of
    // the estimation variant, so MAP partitions and uncertainty criteria
    // always refer to the fitted model itself.
    let mut sync_cfg = *cfg;
    sync_cfg.weight = WeightConfig {
        alpha: cfg.weight.alpha,
        variant: LikelihoodVariant::Original,
    };
    let resp_work = e_step(&run.model, work, &sync_cfg).expect("final model factorizes");

    let n_groups = run.model.n_groups();
    let resp = if work.n_labelled() == data.n_labelled() {
        resp_work
    } else {
        // α = 0 ran on the unlabelled view; restore labelled rows without
        // touching their features.
        let n1 = data.n_labelled();
        let mut labelled = Mat::zeros(n1, n_groups);
        for i in 0..n1 {
            labelled[(i, data.labelled_class(i))] = 1.0;
        }
        let w_hat = resp_work.w_hat.as_ref().map(|w_work| {
            let mut w = Mat::zeros(data.n_total(), n_groups);
            for i in 0..n1 {
                for g in 0..n_groups {
                    w[(i, g)] = 1.0;
                }
            }
            for i in 0..w_work.rows() {
                for g in 0..n_groups {
                    w[(n1 + i, g)] = w_work[(i, g)];
                }
            }
            w
        });
        Responsibilities {
            labelled_z_hat: labelled,
            unlabelled_z_hat: resp_work.unlabelled_z_hat,
            w_hat,
        }
    };

    if run.nu_at_boundary {
        warnings.push("degrees-of-freedom update hit the bracket boundary".to_string());
    }

    let map_partition = (0..data.n_total())
        .map(|i| {
            let row = resp.z_row(i);
            argmax_row(row)
        })
        .collect();

    FitResult {
        n_iterations: run.trace.len() - 1,
        model: run.model,
        responsibilities: resp,
        loglik_trace: run.trace,
        converged: run.converged,
        map_partition,
        nu_at_boundary: run.nu_at_boundary,
        warnings,
    }
}

/// Index of the largest entry; the lowest index wins exact ties.
pub(crate) fn argmax_row(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}
