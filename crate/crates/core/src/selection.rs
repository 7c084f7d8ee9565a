//! Weight-grid search and model-then-weight selection.
//!
//! Each candidate weight gets its own independently seeded fit; every
//! criterion is evaluated on every fit and selection happens afterwards as
//! a pure function of the stored table, so a report can always be re-scored
//! without refitting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    ari, classification_criterion, information_criterion, scatter_criterion,
    scatter_decomposition, ClassificationCriterion, InformationCriterion, Partition,
    ScatterCriterion,
};
use crate::em::{fit, FitConfig, FitResult};
use crate::error::{Error, Result};
use crate::model::{DataSet, Family};
use crate::numerics::linalg::Mat;
use crate::parsimonious::{total_param_count, CovarianceStructure};

/// Ordered candidate weights in [0, 1].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightGrid {
    alphas: Vec<f64>,
}

impl WeightGrid {
    pub fn new(mut alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::domain("weight grid is empty"));
        }
        if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::domain("weights must lie in [0, 1]"));
        }
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        alphas.dedup();
        Ok(WeightGrid { alphas })
    }

    /// The candidate set {0, 0.1, …, 1.0}.
    pub fn eleven() -> Self {
        WeightGrid {
            alphas: (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }
}

impl Default for WeightGrid {
    fn default() -> Self {
        WeightGrid::eleven()
    }
}

/// Which rows feed the partition-based scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointSet {
    All,
    Unlabelled,
}

/// Direction for selecting by the U criterion; the published rule is max,
/// even though U = 0 means no uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UDirection {
    Max,
    Min,
}

/// Scoring options shared by selection and the experiment harness.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScoringConfig {
    /// Rows entering the scatter matrices. Labelled rows use their known
    /// classes, not their posterior argmax.
    pub scatter_points: PointSet,
    /// Rows entering ARI.
    pub ari_points: PointSet,
    pub u_direction: UDirection,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            scatter_points: PointSet::All,
            ari_points: PointSet::All,
            u_direction: UDirection::Max,
        }
    }
}

impl ScoringConfig {
    pub fn with_ari_points(mut self, points: PointSet) -> Self {
        self.ari_points = points;
        self
    }
}

/// All criterion values for one fit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CriterionValues {
    pub bic: f64,
    pub icl: f64,
    pub entropy: f64,
    pub alt_entropy: f64,
    pub uncertainty: f64,
    pub tr_w: f64,
    pub det_w: f64,
}

/// Criterion names as they appear in CSV headers and CLI flags.
pub const CRITERION_NAMES: [&str; 8] = ["BIC", "ICL", "E", "A", "U", "trW", "detW", "ARI"];

impl CriterionValues {
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "BIC" => Some(self.bic),
            "ICL" => Some(self.icl),
            "E" => Some(self.entropy),
            "A" => Some(self.alt_entropy),
            "U" => Some(self.uncertainty),
            "trW" => Some(self.tr_w),
            "detW" => Some(self.det_w),
            _ => None,
        }
    }
}

/// One fitted grid point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitRecord {
    pub alpha: f64,
    pub n_groups: usize,
    pub structure: String,
    pub seed: u64,
    pub converged: bool,
    pub n_iterations: usize,
    pub loglik: f64,
    pub criteria: Option<CriterionValues>,
    pub ari: Option<f64>,
    /// Set when the fit itself failed; such rows never win selection.
    pub error: Option<String>,
    /// Winner of the per-α model choice in a two-stage procedure.
    pub selected_for_alpha: bool,
}

/// Grid-search output: the full table plus the chosen weight per criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelectionReport {
    pub records: Vec<FitRecord>,
    /// (criterion name, chosen α) pairs; only criteria with at least one
    /// successful fit appear.
    pub chosen_alpha: Vec<(String, f64)>,
    /// Model choice of a two-stage procedure at its chosen weight.
    pub chosen_model: Option<(usize, String)>,
    pub procedure: Option<u8>,
}

/// Deterministic seed offset for a candidate weight: position of α in
/// 1/10000 units, so a grid point's fit does not depend on which other
/// grid points are present (α = k/10 maps to 1000 k).
pub fn alpha_seed_offset(alpha: f64) -> u64 {
    (alpha * 10_000.0).round() as u64
}

/// Truth labels in the stacked row order of the dataset being fitted.
#[derive(Clone, Debug)]
pub struct TruthLabels {
    pub classes: Vec<usize>,
    pub n_groups: usize,
}

/// Scores one fit: information criteria, uncertainty criteria, scatter
/// criteria and (when truth is supplied) the ARI.
///
/// Partition-based scores use the MAP partition with labelled rows pinned
/// to their known classes. A cluster-analysis fit (α = 0) never saw the
/// labelled block, so its component indices are arbitrary relative to the
/// class indices; scoring first aligns them by majority vote of the
/// labelled rows' posterior argmax under the fitted model. That alignment
/// is a scoring-time step only and keeps every criterion comparable across
/// the whole weight grid (and invariant under component relabeling).
pub fn evaluate_fit(
    data: &DataSet,
    result: &FitResult,
    truth: Option<&TruthLabels>,
    scoring: &ScoringConfig,
    alpha: f64,
) -> Result<(CriterionValues, Option<f64>)> {
    let g = result.model.n_groups();
    let p = data.dim();
    let params = total_param_count(
        result.model.family == Family::StudentT,
        &result.model.structure,
        g,
        p,
    );
    let bic = information_criterion(InformationCriterion::Bic, result, data, params);
    let icl = information_criterion(InformationCriterion::Icl, result, data, params);
    let resp = &result.responsibilities;
    let entropy = classification_criterion(ClassificationCriterion::Entropy, resp);
    let alt_entropy = classification_criterion(ClassificationCriterion::AlternativeEntropy, resp);
    let uncertainty = classification_criterion(ClassificationCriterion::Uncertainty, resp);

    let full = aligned_map_partition(data, result, alpha)?;
    let n1 = data.n_labelled();
    let (x, partition) = match scoring.scatter_points {
        PointSet::All => (
            stacked_features(data),
            Partition::new(full.clone(), g)?,
        ),
        PointSet::Unlabelled => (
            data.unlabelled_x().clone(),
            Partition::new(full[n1..].to_vec(), g)?,
        ),
    };
    let decomposition = scatter_decomposition(&x, &partition)?;
    let tr_w = scatter_criterion(ScatterCriterion::TraceW, &decomposition);
    let det_w = scatter_criterion(ScatterCriterion::DetW, &decomposition);

    let ari_value = match truth {
        None => None,
        Some(t) => {
            let (predicted, reference) = match scoring.ari_points {
                PointSet::All => (full.clone(), t.classes.clone()),
                PointSet::Unlabelled => (full[n1..].to_vec(), t.classes[n1..].to_vec()),
            };
            let predicted = Partition::new(predicted, g)?;
            let reference = Partition::new(reference, t.n_groups.max(g))?;
            Some(ari(&predicted, &reference)?)
        }
    };

    Ok((
        CriterionValues {
            bic,
            icl,
            entropy,
            alt_entropy,
            uncertainty,
            tr_w,
            det_w,
        },
        ari_value,
    ))
}

/// The fit's MAP partition; at α = 0 the unlabelled entries are relabelled
/// so the model's components line up with the labelled class indices.
fn aligned_map_partition(data: &DataSet, result: &FitResult, alpha: f64) -> Result<Vec<usize>> {
    let mut full = result.map_partition.clone();
    let n1 = data.n_labelled();
    if alpha != 0.0 || n1 == 0 {
        return Ok(full);
    }
    let g = result.model.n_groups();
    let cache = crate::model::ComponentCache::build(&result.model)?;
    let mut votes = vec![vec![0usize; g]; g];
    let mut terms = vec![0.0; g];
    for i in 0..n1 {
        let x = data.labelled_x().row(i);
        for k in 0..g {
            let delta = cache.delta(k, x, &result.model.locations[k])?;
            terms[k] = cache.log_weights[k] + cache.log_density_from_delta(k, delta);
        }
        let component = crate::em::argmax_row(&terms);
        let class = data.labelled_class(i);
        if class < g {
            votes[component][class] += 1;
        }
    }
    let relabel = crate::em::greedy_class_alignment(&votes);
    for entry in full.iter_mut().skip(n1) {
        *entry = relabel[*entry];
    }
    Ok(full)
}

fn stacked_features(data: &DataSet) -> Mat {
    let mut rows = Vec::with_capacity(data.n_total());
    for i in 0..data.n_total() {
        rows.push(data.row(i).to_vec());
    }
    Mat::from_rows(&rows).expect("consistent row widths")
}

/// Fits every candidate weight and scores every criterion.
///
/// Per-α seeds derive as `cfg.seed + alpha_seed_offset(α)`; a failed fit is
/// recorded, excluded from selection, and the search continues.
#[allow(clippy::too_many_arguments)]
pub fn weight_grid_search(
    data: &DataSet,
    n_groups: usize,
    family: Family,
    structure: &CovarianceStructure,
    grid: &WeightGrid,
    cfg: &FitConfig,
    truth: Option<&TruthLabels>,
    scoring: &ScoringConfig,
) -> SelectionReport {
    let records: Vec<FitRecord> = grid
        .alphas()
        .par_iter()
        .map(|&alpha| {
            fit_one_record(data, n_groups, family, structure, cfg, alpha, truth, scoring)
        })
        .collect();
    let chosen_alpha = choose_per_criterion(&records, scoring);
    SelectionReport {
        records,
        chosen_alpha,
        chosen_model: None,
        procedure: None,
    }
}

#[allow(clippy::too_many_arguments)]
fn fit_one_record(
    data: &DataSet,
    n_groups: usize,
    family: Family,
    structure: &CovarianceStructure,
    cfg: &FitConfig,
    alpha: f64,
    truth: Option<&TruthLabels>,
    scoring: &ScoringConfig,
) -> FitRecord {
    let seed = cfg.seed.wrapping_add(alpha_seed_offset(alpha));
    let run_cfg = match cfg.with_seed(seed).with_alpha(alpha) {
        Ok(c) => c,
        Err(e) => {
            return FitRecord {
                alpha,
                n_groups,
                structure: structure.code(),
                seed,
                converged: false,
                n_iterations: 0,
                loglik: f64::NAN,
                criteria: None,
                ari: None,
                error: Some(e.to_string()),
                selected_for_alpha: false,
            }
        }
    };
    match fit(data, n_groups, family, structure, &run_cfg)
        .and_then(|result| {
            let scored = evaluate_fit(data, &result, truth, scoring, alpha)?;
            Ok((result, scored))
        }) {
        Ok((result, (criteria, ari_value))) => FitRecord {
            alpha,
            n_groups,
            structure: structure.code(),
            seed,
            converged: result.converged,
            n_iterations: result.n_iterations,
            loglik: result.final_loglik(),
            criteria: Some(criteria),
            ari: ari_value,
            error: None,
            selected_for_alpha: false,
        },
        Err(e) => FitRecord {
            alpha,
            n_groups,
            structure: structure.code(),
            seed,
            converged: false,
            n_iterations: 0,
            loglik: f64::NAN,
            criteria: None,
            ari: None,
            error: Some(e.to_string()),
            selected_for_alpha: false,
        },
    }
}

/// Extremum direction per criterion, honoring the configured U rule.
fn criterion_prefers_max(name: &str, scoring: &ScoringConfig) -> bool {
    match name {
        "BIC" | "ICL" | "E" | "A" | "ARI" => true,
        "U" => scoring.u_direction == UDirection::Max,
        "trW" | "detW" => false,
        _ => true,
    }
}

/// Chooses the best α per criterion from a stored table. Pure function of
/// the records: ties go to the smallest α.
pub fn choose_per_criterion(
    records: &[FitRecord],
    scoring: &ScoringConfig,
) -> Vec<(String, f64)> {
    let mut chosen = Vec::new();
    for name in CRITERION_NAMES {
        let mut best: Option<(f64, f64)> = None;
        for r in records {
            let value = if name == "ARI" {
                match r.ari {
                    Some(v) => v,
                    None => continue,
                }
            } else {
                match &r.criteria {
                    Some(c) => c.get(name).unwrap(),
                    None => continue,
                }
            };
            let better = match best {
                None => true,
                Some((_, best_value)) => {
                    if criterion_prefers_max(name, scoring) {
                        value > best_value
                    } else {
                        value < best_value
                    }
                }
            };
            if better {
                best = Some((r.alpha, value));
            }
        }
        if let Some((alpha, _)) = best {
            chosen.push((name.to_string(), alpha));
        }
    }
    chosen
}

/// Two-stage selection over (G, structure) candidates and the weight grid.
///
/// Procedure 1 picks the model per weight by the largest BIC, then the
/// weight by the smallest det(W) among those per-weight winners. Procedure 2
/// uses the smallest det(W) for both stages. The model is re-chosen at every
/// candidate weight.
#[allow(clippy::too_many_arguments)]
pub fn select_model_then_weight(
    procedure: u8,
    data: &DataSet,
    family: Family,
    group_range: &[usize],
    structures: &[CovarianceStructure],
    grid: &WeightGrid,
    cfg: &FitConfig,
    truth: Option<&TruthLabels>,
    scoring: &ScoringConfig,
) -> Result<SelectionReport> {
    if !(procedure == 1 || procedure == 2) {
        return Err(Error::domain(format!(
            "procedure must be 1 or 2, got {procedure}"
        )));
    }
    if group_range.is_empty() || structures.is_empty() {
        return Err(Error::domain("empty model candidate set"));
    }
    if let Some(bad) = structures.iter().find(|s| !s.is_implemented()) {
        return Err(Error::Unsupported(bad.code()));
    }

    let tasks: Vec<(f64, usize, CovarianceStructure)> = grid
        .alphas()
        .iter()
        .flat_map(|&alpha| {
            group_range
                .iter()
                .flat_map(move |&g| structures.iter().map(move |&s| (alpha, g, s)))
        })
        .collect();

    let mut records: Vec<FitRecord> = tasks
        .par_iter()
        .map(|&(alpha, g, structure)| {
            let padded;
            let fit_data = if g > data.n_indicator_groups() {
                padded = data
                    .pad_groups(g)
                    .expect("g exceeds the labelled class count");
                &padded
            } else {
                data
            };
            fit_one_record(fit_data, g, family, &structure, cfg, alpha, truth, scoring)
        })
        .collect();

    // Stage one: the model winner at each weight.
    let model_criterion = if procedure == 1 { "BIC" } else { "detW" };
    let prefers_max = criterion_prefers_max(model_criterion, scoring);
    for &alpha in grid.alphas() {
        let mut best: Option<(usize, f64)> = None;
        for (idx, r) in records.iter().enumerate() {
            if r.alpha != alpha {
                continue;
            }
            if let Some(c) = &r.criteria {
                let value = c.get(model_criterion).unwrap();
                let better = match best {
                    None => true,
                    Some((_, best_value)) => {
                        if prefers_max {
                            value > best_value
                        } else {
                            value < best_value
                        }
                    }
                };
                if better {
                    best = Some((idx, value));
                }
            }
        }
        if let Some((idx, _)) = best {
            records[idx].selected_for_alpha = true;
        }
    }

    // Stage two: the weight with the smallest det(W) among the winners.
    let winners: Vec<&FitRecord> = records.iter().filter(|r| r.selected_for_alpha).collect();
    let mut chosen: Option<(f64, usize, String, f64)> = None;
    for r in &winners {
        let det_w = r.criteria.as_ref().unwrap().det_w;
        let better = match &chosen {
            None => true,
            Some((_, _, _, best)) => det_w < *best,
        };
        if better {
            chosen = Some((r.alpha, r.n_groups, r.structure.clone(), det_w));
        }
    }

    let winner_records: Vec<FitRecord> = winners.into_iter().cloned().collect();
    let chosen_alpha = choose_per_criterion(&winner_records, scoring);
    Ok(SelectionReport {
        records,
        chosen_alpha,
        chosen_model: chosen.map(|(_, g, s, _)| (g, s)),
        procedure: Some(procedure),
    })
}

/// Report from scanning candidate numbers of groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupCountReport {
    pub chosen_h: usize,
    pub records: Vec<FitRecord>,
    pub criterion: String,
}

/// Fits H = `h_range` groups (labels zero-padded to H columns) and keeps
/// the H with the best information criterion; ties go to the smallest H.
#[allow(clippy::too_many_arguments)]
pub fn select_num_groups(
    data: &DataSet,
    h_range: &[usize],
    family: Family,
    structure: &CovarianceStructure,
    cfg: &FitConfig,
    criterion: InformationCriterion,
    truth: Option<&TruthLabels>,
    scoring: &ScoringConfig,
) -> Result<GroupCountReport> {
    let g_labelled = data.n_indicator_groups();
    if h_range.is_empty() {
        return Err(Error::domain("empty group-count range"));
    }
    if let Some(&bad) = h_range.iter().find(|&&h| h < g_labelled) {
        return Err(Error::domain(format!(
            "H = {bad} is below the {g_labelled} labelled classes"
        )));
    }
    let records: Vec<FitRecord> = h_range
        .par_iter()
        .map(|&h| {
            let padded = data.pad_groups(h);
            match padded {
                Ok(d) => fit_one_record(
                    &d,
                    h,
                    family,
                    structure,
                    cfg,
                    cfg.weight.alpha,
                    truth,
                    scoring,
                ),
                Err(e) => FitRecord {
                    alpha: cfg.weight.alpha,
                    n_groups: h,
                    structure: structure.code(),
                    seed: cfg.seed,
                    converged: false,
                    n_iterations: 0,
                    loglik: f64::NAN,
                    criteria: None,
                    ari: None,
                    error: Some(e.to_string()),
                    selected_for_alpha: false,
                },
            }
        })
        .collect();

    let name = match criterion {
        InformationCriterion::Bic => "BIC",
        InformationCriterion::Icl => "ICL",
    };
    let mut best: Option<(usize, f64)> = None;
    for r in &records {
        if let Some(c) = &r.criteria {
            let value = c.get(name).unwrap();
            let better = match best {
                None => true,
                Some((_, b)) => value > b,
            };
            if better {
                best = Some((r.n_groups, value));
            }
        }
    }
    let chosen_h = best
        .map(|(h, _)| h)
        .ok_or_else(|| Error::FitFailed {
            causes: records
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.error.clone().map(|e| (i, e)))
                .collect(),
        })?;
    Ok(GroupCountReport {
        chosen_h,
        records,
        criterion: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightConfig;
    use crate::numerics::Rng;

    fn structure(code: &str) -> CovarianceStructure {
        CovarianceStructure::parse(code).unwrap()
    }

    fn blobs(rng: &mut Rng, n_per: usize, gap: f64, n_groups: usize) -> (DataSet, TruthLabels) {
        let mut lx = Vec::new();
        let mut labels = Vec::new();
        let mut ux = Vec::new();
        let mut truth_labelled = Vec::new();
        let mut truth_unlabelled = Vec::new();
        for g in 0..n_groups {
            for i in 0..n_per {
                let point = vec![
                    gap * g as f64 + 0.6 * rng.next_standard_normal(),
                    gap * g as f64 + 0.6 * rng.next_standard_normal(),
                ];
                if i % 2 == 0 {
                    labels.push(g);
                    truth_labelled.push(g);
                    lx.push(point);
                } else {
                    truth_unlabelled.push(g);
                    ux.push(point);
                }
            }
        }
        let data = DataSet::from_labels(
            Mat::from_rows(&lx).unwrap(),
            &labels,
            n_groups,
            Mat::from_rows(&ux).unwrap(),
        )
        .unwrap();
        let mut classes = truth_labelled;
        classes.extend(truth_unlabelled);
        (
            data,
            TruthLabels {
                classes,
                n_groups,
            },
        )
    }

    fn base_cfg(seed: u64) -> FitConfig {
        let mut cfg = FitConfig::new(WeightConfig::original(0.5).unwrap()).with_seed(seed);
        cfg.n_starts = 10;
        cfg
    }

    #[test]
    fn singleton_grid_reduces_to_plain_fit() {
        let mut rng = Rng::seed_from(41);
        let (data, truth) = blobs(&mut rng, 16, 7.0, 2);
        let grid = WeightGrid::new(vec![0.5]).unwrap();
        let report = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &grid,
            &base_cfg(5),
            Some(&truth),
            &ScoringConfig::default(),
        );
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.records[0].alpha, 0.5);
        assert!(report.records[0].error.is_none());
    }

    #[test]
    fn separated_blobs_every_weight_is_perfect() {
        let mut rng = Rng::seed_from(42);
        let (data, truth) = blobs(&mut rng, 20, 10.0, 2);
        let report = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &WeightGrid::eleven(),
            &base_cfg(6),
            Some(&truth),
            &ScoringConfig::default(),
        );
        for r in &report.records {
            assert_eq!(r.ari, Some(1.0), "alpha {}", r.alpha);
        }
        // det(W)-chosen weight therefore reaches ARI 1 too.
        let det_alpha = report
            .chosen_alpha
            .iter()
            .find(|(name, _)| name == "detW")
            .unwrap()
            .1;
        let winner = report
            .records
            .iter()
            .find(|r| r.alpha == det_alpha)
            .unwrap();
        assert_eq!(winner.ari, Some(1.0));
    }

    #[test]
    fn per_alpha_ari_matches_recomputation_from_partitions() {
        // Self-consistency: rerun the fit at one grid α and recompute the
        // ARI from its stored partition.
        let mut rng = Rng::seed_from(43);
        let (data, truth) = blobs(&mut rng, 14, 5.0, 2);
        let scoring = ScoringConfig::default();
        let grid = WeightGrid::new(vec![0.3, 0.6]).unwrap();
        let cfg = base_cfg(9);
        let report = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &grid,
            &cfg,
            Some(&truth),
            &scoring,
        );
        for record in &report.records {
            let run_cfg = cfg
                .with_seed(record.seed)
                .with_alpha(record.alpha)
                .unwrap();
            let refit = fit(&data, 2, Family::Gaussian, &structure("UUUU"), &run_cfg).unwrap();
            let (_, ari_again) =
                evaluate_fit(&data, &refit, Some(&truth), &scoring, record.alpha).unwrap();
            assert_eq!(record.ari, ari_again);
        }
    }

    #[test]
    fn grid_points_are_independent_of_the_rest_of_the_grid() {
        let mut rng = Rng::seed_from(44);
        let (data, truth) = blobs(&mut rng, 12, 6.0, 2);
        let cfg = base_cfg(13);
        let full = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &WeightGrid::eleven(),
            &cfg,
            Some(&truth),
            &ScoringConfig::default(),
        );
        let single = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &WeightGrid::new(vec![0.5]).unwrap(),
            &cfg,
            Some(&truth),
            &ScoringConfig::default(),
        );
        let from_full = full.records.iter().find(|r| r.alpha == 0.5).unwrap();
        let alone = &single.records[0];
        assert_eq!(from_full.seed, alone.seed);
        assert_eq!(from_full.loglik.to_bits(), alone.loglik.to_bits());
    }

    #[test]
    fn reselection_from_stored_table_is_stable() {
        let mut rng = Rng::seed_from(45);
        let (data, truth) = blobs(&mut rng, 12, 4.0, 2);
        let scoring = ScoringConfig::default();
        let report = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &WeightGrid::eleven(),
            &base_cfg(21),
            Some(&truth),
            &scoring,
        );
        assert_eq!(
            report.chosen_alpha,
            choose_per_criterion(&report.records, &scoring)
        );
        // Chosen α attains the stored extremum per criterion.
        for (name, alpha) in &report.chosen_alpha {
            let chosen_value = report
                .records
                .iter()
                .find(|r| r.alpha == *alpha)
                .and_then(|r| {
                    if name == "ARI" {
                        r.ari
                    } else {
                        r.criteria.as_ref().map(|c| c.get(name).unwrap())
                    }
                })
                .unwrap();
            for r in &report.records {
                let value = if name == "ARI" {
                    match r.ari {
                        Some(v) => v,
                        None => continue,
                    }
                } else {
                    match &r.criteria {
                        Some(c) => c.get(name).unwrap(),
                        None => continue,
                    }
                };
                if criterion_prefers_max(name, &scoring) {
                    assert!(chosen_value >= value);
                } else {
                    assert!(chosen_value <= value);
                }
            }
        }
    }

    #[test]
    fn two_stage_with_single_candidate_matches_grid_search_choice() {
        let mut rng = Rng::seed_from(46);
        let (data, truth) = blobs(&mut rng, 12, 6.0, 2);
        let cfg = base_cfg(31);
        let scoring = ScoringConfig::default();
        let grid = WeightGrid::new(vec![0.2, 0.5, 0.8]).unwrap();
        let p1 = select_model_then_weight(
            1,
            &data,
            Family::Gaussian,
            &[2],
            &[structure("UUUU")],
            &grid,
            &cfg,
            Some(&truth),
            &scoring,
        )
        .unwrap();
        let p2 = select_model_then_weight(
            2,
            &data,
            Family::Gaussian,
            &[2],
            &[structure("UUUU")],
            &grid,
            &cfg,
            Some(&truth),
            &scoring,
        )
        .unwrap();
        // One candidate model: both procedures choose the same weight.
        let det1 = p1.chosen_alpha.iter().find(|(n, _)| n == "detW").unwrap();
        let det2 = p2.chosen_alpha.iter().find(|(n, _)| n == "detW").unwrap();
        assert_eq!(det1.1, det2.1);

        let direct = weight_grid_search(
            &data,
            2,
            Family::Gaussian,
            &structure("UUUU"),
            &grid,
            &cfg,
            Some(&truth),
            &scoring,
        );
        let det_direct = direct
            .chosen_alpha
            .iter()
            .find(|(n, _)| n == "detW")
            .unwrap();
        assert_eq!(det1.1, det_direct.1);
    }

    #[test]
    fn bic_prefers_spherical_on_spherical_data() {
        // Well-separated spherical blobs: the 2-parameter shared spherical
        // model beats the fully unconstrained one on BIC.
        let mut rng = Rng::seed_from(47);
        let (data, truth) = blobs(&mut rng, 30, 9.0, 2);
        let cfg = base_cfg(41);
        let report = select_model_then_weight(
            1,
            &data,
            Family::Gaussian,
            &[2],
            &[structure("UUUU"), structure("CIIC")],
            &WeightGrid::new(vec![0.5]).unwrap(),
            &cfg,
            Some(&truth),
            &ScoringConfig::default(),
        )
        .unwrap();
        let winner = report
            .records
            .iter()
            .find(|r| r.selected_for_alpha)
            .unwrap();
        assert_eq!(winner.structure, "CIIC");
    }

    #[test]
    fn group_count_scan_recovers_extra_group() {
        // Three true groups, labels covering two: BIC should prefer H = 3.
        let mut rng = Rng::seed_from(48);
        let (full, _) = blobs(&mut rng, 20, 9.0, 3);
        // Strip group-2 labels: move those labelled rows into the unlabelled block.
        let mut lx = Vec::new();
        let mut labels = Vec::new();
        let mut ux = Vec::new();
        for i in 0..full.n_labelled() {
            let class = full.labelled_class(i);
            if class < 2 {
                lx.push(full.labelled_x().row(i).to_vec());
                labels.push(class);
            } else {
                ux.push(full.labelled_x().row(i).to_vec());
            }
        }
        for i in 0..full.n_unlabelled() {
            ux.push(full.unlabelled_x().row(i).to_vec());
        }
        let data = DataSet::from_labels(
            Mat::from_rows(&lx).unwrap(),
            &labels,
            2,
            Mat::from_rows(&ux).unwrap(),
        )
        .unwrap();
        let report = select_num_groups(
            &data,
            &[2, 3],
            Family::Gaussian,
            &structure("UUUU"),
            &base_cfg(51),
            InformationCriterion::Bic,
            None,
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(report.chosen_h, 3);
        // Padded rows still sum to one.
        let padded = data.pad_groups(3).unwrap();
        for i in 0..padded.n_labelled() {
            assert_eq!(padded.labelled_z().row(i).iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn trivial_h_range_returns_the_labelled_count() {
        let mut rng = Rng::seed_from(49);
        let (data, _) = blobs(&mut rng, 10, 8.0, 2);
        let report = select_num_groups(
            &data,
            &[2],
            Family::Gaussian,
            &structure("UUUU"),
            &base_cfg(61),
            InformationCriterion::Bic,
            None,
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(report.chosen_h, 2);
    }
}
