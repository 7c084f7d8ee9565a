//! Synthetic-data generators and the replication harness.
//!
//! Scenario constants are fixed: a two-group bivariate t scenario with a
//! heavy-tailed correlated first group (ν₁ = 3, off-diagonal 0.7) and a
//! near-Gaussian second group (ν₂ = 70) at vertical separation Δ; a
//! three-group extension (third group at (2,2), ν₃ = 10, off-diagonal
//! −0.7); and a two-group Gaussian analogue. Everything is seeded and
//! bit-reproducible: replication work may run in parallel, but seeds are
//! derived up front and aggregation is an index-ordered pairwise reduction.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em::FitConfig;
use crate::error::{Error, Result};
use crate::model::{DataSet, Family};
use crate::numerics::linalg::Mat;
use crate::numerics::sample::{sample, Distribution};
use crate::numerics::{mean, sample_sd, Rng};
use crate::parsimonious::CovarianceStructure;
use crate::selection::{
    weight_grid_search, FitRecord, ScoringConfig, TruthLabels, WeightGrid,
};

/// What to simulate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Scenario {
    /// Two bivariate t groups separated by Δ in the second coordinate.
    TwoGroupT { delta: f64, n_per_group: usize },
    /// Three bivariate t groups (the two-group scenario at Δ = 2 plus a
    /// third group).
    ThreeGroupT { n_per_group: usize },
    /// Gaussian analogue of the two-group scenario.
    TwoGroupGaussian { delta: f64, n_per_group: usize },
    /// Fully labelled ground truth read from a CSV file.
    FromFile {
        path: PathBuf,
        label_column: String,
    },
}

impl Scenario {
    pub fn two_group_t(delta: f64) -> Self {
        Scenario::TwoGroupT {
            delta,
            n_per_group: 100,
        }
    }

    pub fn three_group_t() -> Self {
        Scenario::ThreeGroupT { n_per_group: 100 }
    }

    pub fn two_group_gaussian(delta: f64) -> Self {
        Scenario::TwoGroupGaussian {
            delta,
            n_per_group: 150,
        }
    }

    /// Separation values the synthetic scenarios accept.
    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::TwoGroupT { delta, .. } | Scenario::TwoGroupGaussian { delta, .. } => {
                let rounded = delta.round();
                if (delta - rounded).abs() > 1e-12 || !(1.0..=5.0).contains(&rounded) {
                    return Err(Error::domain(format!(
                        "delta must be an integer in 1..=5, got {delta}"
                    )));
                }
            }
            Scenario::ThreeGroupT { .. } | Scenario::FromFile { .. } => {}
        }
        Ok(())
    }

    pub fn family_hint(&self) -> Family {
        match self {
            Scenario::TwoGroupGaussian { .. } => Family::Gaussian,
            _ => Family::StudentT,
        }
    }
}

/// Scale matrix of the correlated first group.
fn correlated_scale(rho: f64) -> Mat {
    Mat::from_vec(2, 2, vec![1.0, rho, rho, 1.0]).expect("2x2")
}

/// Ground-truth data: features plus the generating group per row.
#[derive(Clone, Debug)]
pub struct GeneratedData {
    pub features: Mat,
    pub truth: Vec<usize>,
    pub n_groups: usize,
}

/// Draws one dataset. Deterministic given the generator state; rows come
/// out group by group.
pub fn generate(scenario: &Scenario, rng: &mut Rng) -> Result<GeneratedData> {
    scenario.validate()?;
    match scenario {
        Scenario::TwoGroupT {
            delta,
            n_per_group,
        } => {
            let groups = vec![
                Distribution::StudentT {
                    mean: vec![0.0, 0.0],
                    scale: correlated_scale(0.7),
                    dof: 3.0,
                },
                Distribution::StudentT {
                    mean: vec![0.0, *delta],
                    scale: Mat::identity(2),
                    dof: 70.0,
                },
            ];
            stack_groups(&groups, *n_per_group, rng)
        }
        Scenario::ThreeGroupT { n_per_group } => {
            let groups = vec![
                Distribution::StudentT {
                    mean: vec![0.0, 0.0],
                    scale: correlated_scale(0.7),
                    dof: 3.0,
                },
                Distribution::StudentT {
                    mean: vec![0.0, 2.0],
                    scale: Mat::identity(2),
                    dof: 70.0,
                },
                Distribution::StudentT {
                    mean: vec![2.0, 2.0],
                    scale: correlated_scale(-0.7),
                    dof: 10.0,
                },
            ];
            stack_groups(&groups, *n_per_group, rng)
        }
        Scenario::TwoGroupGaussian {
            delta,
            n_per_group,
        } => {
            let groups = vec![
                Distribution::Gaussian {
                    mean: vec![0.0, 0.0],
                    scale: correlated_scale(0.7),
                },
                Distribution::Gaussian {
                    mean: vec![0.0, *delta],
                    scale: Mat::identity(2),
                },
            ];
            stack_groups(&groups, *n_per_group, rng)
        }
        Scenario::FromFile { path, label_column } => {
            let table = crate::io::read_labelled_csv(path, label_column)?;
            let truth: Option<Vec<usize>> = table.labels.iter().copied().collect();
            let truth = truth.ok_or_else(|| Error::Io {
                message: "scenario file must label every row".to_string(),
                line: None,
            })?;
            Ok(GeneratedData {
                n_groups: table.n_classes(),
                features: table.features,
                truth,
            })
        }
    }
}

fn stack_groups(
    groups: &[Distribution],
    n_per_group: usize,
    rng: &mut Rng,
) -> Result<GeneratedData> {
    let mut rows = Vec::new();
    let mut truth = Vec::new();
    for (g, dist) in groups.iter().enumerate() {
        let block = sample(dist, n_per_group, rng)?;
        for i in 0..block.rows() {
            rows.push(block.row(i).to_vec());
            truth.push(g);
        }
    }
    Ok(GeneratedData {
        features: Mat::from_rows(&rows)?,
        truth,
        n_groups: groups.len(),
    })
}

/// A split dataset with its stacked-order truth.
#[derive(Clone, Debug)]
pub struct SplitData {
    pub dataset: DataSet,
    /// Truth class per stacked row (labelled block first).
    pub truth: TruthLabels,
    /// Classes with no labelled representative (the fit proceeds anyway).
    pub missing_label_classes: Vec<usize>,
}

/// Labels a uniformly random ⌊p·N/100⌋-subset and leaves the rest
/// unlabelled. Truth is retained for scoring only.
pub fn label_split(generated: &GeneratedData, percent: f64, rng: &mut Rng) -> Result<SplitData> {
    if !(0.0..=100.0).contains(&percent) {
        return Err(Error::domain(format!(
            "labelled percentage must be in [0, 100], got {percent}"
        )));
    }
    let n = generated.features.rows();
    let n_labelled = ((percent * n as f64) / 100.0).floor() as usize;
    let mut chosen = rng.sample_distinct(n, n_labelled);
    chosen.sort_unstable();
    split_by_indices(generated, &chosen)
}

fn split_by_indices(generated: &GeneratedData, labelled_idx: &[usize]) -> Result<SplitData> {
    let n = generated.features.rows();
    let mut is_labelled = vec![false; n];
    for &i in labelled_idx {
        is_labelled[i] = true;
    }
    let mut lx = Vec::new();
    let mut labels = Vec::new();
    let mut ux = Vec::new();
    let mut truth = Vec::new();
    for i in 0..n {
        if is_labelled[i] {
            lx.push(generated.features.row(i).to_vec());
            labels.push(generated.truth[i]);
            truth.push(generated.truth[i]);
        }
    }
    for i in 0..n {
        if !is_labelled[i] {
            ux.push(generated.features.row(i).to_vec());
            truth.push(generated.truth[i]);
        }
    }
    let p = generated.features.cols();
    let dataset = DataSet::from_labels(
        if lx.is_empty() {
            Mat::zeros(0, p)
        } else {
            Mat::from_rows(&lx)?
        },
        &labels,
        generated.n_groups,
        if ux.is_empty() {
            Mat::zeros(0, p)
        } else {
            Mat::from_rows(&ux)?
        },
    )?;
    let missing: Vec<usize> = (0..generated.n_groups)
        .filter(|g| !labels.contains(g))
        .collect();
    Ok(SplitData {
        dataset,
        truth: TruthLabels {
            classes: truth,
            n_groups: generated.n_groups,
        },
        missing_label_classes: missing,
    })
}

/// The two illustrative two-cluster geometries that justify keeping cluster
/// analysis on the menu. They are regenerated structurally, not bit-copied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClusterCase {
    /// 10% labelled, all of them near the overlap between the clusters.
    OverlapLabelled,
    /// 90% labelled; the unlabelled tenth sits on the cluster peripheries.
    PeripheryUnlabelled,
}

/// Generates a cluster-justification dataset with its structural split.
pub fn cluster_case(case: ClusterCase, rng: &mut Rng) -> Result<SplitData> {
    match case {
        // 10% labelled, drawn from deep inside the overlap: each group
        // contributes its points that lean farthest toward the other
        // group's center, so the labelled blocks carry almost no usable
        // separation while the full point cloud still has two clear
        // clusters.
        ClusterCase::OverlapLabelled => {
            let delta = 3.0;
            let generated = generate(
                &Scenario::TwoGroupGaussian {
                    delta,
                    n_per_group: 100,
                },
                rng,
            )?;
            let other_means = [[0.0, delta], [0.0, 0.0]];
            let per_class = generated.features.rows() / 10 / 2;
            let mut labelled_idx = Vec::new();
            for class in 0..2 {
                let mut scored: Vec<(f64, usize)> = (0..generated.features.rows())
                    .filter(|&i| generated.truth[i] == class)
                    .map(|i| {
                        let x = generated.features.row(i);
                        let m = other_means[class];
                        let dx = x[0] - m[0];
                        let dy = x[1] - m[1];
                        (dx * dx + dy * dy, i)
                    })
                    .collect();
                scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                labelled_idx.extend(scored[..per_class].iter().map(|&(_, i)| i));
            }
            labelled_idx.sort_unstable();
            split_by_indices(&generated, &labelled_idx)
        }
        // 90% labelled; the unlabelled tenth are the points farthest from
        // their own group's center, i.e. the cluster peripheries. Wider
        // separation than the sweep scenarios so even the peripheries stay
        // apart.
        ClusterCase::PeripheryUnlabelled => {
            let delta = 8.0;
            let groups = [
                Distribution::Gaussian {
                    mean: vec![0.0, 0.0],
                    scale: correlated_scale(0.7),
                },
                Distribution::Gaussian {
                    mean: vec![0.0, delta],
                    scale: Mat::identity(2),
                },
            ];
            let generated = stack_groups(&groups, 100, rng)?;
            let own_means = [[0.0, 0.0], [0.0, delta]];
            let n = generated.features.rows();
            let n_labelled = (0.90 * n as f64).round() as usize;
            let mut scored: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let x = generated.features.row(i);
                    let m = own_means[generated.truth[i]];
                    let dx = x[0] - m[0];
                    let dy = x[1] - m[1];
                    (dx * dx + dy * dy, i)
                })
                .collect();
            scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut labelled_idx: Vec<usize> =
                scored[..n_labelled].iter().map(|&(_, i)| i).collect();
            labelled_idx.sort_unstable();
            split_by_indices(&generated, &labelled_idx)
        }
    }
}

/// One fitted cell of the experiment design.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub percent_labelled: f64,
    #[serde(flatten)]
    pub fit: FitRecord,
}

/// Aggregates for one (p, α) cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellSummary {
    pub percent_labelled: f64,
    pub alpha: f64,
    pub mean_ari: f64,
    pub sd_ari: f64,
    /// Replications that produced a scored fit.
    pub n_ok: usize,
    pub n_failed: usize,
}

/// Experiment output: per-cell records, aggregated summaries and the
/// highest-mean-ARI weight per labelled percentage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub records: Vec<ReplicationRecord>,
    pub summaries: Vec<CellSummary>,
    pub chosen_alpha_per_percent: Vec<(f64, f64)>,
}

/// Full experiment specification.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub percents: Vec<f64>,
    pub grid: WeightGrid,
    pub replications: usize,
    pub family: Family,
    pub structure: CovarianceStructure,
    pub fit: FitConfig,
    pub scoring: ScoringConfig,
}

/// Per-replication seed, decorrelated from neighbours by SplitMix-style
/// mixing so parallel scheduling cannot change any stream.
pub fn derive_seed(master: u64, words: &[u64]) -> u64 {
    let mut state = master ^ 0x6A09_E667_F3BC_C908;
    let mut out = master;
    for &w in words {
        state = state.wrapping_add(w).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        out = z ^ (z >> 31);
    }
    out
}

/// Runs replications × labelled-percentages × candidate weights.
///
/// Each replication draws a fresh dataset; each (replication, p) pair draws
/// a fresh split; each weight is fitted with the grid rule's derived seed.
/// Failed fits are recorded and excluded from the means with counts kept.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.replications < 2 {
        return Err(Error::domain("need at least 2 replications"));
    }
    cfg.scenario.validate()?;
    let master = cfg.fit.seed;

    let cells: Vec<(usize, usize)> = (0..cfg.replications)
        .flat_map(|rep| (0..cfg.percents.len()).map(move |p_idx| (rep, p_idx)))
        .collect();

    let nested: Vec<Result<Vec<ReplicationRecord>>> = cells
        .par_iter()
        .map(|&(rep, p_idx)| {
            let percent = cfg.percents[p_idx];
            let mut data_rng = Rng::seed_from(derive_seed(master, &[1, rep as u64]));
            let generated = generate(&cfg.scenario, &mut data_rng)?;
            let mut split_rng =
                Rng::seed_from(derive_seed(master, &[2, rep as u64, p_idx as u64]));
            let split = label_split(&generated, percent, &mut split_rng)?;
            let fit_cfg = cfg
                .fit
                .with_seed(derive_seed(master, &[3, rep as u64, p_idx as u64]));
            let report = weight_grid_search(
                &split.dataset,
                generated.n_groups,
                cfg.family,
                &cfg.structure,
                &cfg.grid,
                &fit_cfg,
                Some(&split.truth),
                &cfg.scoring,
            );
            Ok(report
                .records
                .into_iter()
                .map(|fit| ReplicationRecord {
                    replication: rep,
                    percent_labelled: percent,
                    fit,
                })
                .collect())
        })
        .collect();

    let mut records = Vec::new();
    for block in nested {
        records.extend(block?);
    }

    let mut summaries = Vec::new();
    for &percent in &cfg.percents {
        for &alpha in cfg.grid.alphas() {
            let aris: Vec<f64> = records
                .iter()
                .filter(|r| {
                    r.percent_labelled == percent && r.fit.alpha == alpha && r.fit.ari.is_some()
                })
                .map(|r| r.fit.ari.unwrap())
                .collect();
            let n_failed = records
                .iter()
                .filter(|r| {
                    r.percent_labelled == percent && r.fit.alpha == alpha && r.fit.error.is_some()
                })
                .count();
            summaries.push(CellSummary {
                percent_labelled: percent,
                alpha,
                mean_ari: mean(&aris),
                sd_ari: sample_sd(&aris),
                n_ok: aris.len(),
                n_failed,
            });
        }
    }

    let chosen = cfg
        .percents
        .iter()
        .map(|&percent| {
            let best = summaries
                .iter()
                .filter(|s| s.percent_labelled == percent && s.n_ok > 0)
                .max_by(|a, b| {
                    a.mean_ari
                        .partial_cmp(&b.mean_ari)
                        .unwrap()
                        .then(b.alpha.partial_cmp(&a.alpha).unwrap())
                })
                .map(|s| s.alpha)
                .unwrap_or(f64::NAN);
            (percent, best)
        })
        .collect();

    Ok(ExperimentResult {
        records,
        summaries,
        chosen_alpha_per_percent: chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightConfig;

    #[test]
    fn two_group_t_matches_declared_constants() {
        let mut rng = Rng::seed_from(1);
        let data = generate(&Scenario::two_group_t(3.0), &mut rng).unwrap();
        assert_eq!(data.features.rows(), 200);
        assert_eq!(data.n_groups, 2);
        assert_eq!(data.truth.iter().filter(|&&g| g == 0).count(), 100);
    }

    #[test]
    fn three_group_t_has_three_hundred_rows() {
        let mut rng = Rng::seed_from(2);
        let data = generate(&Scenario::three_group_t(), &mut rng).unwrap();
        assert_eq!(data.features.rows(), 300);
        assert_eq!(data.n_groups, 3);
        for g in 0..3 {
            assert_eq!(data.truth.iter().filter(|&&t| t == g).count(), 100);
        }
    }

    #[test]
    fn group_two_sample_mean_near_shift() {
        // Large draw from the Δ = 3 scenario: group-2 mean close to (0, 3).
        let mut rng = Rng::seed_from(3);
        let data = generate(
            &Scenario::TwoGroupT {
                delta: 3.0,
                n_per_group: 10_000,
            },
            &mut rng,
        )
        .unwrap();
        let mut mean = [0.0, 0.0];
        let mut count = 0.0;
        for i in 0..data.features.rows() {
            if data.truth[i] == 1 {
                mean[0] += data.features[(i, 0)];
                mean[1] += data.features[(i, 1)];
                count += 1.0;
            }
        }
        assert!((mean[0] / count).abs() < 0.05);
        assert!((mean[1] / count - 3.0).abs() < 0.05);
    }

    #[test]
    fn group_one_sample_correlation_near_scale_correlation() {
        // The t scale-matrix correlation survives as the distribution's
        // correlation for ν > 2.
        let mut rng = Rng::seed_from(4);
        let data = generate(
            &Scenario::TwoGroupT {
                delta: 1.0,
                n_per_group: 20_000,
            },
            &mut rng,
        )
        .unwrap();
        let rows: Vec<usize> = (0..data.features.rows())
            .filter(|&i| data.truth[i] == 0)
            .collect();
        let n = rows.len() as f64;
        let mut mx = 0.0;
        let mut my = 0.0;
        for &i in &rows {
            mx += data.features[(i, 0)];
            my += data.features[(i, 1)];
        }
        mx /= n;
        my /= n;
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for &i in &rows {
            let dx = data.features[(i, 0)] - mx;
            let dy = data.features[(i, 1)] - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!((corr - 0.7).abs() < 0.05, "corr = {corr}");
    }

    #[test]
    fn delta_validation_rejects_out_of_range() {
        let mut rng = Rng::seed_from(5);
        assert!(generate(&Scenario::two_group_t(6.0), &mut rng).is_err());
        assert!(generate(&Scenario::two_group_t(2.5), &mut rng).is_err());
    }

    #[test]
    fn label_split_extremes() {
        let mut rng = Rng::seed_from(6);
        let data = generate(&Scenario::two_group_t(2.0), &mut rng).unwrap();
        let all = label_split(&data, 100.0, &mut Rng::seed_from(7)).unwrap();
        assert_eq!(all.dataset.n_unlabelled(), 0);
        let none = label_split(&data, 0.0, &mut Rng::seed_from(7)).unwrap();
        assert_eq!(none.dataset.n_labelled(), 0);
    }

    #[test]
    fn label_split_is_reproducible_and_sized() {
        let mut rng = Rng::seed_from(8);
        let data = generate(&Scenario::two_group_t(2.0), &mut rng).unwrap();
        let a = label_split(&data, 50.0, &mut Rng::seed_from(9)).unwrap();
        let b = label_split(&data, 50.0, &mut Rng::seed_from(9)).unwrap();
        assert_eq!(a.dataset.n_labelled(), 100);
        assert_eq!(a.truth.classes, b.truth.classes);
        assert_eq!(
            a.dataset.labelled_x().data(),
            b.dataset.labelled_x().data()
        );
    }

    #[test]
    fn missing_class_is_flagged_not_fatal() {
        let generated = GeneratedData {
            features: Mat::from_rows(&[
                vec![0.0, 0.0],
                vec![0.1, 0.0],
                vec![5.0, 5.0],
                vec![5.1, 5.0],
            ])
            .unwrap(),
            truth: vec![0, 0, 1, 1],
            n_groups: 2,
        };
        // Label only the first two rows: class 1 has no labelled point.
        let split = split_by_indices(&generated, &[0, 1]).unwrap();
        assert_eq!(split.missing_label_classes, vec![1]);
    }

    #[test]
    fn cluster_cases_have_expected_split_sizes() {
        let mut rng = Rng::seed_from(10);
        let case1 = cluster_case(ClusterCase::OverlapLabelled, &mut rng).unwrap();
        assert_eq!(case1.dataset.n_labelled(), 20);
        assert_eq!(case1.dataset.n_unlabelled(), 180);
        let mut rng = Rng::seed_from(10);
        let case2 = cluster_case(ClusterCase::PeripheryUnlabelled, &mut rng).unwrap();
        assert_eq!(case2.dataset.n_labelled(), 180);
        assert_eq!(case2.dataset.n_unlabelled(), 20);
    }

    #[test]
    fn overlap_case_labels_sit_near_the_midline() {
        let mut rng = Rng::seed_from(11);
        let split = cluster_case(ClusterCase::OverlapLabelled, &mut rng).unwrap();
        for i in 0..split.dataset.n_labelled() {
            let y = split.dataset.labelled_x()[(i, 1)];
            assert!((y - 1.5).abs() < 1.5, "labelled point far from overlap: {y}");
        }
    }

    #[test]
    fn experiment_shape_and_determinism() {
        let cfg = ExperimentConfig {
            scenario: Scenario::TwoGroupT {
                delta: 5.0,
                n_per_group: 30,
            },
            percents: vec![50.0],
            grid: WeightGrid::new(vec![0.3, 0.7]).unwrap(),
            replications: 2,
            family: Family::Gaussian,
            structure: CovarianceStructure::parse("UUUU").unwrap(),
            fit: {
                let mut f = FitConfig::new(WeightConfig::original(0.5).unwrap()).with_seed(77);
                f.n_starts = 5;
                f
            },
            scoring: ScoringConfig::default(),
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.records.len(), 4); // 2 reps x 1 percent x 2 weights
        assert_eq!(a.summaries.len(), 2);
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.fit.seed, y.fit.seed);
            assert_eq!(x.fit.ari, y.fit.ari);
        }
        // Aggregates match a recomputation from the records.
        for s in &a.summaries {
            let aris: Vec<f64> = a
                .records
                .iter()
                .filter(|r| {
                    r.percent_labelled == s.percent_labelled
                        && r.fit.alpha == s.alpha
                        && r.fit.ari.is_some()
                })
                .map(|r| r.fit.ari.unwrap())
                .collect();
            assert_eq!(s.n_ok, aris.len());
            assert!((s.mean_ari - mean(&aris)).abs() < 1e-15);
            assert!((s.sd_ari - sample_sd(&aris)).abs() < 1e-15);
        }
        // Well-separated blobs: every cell should classify perfectly.
        for s in &a.summaries {
            assert!(s.mean_ari > 0.9, "cell ({}, {})", s.percent_labelled, s.alpha);
        }
    }
}
