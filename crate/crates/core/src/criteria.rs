//! Model- and weight-selection criteria.
//!
//! Information criteria (BIC, ICL), classification-uncertainty criteria
//! (E, A, U), the scatter-matrix criteria tr(W) and det(W), the adjusted
//! Rand index, and MAP partitions.

use serde::{Deserialize, Serialize};

use crate::em::FitResult;
use crate::error::{Error, Result};
use crate::model::{DataSet, Responsibilities};
use crate::numerics::linalg::{factorize_spd, Mat};

/// Responsibilities are clamped here before logs, so 0 · log 0 = 0.
const LOG_FLOOR: f64 = 1e-300;

/// Hard group assignment per observation (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignments: Vec<usize>,
    n_groups: usize,
}

impl Partition {
    pub fn new(assignments: Vec<usize>, n_groups: usize) -> Result<Self> {
        if let Some(&bad) = assignments.iter().find(|&&a| a >= n_groups) {
            return Err(Error::domain(format!(
                "assignment {bad} out of range for {n_groups} groups"
            )));
        }
        Ok(Partition {
            assignments,
            n_groups,
        })
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// Which information criterion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InformationCriterion {
    Bic,
    Icl,
}

/// BIC = 2 ℓ_obs − k ln N over all N = n₁ + n₂ points, with ℓ_obs the
/// weighted observed log-likelihood at the fitted parameters.
///
/// ICL adds the (non-positive) MAP-weighted entropy of the unlabelled
/// posteriors: ICL = BIC + 2 Σ_j Σ_g MAP(ẑ_jg) ln ẑ_jg ≤ BIC. Labelled rows
/// are hard, so they contribute nothing.
pub fn information_criterion(
    kind: InformationCriterion,
    fit: &FitResult,
    data: &DataSet,
    param_count: usize,
) -> f64 {
    let n = data.n_total() as f64;
    let bic = 2.0 * fit.final_loglik() - param_count as f64 * n.ln();
    match kind {
        InformationCriterion::Bic => bic,
        InformationCriterion::Icl => {
            bic + 2.0 * map_weighted_entropy(&fit.responsibilities.unlabelled_z_hat)
        }
    }
}

fn map_weighted_entropy(z: &Mat) -> f64 {
    let mut total = 0.0;
    for i in 0..z.rows() {
        let row = z.row(i);
        let g = crate::em::argmax_row(row);
        let v = row[g].max(LOG_FLOOR);
        total += v.ln();
    }
    total
}

/// Which classification-uncertainty criterion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassificationCriterion {
    /// Σ_j Σ_g MAP(ẑ_jg) ln ẑ_jg, always ≤ 0; larger means less uncertain.
    Entropy,
    /// Σ_j Σ_g ẑ_jg ln ẑ_jg, the MAP-free form; also ≤ 0.
    AlternativeEntropy,
    /// Σ_j min_g (1 − ẑ_jg), always ≥ 0; zero means no uncertainty.
    Uncertainty,
}

/// Evaluates E, A or U over the unlabelled rows only; labelled rows are
/// hard and would contribute nothing.
pub fn classification_criterion(
    kind: ClassificationCriterion,
    resp: &Responsibilities,
) -> f64 {
    let z = &resp.unlabelled_z_hat;
    match kind {
        ClassificationCriterion::Entropy => map_weighted_entropy(z),
        ClassificationCriterion::AlternativeEntropy => {
            let mut total = 0.0;
            for i in 0..z.rows() {
                for &v in z.row(i) {
                    if v > 0.0 {
                        total += v * v.max(LOG_FLOOR).ln();
                    }
                }
            }
            total
        }
        ClassificationCriterion::Uncertainty => {
            let mut total = 0.0;
            for i in 0..z.rows() {
                let m = z
                    .row(i)
                    .iter()
                    .map(|&v| 1.0 - v)
                    .fold(f64::INFINITY, f64::min);
                total += m;
            }
            total
        }
    }
}

/// Within-, between- and total-scatter matrices of a partitioned data
/// matrix, with the group and grand means that produced them.
#[derive(Clone, Debug)]
pub struct ScatterDecomposition {
    pub total_s: Mat,
    pub within_w: Mat,
    pub between_b: Mat,
    /// Group means; rows of empty groups are zero.
    pub group_means: Mat,
    pub grand_mean: Vec<f64>,
}

/// W = Σ_g Σ_{i∈g} (x − x̄_g)(x − x̄_g)ᵀ, B = Σ_g n_g (x̄_g − x̄)(x̄_g − x̄)ᵀ
/// and S about the grand mean, so S = W + B exactly.
pub fn scatter_decomposition(x: &Mat, partition: &Partition) -> Result<ScatterDecomposition> {
    if partition.len() != x.rows() {
        return Err(Error::Dimension {
            expected: x.rows(),
            found: partition.len(),
        });
    }
    let n = x.rows();
    let p = x.cols();
    let g_count = partition.n_groups();

    let mut grand_mean = vec![0.0; p];
    for i in 0..n {
        for (m, v) in grand_mean.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    for m in grand_mean.iter_mut() {
        *m /= n as f64;
    }

    let mut counts = vec![0usize; g_count];
    let mut group_means = Mat::zeros(g_count, p);
    for (i, &g) in partition.assignments().iter().enumerate() {
        counts[g] += 1;
        for j in 0..p {
            group_means[(g, j)] += x[(i, j)];
        }
    }
    for g in 0..g_count {
        if counts[g] > 0 {
            for j in 0..p {
                group_means[(g, j)] /= counts[g] as f64;
            }
        }
    }

    let mut within = Mat::zeros(p, p);
    let mut total = Mat::zeros(p, p);
    let mut diff = vec![0.0; p];
    for (i, &g) in partition.assignments().iter().enumerate() {
        for j in 0..p {
            diff[j] = x[(i, j)] - group_means[(g, j)];
        }
        within.add_scaled_outer(&diff, 1.0);
        for j in 0..p {
            diff[j] = x[(i, j)] - grand_mean[j];
        }
        total.add_scaled_outer(&diff, 1.0);
    }

    let mut between = Mat::zeros(p, p);
    for g in 0..g_count {
        if counts[g] == 0 {
            continue;
        }
        for j in 0..p {
            diff[j] = group_means[(g, j)] - grand_mean[j];
        }
        between.add_scaled_outer(&diff, counts[g] as f64);
    }

    Ok(ScatterDecomposition {
        total_s: total,
        within_w: within,
        between_b: between,
        group_means,
        grand_mean,
    })
}

/// Which scatter-matrix criterion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScatterCriterion {
    TraceW,
    DetW,
}

/// tr(W) or det(W). The determinant goes through the SPD factorization when
/// possible and falls back to LU for merely positive semidefinite W; a
/// singular W yields 0.
pub fn scatter_criterion(kind: ScatterCriterion, decomposition: &ScatterDecomposition) -> f64 {
    let w = &decomposition.within_w;
    match kind {
        ScatterCriterion::TraceW => w.trace(),
        ScatterCriterion::DetW => match factorize_spd(w) {
            Ok(f) => f.log_det().exp(),
            Err(_) => w.det_lu().max(0.0),
        },
    }
}

/// Adjusted Rand index between two partitions of the same points.
///
/// Pair-counting form with the usual adjustment for chance: 1 for identical
/// partitions up to relabeling, about 0 for independent ones. Two
/// single-group partitions are identical, hence 1.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.len();
    let ka = a.n_groups();
    let kb = b.n_groups();
    let mut contingency = vec![0u64; ka * kb];
    let mut row_sums = vec![0u64; ka];
    let mut col_sums = vec![0u64; kb];
    for (&ga, &gb) in a.assignments().iter().zip(b.assignments()) {
        contingency[ga * kb + gb] += 1;
        row_sums[ga] += 1;
        col_sums[gb] += 1;
    }
    let choose2 = |v: u64| -> f64 { (v * v.saturating_sub(1)) as f64 / 2.0 };
    let sum_cells: f64 = contingency.iter().map(|&v| choose2(v)).sum();
    let sum_rows: f64 = row_sums.iter().map(|&v| choose2(v)).sum();
    let sum_cols: f64 = col_sums.iter().map(|&v| choose2(v)).sum();
    let total_pairs = choose2(n as u64);
    if total_pairs == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_rows * sum_cols / total_pairs;
    let max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index - expected).abs() < 1e-12 {
        // Both partitions are trivial (e.g. all points in one group).
        return Ok(1.0);
    }
    Ok((sum_cells - expected) / (max_index - expected))
}

/// Per-row argmax of the responsibilities; the lowest index wins ties.
/// Row order is the stacked dataset order (labelled block first).
pub fn map_partition(resp: &Responsibilities) -> Partition {
    let n = resp.n_total();
    let assignments = (0..n)
        .map(|i| crate::em::argmax_row(resp.z_row(i)))
        .collect();
    Partition {
        assignments,
        n_groups: resp.n_groups(),
    }
}
