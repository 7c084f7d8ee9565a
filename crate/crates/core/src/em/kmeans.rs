//! Restarted Lloyd's k-means for initializing the EM/ECM fits.

use crate::error::{Error, Result};
use crate::model::{DataSet, Responsibilities};
use crate::numerics::linalg::Mat;
use crate::numerics::Rng;

use super::FitConfig;

/// One candidate initialization: a hard partition of all rows with its
/// within-cluster sum of squares.
#[derive(Clone, Debug)]
pub(crate) struct InitCandidate {
    pub assignments: Vec<usize>,
    pub wcss: f64,
}

/// Hard initial responsibilities from restarted k-means.
///
/// Runs Lloyd's algorithm on all N rows once per restart (seeds
/// `cfg.seed + restart_index`), keeps the partition with the lowest
/// within-cluster sum of squares, aligns cluster indices to the labelled
/// classes by majority vote, then overwrites labelled rows with their known
/// indicators.
pub fn kmeans_init(data: &DataSet, n_groups: usize, cfg: &FitConfig) -> Result<Responsibilities> {
    let candidates = kmeans_candidates(data, n_groups, cfg)?;
    Ok(candidate_to_responsibilities(data, n_groups, &candidates[0]))
}

/// All distinct restart partitions, best WCSS first. `fit` walks this list
/// when a restart turns out degenerate.
pub(crate) fn kmeans_candidates(
    data: &DataSet,
    n_groups: usize,
    cfg: &FitConfig,
) -> Result<Vec<InitCandidate>> {
    let n = data.n_total();
    if n < n_groups || n_groups == 0 {
        return Err(Error::TooFewPoints {
            n,
            groups: n_groups,
        });
    }
    let mut candidates: Vec<InitCandidate> = Vec::new();
    for restart in 0..cfg.n_starts.max(1) {
        let mut rng = Rng::seed_from(cfg.seed.wrapping_add(restart as u64));
        let run = lloyd(data, n_groups, &mut rng);
        let aligned = align_to_labels(data, n_groups, &run.assignments);
        if !candidates.iter().any(|c| c.assignments == aligned) {
            candidates.push(InitCandidate {
                assignments: aligned,
                wcss: run.wcss,
            });
        }
    }
    candidates.sort_by(|a, b| a.wcss.partial_cmp(&b.wcss).unwrap());
    Ok(candidates)
}

pub(crate) fn candidate_to_responsibilities(
    data: &DataSet,
    n_groups: usize,
    candidate: &InitCandidate,
) -> Responsibilities {
    let n1 = data.n_labelled();
    let n2 = data.n_unlabelled();
    let mut unlabelled = Mat::zeros(n2, n_groups);
    for i in 0..n2 {
        unlabelled[(i, candidate.assignments[n1 + i])] = 1.0;
    }
    let mut labelled = Mat::zeros(n1, n_groups);
    for i in 0..n1 {
        labelled[(i, data.labelled_class(i))] = 1.0;
    }
    Responsibilities {
        labelled_z_hat: labelled,
        unlabelled_z_hat: unlabelled,
        w_hat: None,
    }
}

struct LloydRun {
    assignments: Vec<usize>,
    wcss: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lloyd(data: &DataSet, k: usize, rng: &mut Rng) -> LloydRun {
    let n = data.n_total();
    let p = data.dim();
    let seeds = rng.sample_distinct(n, k);
    let mut centroids: Vec<Vec<f64>> = seeds.iter().map(|&i| data.row(i).to_vec()).collect();
    let mut assignments = vec![0usize; n];

    for _ in 0..100 {
        let mut changed = false;
        for i in 0..n {
            let x = data.row(i);
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_distance(x, centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }

        let mut counts = vec![0usize; k];
        let mut sums = vec![vec![0.0; p]; k];
        for i in 0..n {
            counts[assignments[i]] += 1;
            for (s, v) in sums[assignments[i]].iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }
        // An emptied cluster grabs the point farthest from its own centroid.
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = squared_distance(data.row(a), &centroids[assignments[a]]);
                        let db = squared_distance(data.row(b), &centroids[assignments[b]]);
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                let old = assignments[far];
                counts[old] -= 1;
                for (s, v) in sums[old].iter_mut().zip(data.row(far)) {
                    *s -= v;
                }
                assignments[far] = c;
                counts[c] = 1;
                sums[c] = data.row(far).to_vec();
                changed = true;
            }
        }
        for c in 0..k {
            for (cent, s) in centroids[c].iter_mut().zip(&sums[c]) {
                *cent = s / counts[c] as f64;
            }
        }
        if !changed {
            break;
        }
    }

    let wcss = (0..n)
        .map(|i| squared_distance(data.row(i), &centroids[assignments[i]]))
        .sum();
    LloydRun { assignments, wcss }
}

/// Relabels k-means clusters so they line up with the labelled classes.
///
/// Each cluster votes with the known classes of its labelled members; the
/// pairings are granted in order of vote count (ties broken by lowest
/// cluster index, then lowest class index) and leftover clusters take the
/// unused class indices in order. Without labelled points this is the
/// identity.
fn align_to_labels(data: &DataSet, k: usize, assignments: &[usize]) -> Vec<usize> {
    let n1 = data.n_labelled();
    if n1 == 0 {
        return assignments.to_vec();
    }
    let mut votes = vec![vec![0usize; k]; k];
    for i in 0..n1 {
        let cluster = assignments[i];
        let class = data.labelled_class(i);
        if class < k {
            votes[cluster][class] += 1;
        }
    }
    let cluster_to_class = greedy_class_alignment(&votes);
    assignments.iter().map(|&c| cluster_to_class[c]).collect()
}

/// Bijective cluster-to-class map from a vote matrix: pairings are granted
/// in descending vote order (ties broken by lowest cluster index, then
/// lowest class index) and leftover clusters take the unused class indices
/// in order.
pub(crate) fn greedy_class_alignment(votes: &[Vec<usize>]) -> Vec<usize> {
    let k = votes.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (cluster, row) in votes.iter().enumerate() {
        for (class, &count) in row.iter().enumerate() {
            if count > 0 {
                pairs.push((count, cluster, class));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut cluster_to_class = vec![usize::MAX; k];
    let mut class_taken = vec![false; k];
    for (_, cluster, class) in pairs {
        if cluster_to_class[cluster] == usize::MAX && !class_taken[class] {
            cluster_to_class[cluster] = class;
            class_taken[class] = true;
        }
    }
    let mut free_classes = (0..k).filter(|&c| !class_taken[c]);
    for slot in cluster_to_class.iter_mut() {
        if *slot == usize::MAX {
            *slot = free_classes.next().expect("one free class per free cluster");
        }
    }
    cluster_to_class
}
