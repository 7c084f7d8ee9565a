//! Constrained covariance structures.
//!
//! A scale matrix decomposes as Σ_g = λ_g Λ_g D_g Λ_gᵀ (volume, orientation,
//! shape). Four-letter codes describe which pieces are constrained equal
//! across groups (C), left free (U) or pinned to the identity (I); the last
//! letter covers the degrees-of-freedom constraint for t fits.
//!
//! Fitting is implemented for the closed-form subset: every identity-
//! orientation code plus the fully unconstrained and equal-volume
//! unconstrained codes (UUU*, CUU*). The remaining shared-orientation codes
//! can be constructed and counted but are rejected by `project_structure`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Volume {
    Constrained,
    Unconstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Identity,
    Constrained,
    Unconstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Identity,
    Constrained,
    Unconstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DofConstraint {
    Constrained,
    Unconstrained,
}

/// One of the 28 four-letter covariance/dof structure codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CovarianceStructure {
    pub volume: Volume,
    pub orientation: Orientation,
    pub shape: Shape,
    pub dof: DofConstraint,
}

/// All 28 valid codes in table order.
pub const ALL_CODES: [&str; 28] = [
    "CIIC", "CIIU", "UIIC", "UIIU", "CICC", "CICU", "UICC", "UICU", "CIUC", "CIUU", "UIUC",
    "UIUU", "CCCC", "CCCU", "UCCC", "UCCU", "CUCC", "CUCU", "UUCC", "UUCU", "CCUC", "CCUU",
    "CUUC", "CUUU", "UCUC", "UCUU", "UUUC", "UUUU",
];

impl CovarianceStructure {
    /// Parses a four-letter code such as "UUUU" or "CIIC".
    pub fn parse(code: &str) -> Result<Self> {
        let chars: Vec<char> = code.trim().to_ascii_uppercase().chars().collect();
        if chars.len() != 4 {
            return Err(Error::Unsupported(code.to_string()));
        }
        let volume = match chars[0] {
            'C' => Volume::Constrained,
            'U' => Volume::Unconstrained,
            _ => return Err(Error::Unsupported(code.to_string())),
        };
        let orientation = match chars[1] {
            'I' => Orientation::Identity,
            'C' => Orientation::Constrained,
            'U' => Orientation::Unconstrained,
            _ => return Err(Error::Unsupported(code.to_string())),
        };
        let shape = match chars[2] {
            'I' => Shape::Identity,
            'C' => Shape::Constrained,
            'U' => Shape::Unconstrained,
            _ => return Err(Error::Unsupported(code.to_string())),
        };
        let dof = match chars[3] {
            'C' => DofConstraint::Constrained,
            'U' => DofConstraint::Unconstrained,
            _ => return Err(Error::Unsupported(code.to_string())),
        };
        // Shape I only pairs with identity orientation, and non-identity
        // orientation requires a non-identity shape; anything else is not a
        // row of the model table.
        if shape == Shape::Identity && orientation != Orientation::Identity {
            return Err(Error::Unsupported(code.to_string()));
        }
        Ok(CovarianceStructure {
            volume,
            orientation,
            shape,
            dof,
        })
    }

    pub fn code(&self) -> String {
        let v = match self.volume {
            Volume::Constrained => 'C',
            Volume::Unconstrained => 'U',
        };
        let o = match self.orientation {
            Orientation::Identity => 'I',
            Orientation::Constrained => 'C',
            Orientation::Unconstrained => 'U',
        };
        let s = match self.shape {
            Shape::Identity => 'I',
            Shape::Constrained => 'C',
            Shape::Unconstrained => 'U',
        };
        let d = match self.dof {
            DofConstraint::Constrained => 'C',
            DofConstraint::Unconstrained => 'U',
        };
        [v, o, s, d].iter().collect()
    }

    pub fn constrain_dof(&self) -> bool {
        self.dof == DofConstraint::Constrained
    }

    /// Whether `project_structure` has an estimator for this code.
    pub fn is_implemented(&self) -> bool {
        match self.orientation {
            Orientation::Identity => true,
            Orientation::Unconstrained => self.shape == Shape::Unconstrained,
            Orientation::Constrained => false,
        }
    }

    /// Every code with an implemented estimator, in table order.
    pub fn implemented_set() -> Vec<CovarianceStructure> {
        ALL_CODES
            .iter()
            .map(|c| CovarianceStructure::parse(c).unwrap())
            .filter(|s| s.is_implemented())
            .collect()
    }

    /// Free covariance + degrees-of-freedom parameter count, exactly as
    /// tabulated for the 28-model family.
    pub fn free_param_count(&self, g: usize, p: usize) -> usize {
        self.covariance_param_count(g, p) + self.dof_param_count(g)
    }

    /// Scale-matrix parameters only.
    pub fn covariance_param_count(&self, g: usize, p: usize) -> usize {
        use Orientation as O;
        use Shape as S;
        use Volume as V;
        let pp = p * (p + 1) / 2;
        match (self.volume, self.orientation, self.shape) {
            (V::Constrained, O::Identity, S::Identity) => 1,
            (V::Unconstrained, O::Identity, S::Identity) => g - 1,
            (V::Constrained, O::Identity, S::Constrained) => p,
            (V::Unconstrained, O::Identity, S::Constrained) => p + (g - 1),
            (V::Constrained, O::Identity, S::Unconstrained) => g * p - (g - 1),
            (V::Unconstrained, O::Identity, S::Unconstrained) => g * p,
            (V::Constrained, O::Constrained, S::Constrained) => pp,
            (V::Unconstrained, O::Constrained, S::Constrained) => pp + (g - 1),
            (V::Constrained, O::Unconstrained, S::Constrained) => g * pp - (g - 1) * p,
            (V::Unconstrained, O::Unconstrained, S::Constrained) => g * pp - (g - 1) * (p - 1),
            (V::Constrained, O::Constrained, S::Unconstrained) => pp + (g - 1) * (p - 1),
            (V::Unconstrained, O::Constrained, S::Unconstrained) => g * pp + (g - 1) * p,
            (V::Constrained, O::Unconstrained, S::Unconstrained) => g * pp - (g - 1),
            (V::Unconstrained, O::Unconstrained, S::Unconstrained) => g * pp,
            (_, _, S::Identity) => unreachable!("identity shape pairs only with identity orientation"),
        }
    }

    /// 1 when the degrees of freedom are shared, G otherwise.
    pub fn dof_param_count(&self, g: usize) -> usize {
        match self.dof {
            DofConstraint::Constrained => 1,
            DofConstraint::Unconstrained => g,
        }
    }
}

impl std::fmt::Display for CovarianceStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl TryFrom<String> for CovarianceStructure {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        CovarianceStructure::parse(&s)
    }
}

impl From<CovarianceStructure> for String {
    fn from(s: CovarianceStructure) -> String {
        s.code()
    }
}

impl std::str::FromStr for CovarianceStructure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CovarianceStructure::parse(s)
    }
}

/// Total free parameters a fitted mixture carries: mixing proportions,
/// means, covariance structure and (for t fits) degrees of freedom.
pub fn total_param_count(
    is_student_t: bool,
    structure: &CovarianceStructure,
    g: usize,
    p: usize,
) -> usize {
    let base = (g - 1) + g * p + structure.covariance_param_count(g, p);
    if is_student_t {
        base + structure.dof_param_count(g)
    } else {
        base
    }
}

const MASS_FLOOR: f64 = 1e-8;

/// Maximum-likelihood scale matrices under the structure's constraints.
///
/// Inputs are the per-group weighted scatter matrices (unnormalized) and
/// their masses m_g; the unconstrained estimate for group g is scatter/m_g
/// and constrained codes pool across groups with the masses as weights, so
/// shared pieces are computed once and reused bit-exactly.
pub fn project_structure(
    structure: &CovarianceStructure,
    scatters: &[Mat],
    masses: &[f64],
) -> Result<Vec<Mat>> {
    if !structure.is_implemented() {
        return Err(Error::Unsupported(structure.code()));
    }
    let g_count = scatters.len();
    if masses.len() != g_count || g_count == 0 {
        return Err(Error::Dimension {
            expected: g_count,
            found: masses.len(),
        });
    }
    for (g, &m) in masses.iter().enumerate() {
        if !(m > MASS_FLOOR) {
            return Err(Error::DegenerateComponent { component: g });
        }
    }
    let p = scatters[0].rows();
    let total_mass: f64 = masses.iter().sum();

    use Orientation as O;
    use Shape as S;
    use Volume as V;
    match (structure.volume, structure.orientation, structure.shape) {
        // Fully unconstrained: raw scatter over mass.
        (V::Unconstrained, O::Unconstrained, S::Unconstrained) => Ok(scatters
            .iter()
            .zip(masses)
            .map(|(w, &m)| w.scale(1.0 / m))
            .collect()),

        // Equal volume, otherwise free: rescale each group so the
        // det^{1/p} volumes all equal their mass-weighted average.
        (V::Constrained, O::Unconstrained, S::Unconstrained) => {
            let raw: Vec<Mat> = scatters
                .iter()
                .zip(masses)
                .map(|(w, &m)| w.scale(1.0 / m))
                .collect();
            let vols = volumes(&raw)?;
            let pooled = pooled_volume(&vols, masses, total_mass);
            Ok(raw
                .iter()
                .zip(&vols)
                .map(|(s, &v)| s.scale(pooled / v))
                .collect())
        }

        // Spherical λ_g I.
        (V::Unconstrained, O::Identity, S::Identity) => Ok(scatters
            .iter()
            .zip(masses)
            .map(|(w, &m)| Mat::identity(p).scale(w.trace() / (p as f64 * m)))
            .collect()),

        // Spherical λ I with λ pooled over every group.
        (V::Constrained, O::Identity, S::Identity) => {
            let lambda =
                scatters.iter().map(Mat::trace).sum::<f64>() / (p as f64 * total_mass);
            Ok(vec![Mat::identity(p).scale(lambda); g_count])
        }

        // Free diagonal per group.
        (V::Unconstrained, O::Identity, S::Unconstrained) => Ok(scatters
            .iter()
            .zip(masses)
            .map(|(w, &m)| diag_mat(&diag_of(w).iter().map(|d| d / m).collect::<Vec<_>>()))
            .collect()),

        // Diagonal per group, volumes equalized.
        (V::Constrained, O::Identity, S::Unconstrained) => {
            let raw: Vec<Mat> = scatters
                .iter()
                .zip(masses)
                .map(|(w, &m)| diag_mat(&diag_of(w).iter().map(|d| d / m).collect::<Vec<_>>()))
                .collect();
            let vols = volumes(&raw)?;
            let pooled = pooled_volume(&vols, masses, total_mass);
            Ok(raw
                .iter()
                .zip(&vols)
                .map(|(s, &v)| s.scale(pooled / v))
                .collect())
        }

        // One diagonal shared by every group: pooled diagonal scatter.
        (V::Constrained, O::Identity, S::Constrained) => {
            let mut pooled = vec![0.0; p];
            for w in scatters {
                for (d, v) in pooled.iter_mut().zip(diag_of(w)) {
                    *d += v;
                }
            }
            let sigma = diag_mat(&pooled.iter().map(|d| d / total_mass).collect::<Vec<_>>());
            Ok(vec![sigma; g_count])
        }

        // Shared diagonal shape with free volumes: short fixed-point
        // alternation between the shape and the volumes.
        (V::Unconstrained, O::Identity, S::Constrained) => {
            let diags: Vec<Vec<f64>> = scatters.iter().map(diag_of).collect();
            for (g, d) in diags.iter().enumerate() {
                if d.iter().any(|&v| !(v > 0.0)) {
                    return Err(Error::NotPositiveDefinite { pivot_index: g });
                }
            }
            let mut shape = normalize_det(&pooled_diag(&diags))?;
            let mut lambdas = vec![1.0; g_count];
            for _ in 0..200 {
                for g in 0..g_count {
                    lambdas[g] = diags[g]
                        .iter()
                        .zip(&shape)
                        .map(|(w, b)| w / b)
                        .sum::<f64>()
                        / (p as f64 * masses[g]);
                }
                let mut accum = vec![0.0; p];
                for (d, &lambda) in diags.iter().zip(&lambdas) {
                    for (a, v) in accum.iter_mut().zip(d) {
                        *a += v / lambda;
                    }
                }
                let next = normalize_det(&accum)?;
                let drift = shape
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                shape = next;
                if drift < 1e-13 {
                    break;
                }
            }
            Ok(lambdas
                .iter()
                .map(|&l| diag_mat(&shape.iter().map(|b| l * b).collect::<Vec<_>>()))
                .collect())
        }

        _ => Err(Error::Unsupported(structure.code())),
    }
}

fn diag_of(m: &Mat) -> Vec<f64> {
    (0..m.rows()).map(|i| m[(i, i)]).collect()
}

fn diag_mat(d: &[f64]) -> Mat {
    let mut m = Mat::zeros(d.len(), d.len());
    for (i, &v) in d.iter().enumerate() {
        m[(i, i)] = v;
    }
    m
}

fn pooled_diag(diags: &[Vec<f64>]) -> Vec<f64> {
    let p = diags[0].len();
    let mut out = vec![0.0; p];
    for d in diags {
        for (o, v) in out.iter_mut().zip(d) {
            *o += v;
        }
    }
    out
}

/// det(Σ)^{1/p} per group, via the Cholesky log-determinant.
fn volumes(mats: &[Mat]) -> Result<Vec<f64>> {
    mats.iter()
        .map(|m| {
            let f = crate::numerics::linalg::factorize_spd(m)?;
            Ok((f.log_det() / m.rows() as f64).exp())
        })
        .collect()
}

fn pooled_volume(vols: &[f64], masses: &[f64], total_mass: f64) -> f64 {
    vols.iter()
        .zip(masses)
        .map(|(&v, &m)| m * v)
        .sum::<f64>()
        / total_mass
}

/// Rescales positive entries so their product is 1.
fn normalize_det(d: &[f64]) -> Result<Vec<f64>> {
    if d.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::domain("shape vector must be strictly positive"));
    }
    let p = d.len() as f64;
    let log_geo = d.iter().map(|v| v.ln()).sum::<f64>() / p;
    let geo = log_geo.exp();
    Ok(d.iter().map(|v| v / geo).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::factorize_spd;
    use crate::numerics::Rng;

    fn st(code: &str) -> CovarianceStructure {
        CovarianceStructure::parse(code).unwrap()
    }

    #[test]
    fn parses_and_prints_all_codes() {
        for code in ALL_CODES {
            assert_eq!(st(code).code(), code);
        }
    }

    #[test]
    fn rejects_invalid_codes() {
        assert!(CovarianceStructure::parse("XYZW").is_err());
        assert!(CovarianceStructure::parse("UU").is_err());
        // Shape I under a non-identity orientation is not a table row.
        assert!(CovarianceStructure::parse("CUIC").is_err());
    }

    #[test]
    fn implemented_set_is_sixteen_codes() {
        let set = CovarianceStructure::implemented_set();
        assert_eq!(set.len(), 16);
        assert!(set.iter().all(|s| s.is_implemented()));
        assert!(!st("CCCC").is_implemented());
        assert!(!st("UUCU").is_implemented());
    }

    #[test]
    fn free_param_counts_match_table() {
        let g = 3;
        let p = 4;
        let pp = p * (p + 1) / 2;
        let expected: Vec<(&str, usize)> = vec![
            ("CIIC", 1 + 1),
            ("CIIU", 1 + g),
            ("UIIC", (g - 1) + 1),
            ("UIIU", (g - 1) + g),
            ("CICC", p + 1),
            ("CICU", p + g),
            ("UICC", p + (g - 1) + 1),
            ("UICU", p + (g - 1) + g),
            ("CIUC", g * p - (g - 1) + 1),
            ("CIUU", g * p - (g - 1) + g),
            ("UIUC", g * p + 1),
            ("UIUU", g * p + g),
            ("CCCC", pp + 1),
            ("CCCU", pp + g),
            ("UCCC", pp + (g - 1) + 1),
            ("UCCU", pp + (g - 1) + g),
            ("CUCC", g * pp - (g - 1) * p + 1),
            ("CUCU", g * pp - (g - 1) * p + g),
            ("UUCC", g * pp - (g - 1) * (p - 1) + 1),
            ("UUCU", g * pp - (g - 1) * (p - 1) + g),
            ("CCUC", pp + (g - 1) * (p - 1) + 1),
            ("CCUU", pp + (g - 1) * (p - 1) + g),
            ("CUUC", g * pp - (g - 1) + 1),
            ("CUUU", g * pp - (g - 1) + g),
            ("UCUC", g * pp + (g - 1) * p + 1),
            ("UCUU", g * pp + (g - 1) * p + g),
            ("UUUC", g * pp + 1),
            ("UUUU", g * pp + g),
        ];
        for (code, count) in expected {
            assert_eq!(st(code).free_param_count(g, p), count, "code {code}");
        }
        // The spot checks with hand arithmetic.
        assert_eq!(st("CCUU").free_param_count(3, 4), 19);
        assert_eq!(st("CIIC").free_param_count(3, 4), 2);
    }

    #[test]
    fn total_param_count_hand_totals() {
        // mixing (G−1) + means Gp + covariance + dof.
        assert_eq!(total_param_count(true, &st("UUUU"), 2, 2), 1 + 4 + 6 + 2);
        assert_eq!(total_param_count(false, &st("UUUU"), 2, 2), 1 + 4 + 6);
        assert_eq!(total_param_count(true, &st("CIIC"), 3, 4), 2 + 12 + 1 + 1);
        assert_eq!(total_param_count(false, &st("CICU"), 2, 3), 1 + 6 + 3);
        assert_eq!(total_param_count(true, &st("CUUU"), 3, 2), 2 + 6 + (9 - 2) + 3);
    }

    fn spd_scatter(rng: &mut Rng, p: usize, mass: f64) -> Mat {
        let mut m = Mat::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                m[(i, j)] = rng.next_f64() * 2.0 - 1.0;
            }
        }
        let mut a = m.matmul(&m.transpose());
        for i in 0..p {
            a[(i, i)] += 1.0;
        }
        a.scale(mass)
    }

    #[test]
    fn unconstrained_returns_scatter_over_mass() {
        let mut rng = Rng::seed_from(1);
        let scatters = vec![spd_scatter(&mut rng, 3, 5.0), spd_scatter(&mut rng, 3, 7.0)];
        let masses = vec![5.0, 7.0];
        let out = project_structure(&st("UUUU"), &scatters, &masses).unwrap();
        for (o, (w, m)) in out.iter().zip(scatters.iter().zip(&masses)) {
            assert!(o.max_abs_diff(&w.scale(1.0 / m)) < 1e-14);
        }
    }

    #[test]
    fn pooled_spherical_example() {
        // Two groups with per-group variances 1 and 3 and equal masses pool
        // to 2I under the shared spherical code.
        let w1 = Mat::identity(2).scale(1.0 * 4.0);
        let w2 = Mat::identity(2).scale(3.0 * 4.0);
        let out = project_structure(&st("CIIC"), &[w1, w2], &[4.0, 4.0]).unwrap();
        for o in &out {
            assert!(o.max_abs_diff(&Mat::identity(2).scale(2.0)) < 1e-12);
        }
    }

    #[test]
    fn spherical_projection_is_trace_over_p() {
        // diag(4, 1) scatter at mass m projects to 2.5 I under UII*.
        let m = 3.0;
        let mut w = Mat::zeros(2, 2);
        w[(0, 0)] = 4.0 * m;
        w[(1, 1)] = 1.0 * m;
        let out = project_structure(&st("UIIU"), &[w], &[m]).unwrap();
        assert!(out[0].max_abs_diff(&Mat::identity(2).scale(2.5)) < 1e-12);
    }

    #[test]
    fn equal_volume_codes_share_volume_exactly() {
        let mut rng = Rng::seed_from(9);
        for code in ["CUUC", "CUUU", "CIUC", "CIUU"] {
            let scatters = vec![
                spd_scatter(&mut rng, 3, 4.0),
                spd_scatter(&mut rng, 3, 9.0),
                spd_scatter(&mut rng, 3, 6.0),
            ];
            let masses = vec![4.0, 9.0, 6.0];
            let out = project_structure(&st(code), &scatters, &masses).unwrap();
            let vols: Vec<f64> = out
                .iter()
                .map(|s| (factorize_spd(s).unwrap().log_det() / 3.0).exp())
                .collect();
            for v in &vols[1..] {
                assert!((v - vols[0]).abs() < 1e-10, "code {code}: {vols:?}");
            }
        }
    }

    #[test]
    fn shared_shape_code_shares_shape_exactly() {
        let mut rng = Rng::seed_from(10);
        let scatters = vec![spd_scatter(&mut rng, 3, 4.0), spd_scatter(&mut rng, 3, 8.0)];
        let masses = vec![4.0, 8.0];
        let out = project_structure(&st("UICU"), &scatters, &masses).unwrap();
        // Ratio of diagonals must be constant across coordinates.
        let r0 = out[1][(0, 0)] / out[0][(0, 0)];
        for i in 1..3 {
            assert!((out[1][(i, i)] / out[0][(i, i)] - r0).abs() < 1e-9);
        }
        // Off-diagonals are exactly zero for identity orientation.
        assert_eq!(out[0][(0, 1)], 0.0);
    }

    #[test]
    fn projection_output_is_positive_definite() {
        let mut rng = Rng::seed_from(11);
        for structure in CovarianceStructure::implemented_set() {
            let scatters = vec![spd_scatter(&mut rng, 4, 5.0), spd_scatter(&mut rng, 4, 3.0)];
            let masses = vec![5.0, 3.0];
            let out = project_structure(&structure, &scatters, &masses).unwrap();
            for s in &out {
                assert!(
                    factorize_spd(s).is_ok(),
                    "structure {structure} produced a non-SPD output"
                );
            }
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = Rng::seed_from(12);
        for structure in CovarianceStructure::implemented_set() {
            let scatters = vec![spd_scatter(&mut rng, 3, 6.0), spd_scatter(&mut rng, 3, 2.5)];
            let masses = vec![6.0, 2.5];
            let once = project_structure(&structure, &scatters, &masses).unwrap();
            // Feed the conforming matrices back in as scatters.
            let again_scatters: Vec<Mat> = once
                .iter()
                .zip(&masses)
                .map(|(s, &m)| s.scale(m))
                .collect();
            let twice = project_structure(&structure, &again_scatters, &masses).unwrap();
            for (a, b) in once.iter().zip(&twice) {
                assert!(
                    a.max_abs_diff(b) < 1e-12,
                    "structure {structure} is not idempotent"
                );
            }
        }
    }

    #[test]
    fn unimplemented_structure_rejected() {
        let scatters = vec![Mat::identity(2)];
        assert!(matches!(
            project_structure(&st("CCCC"), &scatters, &[1.0]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn zero_mass_rejected() {
        let scatters = vec![Mat::identity(2), Mat::identity(2)];
        assert!(matches!(
            project_structure(&st("UUUU"), &scatters, &[1.0, 0.0]),
            Err(Error::DegenerateComponent { component: 1 })
        ));
    }
}
