//! Data representations, component densities and the weighted likelihood.

mod density;
mod likelihood;

pub use density::{log_density, ComponentCache};
pub use likelihood::{complete_data_loglik, weighted_observed_loglik};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{factorize_spd, Mat};
use crate::parsimonious::CovarianceStructure;

/// Mixture component family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Gaussian,
    StudentT,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::StudentT => "t",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Family::Gaussian),
            "t" | "student-t" | "studentt" => Ok(Family::StudentT),
            other => Err(Error::domain(format!("unknown family '{other}'"))),
        }
    }
}

/// Which form of the weighted likelihood drives estimation.
///
/// `Alternative` exists for the comparison experiments only; it is not a
/// likelihood in the strict sense and is never a default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LikelihoodVariant {
    Original,
    Alternative,
}

/// Weight placed on the labelled block (`alpha`) and the likelihood form.
///
/// Labelled points carry weight α, unlabelled points 1 − α. α = 1 is
/// discriminant analysis, α = 0.5 semi-supervised classification and
/// α = 0 a cluster analysis of the unlabelled points.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WeightConfig {
    pub alpha: f64,
    pub variant: LikelihoodVariant,
}

impl WeightConfig {
    pub fn new(alpha: f64, variant: LikelihoodVariant) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("alpha must be in [0, 1], got {alpha}")));
        }
        Ok(WeightConfig { alpha, variant })
    }

    pub fn original(alpha: f64) -> Result<Self> {
        WeightConfig::new(alpha, LikelihoodVariant::Original)
    }
}

/// Observations split into a labelled block with class indicators and an
/// unlabelled block.
#[derive(Clone, Debug)]
pub struct DataSet {
    labelled_x: Mat,
    labelled_z: Mat,
    unlabelled_x: Mat,
}

impl DataSet {
    /// Validates shapes, indicator rows and finiteness.
    ///
    /// `labelled_z` must be n₁×G with exactly one 1 per row; either block may
    /// be empty (0 rows) as long as at least one point exists in total.
    pub fn new(labelled_x: Mat, labelled_z: Mat, unlabelled_x: Mat) -> Result<Self> {
        let n1 = labelled_x.rows();
        let n2 = unlabelled_x.rows();
        if n1 + n2 == 0 {
            return Err(Error::domain("dataset has no points"));
        }
        if labelled_z.rows() != n1 {
            return Err(Error::Dimension {
                expected: n1,
                found: labelled_z.rows(),
            });
        }
        let p = if n1 > 0 {
            labelled_x.cols()
        } else {
            unlabelled_x.cols()
        };
        if n1 > 0 && n2 > 0 && labelled_x.cols() != unlabelled_x.cols() {
            return Err(Error::Dimension {
                expected: labelled_x.cols(),
                found: unlabelled_x.cols(),
            });
        }
        if p == 0 {
            return Err(Error::domain("dataset has zero columns"));
        }
        if !labelled_x.all_finite() || !unlabelled_x.all_finite() {
            return Err(Error::domain("dataset has non-finite entries"));
        }
        for i in 0..n1 {
            let row = labelled_z.row(i);
            let mut ones = 0usize;
            for &v in row {
                if v == 1.0 {
                    ones += 1;
                } else if v != 0.0 {
                    return Err(Error::domain(format!(
                        "labelled indicator row {i} has entry {v}, expected 0 or 1"
                    )));
                }
            }
            if ones != 1 {
                return Err(Error::domain(format!(
                    "labelled indicator row {i} must have exactly one 1"
                )));
            }
        }
        Ok(DataSet {
            labelled_x,
            labelled_z,
            unlabelled_x,
        })
    }

    /// Builds from per-row class indices (0-based).
    pub fn from_labels(
        labelled_x: Mat,
        labels: &[usize],
        n_groups: usize,
        unlabelled_x: Mat,
    ) -> Result<Self> {
        if labels.len() != labelled_x.rows() {
            return Err(Error::Dimension {
                expected: labelled_x.rows(),
                found: labels.len(),
            });
        }
        let mut z = Mat::zeros(labels.len(), n_groups);
        for (i, &g) in labels.iter().enumerate() {
            if g >= n_groups {
                return Err(Error::domain(format!(
                    "label {g} out of range for {n_groups} groups"
                )));
            }
            z[(i, g)] = 1.0;
        }
        DataSet::new(labelled_x, z, unlabelled_x)
    }

    pub fn n_labelled(&self) -> usize {
        self.labelled_x.rows()
    }

    pub fn n_unlabelled(&self) -> usize {
        self.unlabelled_x.rows()
    }

    pub fn n_total(&self) -> usize {
        self.n_labelled() + self.n_unlabelled()
    }

    pub fn dim(&self) -> usize {
        if self.n_labelled() > 0 {
            self.labelled_x.cols()
        } else {
            self.unlabelled_x.cols()
        }
    }

    /// Number of indicator columns (G, or H when padded).
    pub fn n_indicator_groups(&self) -> usize {
        self.labelled_z.cols()
    }

    pub fn labelled_x(&self) -> &Mat {
        &self.labelled_x
    }

    pub fn labelled_z(&self) -> &Mat {
        &self.labelled_z
    }

    pub fn unlabelled_x(&self) -> &Mat {
        &self.unlabelled_x
    }

    /// Class index of labelled row `i`.
    pub fn labelled_class(&self, i: usize) -> usize {
        let row = self.labelled_z.row(i);
        row.iter().position(|&v| v == 1.0).expect("validated indicator row")
    }

    /// The same observations with the labelled block dropped; used for the
    /// α = 0 path, which must never read labelled features.
    pub fn unlabelled_only(&self) -> Result<DataSet> {
        DataSet::new(
            Mat::zeros(0, self.dim()),
            Mat::zeros(0, self.n_indicator_groups()),
            self.unlabelled_x.clone(),
        )
    }

    /// Widens the indicator matrix to `h` columns with zero padding, for
    /// fitting more groups than the labels cover.
    pub fn pad_groups(&self, h: usize) -> Result<DataSet> {
        let g = self.n_indicator_groups();
        if h < g {
            return Err(Error::domain(format!(
                "cannot shrink indicator columns from {g} to {h}"
            )));
        }
        let mut z = Mat::zeros(self.n_labelled(), h);
        for i in 0..self.n_labelled() {
            for j in 0..g {
                z[(i, j)] = self.labelled_z[(i, j)];
            }
        }
        DataSet::new(self.labelled_x.clone(), z, self.unlabelled_x.clone())
    }

    /// Feature row by position in the stacked order: labelled block first,
    /// then unlabelled.
    pub fn row(&self, i: usize) -> &[f64] {
        if i < self.n_labelled() {
            self.labelled_x.row(i)
        } else {
            self.unlabelled_x.row(i - self.n_labelled())
        }
    }
}

/// A fitted (or candidate) finite mixture model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixtureModel {
    pub family: Family,
    pub weights: Vec<f64>,
    pub locations: Vec<Vec<f64>>,
    pub scales: Vec<Mat>,
    /// Present for the t family only.
    pub dof: Option<Vec<f64>>,
    pub structure: CovarianceStructure,
}

impl MixtureModel {
    pub fn n_groups(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.locations.first().map_or(0, |m| m.len())
    }

    /// Checks weights, shapes, positive definiteness and degrees of freedom.
    pub fn validate(&self) -> Result<()> {
        let g = self.n_groups();
        if g == 0 || self.locations.len() != g || self.scales.len() != g {
            return Err(Error::domain("model component lists disagree in length"));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-10 || self.weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::domain(format!(
                "mixing proportions must be positive and sum to 1, sum = {sum}"
            )));
        }
        let p = self.dim();
        for (k, (mu, sigma)) in self.locations.iter().zip(&self.scales).enumerate() {
            if mu.len() != p || sigma.rows() != p || sigma.cols() != p {
                return Err(Error::domain(format!("component {k} has inconsistent shape")));
            }
            factorize_spd(sigma)?;
        }
        match (self.family, &self.dof) {
            (Family::StudentT, Some(nu)) => {
                if nu.len() != g {
                    return Err(Error::domain("degrees-of-freedom list length mismatch"));
                }
                if nu.iter().any(|&v| !(v > 0.0)) {
                    return Err(Error::domain("degrees of freedom must be positive"));
                }
            }
            (Family::StudentT, None) => {
                return Err(Error::domain("t model is missing degrees of freedom"));
            }
            (Family::Gaussian, _) => {}
        }
        Ok(())
    }
}

/// Posterior group membership weights, plus latent scale weights for t fits.
///
/// Row order everywhere is the stacked dataset order: labelled block first.
#[derive(Clone, Debug)]
pub struct Responsibilities {
    /// n₁×G, exact copies of the known indicators.
    pub labelled_z_hat: Mat,
    /// n₂×G, soft posteriors.
    pub unlabelled_z_hat: Mat,
    /// (n₁+n₂)×G latent scale weights; `Some` for t fits only.
    pub w_hat: Option<Mat>,
}

impl Responsibilities {
    pub fn n_groups(&self) -> usize {
        self.unlabelled_z_hat.cols().max(self.labelled_z_hat.cols())
    }

    pub fn n_total(&self) -> usize {
        self.labelled_z_hat.rows() + self.unlabelled_z_hat.rows()
    }

    /// Membership row by stacked position.
    pub fn z_row(&self, i: usize) -> &[f64] {
        let n1 = self.labelled_z_hat.rows();
        if i < n1 {
            self.labelled_z_hat.row(i)
        } else {
            self.unlabelled_z_hat.row(i - n1)
        }
    }

    /// Checks row normalization, ranges and hard labelled rows.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.labelled_z_hat.rows() {
            let row = self.labelled_z_hat.row(i);
            if row.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::domain(format!("labelled row {i} is not hard")));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
                return Err(Error::domain(format!("labelled row {i} does not sum to 1")));
            }
        }
        for i in 0..self.unlabelled_z_hat.rows() {
            let row = self.unlabelled_z_hat.row(i);
            if row.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::domain(format!("responsibility out of [0,1] in row {i}")));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
                return Err(Error::domain(format!("unlabelled row {i} does not sum to 1")));
            }
        }
        if let Some(w) = &self.w_hat {
            if w.rows() != self.n_total() {
                return Err(Error::Dimension {
                    expected: self.n_total(),
                    found: w.rows(),
                });
            }
            if w.data().iter().any(|&v| !(v > 0.0)) {
                return Err(Error::domain("latent scale weights must be positive"));
            }
        }
        Ok(())
    }
}
