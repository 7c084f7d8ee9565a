//! Fractionally-supervised classification (FSC) for finite mixtures of
//! multivariate Gaussian and t distributions.
//!
//! Classification problems come in three classical species: discriminant
//! analysis uses only labelled points, cluster analysis only unlabelled
//! ones, and semi-supervised classification weighs both equally. FSC
//! interpolates between all three by raising the labelled block of the
//! likelihood to a weight α and the unlabelled block to 1 − α. This crate
//! provides:
//!
//! - weighted EM estimation for Gaussian mixtures and a multicycle ECM for
//!   t mixtures ([`em`]),
//! - parsimonious covariance structures with exact parameter counts
//!   ([`parsimonious`]),
//! - model- and weight-selection criteria, including the within-group
//!   scatter determinant rule ([`criteria`]),
//! - grid search and two model-then-weight selection procedures
//!   ([`selection`]),
//! - seeded synthetic-data generators and a replication harness
//!   ([`simulation`]).

// Indexed loops mirror the estimation formulas, and `!(x > 0)` guards are
// deliberate NaN catchers.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod em;
pub mod error;
pub mod io;
pub mod model;
pub mod numerics;
pub mod parsimonious;
pub mod selection;
pub mod simulation;

pub use error::{Error, Result};
