//! Command implementations and their shared plumbing.

pub mod ari;
pub mod fit;
pub mod select;
pub mod simulate;

use std::path::PathBuf;

use fsc_core::em::FitConfig;
use fsc_core::model::{Family, LikelihoodVariant, WeightConfig};
use fsc_core::parsimonious::CovarianceStructure;
use fsc_core::selection::{PointSet, ScoringConfig, UDirection};

use crate::args::{Args, UsageError};
use crate::CliError;

/// Seed resolution: --seed flag, then the FSC_SEED environment variable,
/// then 0.
pub fn resolve_seed(args: &mut Args) -> Result<u64, UsageError> {
    if let Some(seed) = args.take_parse::<u64>("seed")? {
        return Ok(seed);
    }
    match std::env::var("FSC_SEED") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| UsageError(format!("cannot parse FSC_SEED value '{raw}'"))),
        Err(_) => Ok(0),
    }
}

pub fn parse_family(args: &mut Args, default: Family) -> Result<Family, UsageError> {
    match args.take("family") {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| UsageError(format!("unknown family '{raw}' (use gaussian or t)"))),
    }
}

pub fn parse_variant(args: &mut Args) -> Result<LikelihoodVariant, UsageError> {
    match args.take_or("variant", "original").as_str() {
        "original" => Ok(LikelihoodVariant::Original),
        "alt" | "alternative" => Ok(LikelihoodVariant::Alternative),
        other => Err(UsageError(format!(
            "unknown variant '{other}' (use original or alt)"
        ))),
    }
}

pub fn parse_structure(args: &mut Args, default: &str) -> Result<CovarianceStructure, UsageError> {
    let raw = args.take_or("structure", default);
    let structure = CovarianceStructure::parse(&raw)
        .map_err(|_| UsageError(format!("unknown structure code '{raw}'")))?;
    if !structure.is_implemented() {
        return Err(UsageError(format!(
            "structure {raw} has no implemented estimator; implemented codes: {}",
            implemented_codes().join(", ")
        )));
    }
    Ok(structure)
}

/// Comma list of codes, or the keyword `implemented` for the whole
/// fit-capable subset.
pub fn parse_structure_set(
    args: &mut Args,
    default: &str,
) -> Result<Vec<CovarianceStructure>, UsageError> {
    let raw = args.take_or("structures", default);
    if raw == "implemented" {
        return Ok(CovarianceStructure::implemented_set());
    }
    raw.split(',')
        .map(|code| {
            let s = CovarianceStructure::parse(code.trim())
                .map_err(|_| UsageError(format!("unknown structure code '{code}'")))?;
            if !s.is_implemented() {
                return Err(UsageError(format!(
                    "structure {code} has no implemented estimator"
                )));
            }
            Ok(s)
        })
        .collect()
}

fn implemented_codes() -> Vec<String> {
    CovarianceStructure::implemented_set()
        .iter()
        .map(|s| s.code())
        .collect()
}

pub fn parse_scoring(args: &mut Args) -> Result<ScoringConfig, UsageError> {
    let mut scoring = ScoringConfig::default();
    let point_set = |raw: String, flag: &str| match raw.as_str() {
        "all" => Ok(PointSet::All),
        "unlabelled" | "unlabeled" => Ok(PointSet::Unlabelled),
        other => Err(UsageError(format!(
            "--{flag} must be all or unlabelled, got '{other}'"
        ))),
    };
    if let Some(raw) = args.take("scatter-points") {
        scoring.scatter_points = point_set(raw, "scatter-points")?;
    }
    if let Some(raw) = args.take("ari-points") {
        scoring.ari_points = point_set(raw, "ari-points")?;
    }
    if let Some(raw) = args.take("u-direction") {
        scoring.u_direction = match raw.as_str() {
            "max" => UDirection::Max,
            "min" => UDirection::Min,
            other => {
                return Err(UsageError(format!(
                    "--u-direction must be max or min, got '{other}'"
                )))
            }
        };
    }
    Ok(scoring)
}

/// FitConfig from the common flags (seed, alpha, variant, constrain-nu).
pub fn parse_fit_config(args: &mut Args, default_alpha: f64) -> Result<FitConfig, CliError> {
    let seed = resolve_seed(args)?;
    let alpha = args.take_parse::<f64>("alpha")?.unwrap_or(default_alpha);
    let variant = parse_variant(args)?;
    let weight = WeightConfig::new(alpha, variant)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut cfg = FitConfig::new(weight).with_seed(seed);
    cfg.constrain_nu = args.take_bool("constrain-nu");
    if let Some(n) = args.take_parse::<usize>("starts")? {
        cfg.n_starts = n.max(1);
    }
    Ok(cfg)
}

pub fn out_dir(args: &mut Args, default: &str) -> Result<PathBuf, CliError> {
    let dir = PathBuf::from(args.take_or("out", default));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Median of finite values; NaN when empty.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().cloned().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
