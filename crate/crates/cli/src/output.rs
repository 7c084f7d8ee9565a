//! CSV and JSON emission.
//!
//! CSV files are UTF-8, comma-separated, one header row, '.' decimal
//! separator, no locale dependence.

use std::io::Write;
use std::path::Path;

use fsc_core::selection::FitRecord;
use fsc_core::simulation::ExperimentResult;

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        writeln!(file, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NA".to_string()
    } else {
        format!("{v:.12}")
    }
}

fn fit_record_cells(r: &FitRecord) -> Vec<String> {
    let c = r.criteria.as_ref();
    let get = |f: fn(&fsc_core::selection::CriterionValues) -> f64| {
        c.map(|v| fmt_f64(f(v))).unwrap_or_else(|| "NA".to_string())
    };
    vec![
        format!("{}", r.alpha),
        r.n_groups.to_string(),
        r.structure.clone(),
        r.seed.to_string(),
        r.converged.to_string(),
        r.n_iterations.to_string(),
        fmt_f64(r.loglik),
        get(|v| v.bic),
        get(|v| v.icl),
        get(|v| v.entropy),
        get(|v| v.alt_entropy),
        get(|v| v.uncertainty),
        get(|v| v.tr_w),
        get(|v| v.det_w),
        r.ari.map(fmt_f64).unwrap_or_else(|| "NA".to_string()),
        r.selected_for_alpha.to_string(),
        r.error.clone().unwrap_or_default(),
    ]
}

pub const FIT_RECORD_HEADER: [&str; 17] = [
    "alpha",
    "G",
    "structure",
    "seed",
    "converged",
    "iterations",
    "loglik",
    "BIC",
    "ICL",
    "E",
    "A",
    "U",
    "trW",
    "detW",
    "ARI",
    "selected",
    "error",
];

/// Adds split/replication context columns in front of the fit cells.
pub fn write_runs_csv(
    path: &Path,
    context_header: &[&str],
    rows: impl Iterator<Item = (Vec<String>, FitRecord)>,
) -> std::io::Result<()> {
    let mut header: Vec<&str> = context_header.to_vec();
    header.extend(FIT_RECORD_HEADER);
    write_csv(
        path,
        &header,
        rows.map(|(mut context, record)| {
            context.extend(fit_record_cells(&record));
            context
        }),
    )
}

/// One row per replication × p × α.
pub fn write_experiment_csv(path: &Path, result: &ExperimentResult) -> std::io::Result<()> {
    write_runs_csv(
        path,
        &["replication", "percent_labelled"],
        result.records.iter().map(|r| {
            (
                vec![r.replication.to_string(), format!("{}", r.percent_labelled)],
                r.fit.clone(),
            )
        }),
    )
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let body = serde_json::to_string_pretty(value)?;
    std::fs::write(path, body)
}
