//! `fsc fit`: one model, one dataset, artifacts on disk.

use std::path::PathBuf;

use serde::Serialize;

use fsc_core::em::fit;
use fsc_core::io::{assemble_dataset, read_labelled_csv, LabelledData};
use fsc_core::model::Family;
use fsc_core::numerics::Rng;
use fsc_core::selection::{evaluate_fit, ScoringConfig, TruthLabels};
use fsc_core::simulation::derive_seed;

use crate::args::Args;
use crate::manifest::RunManifest;
use crate::output::{fmt_f64, write_csv, write_json};
use crate::CliError;

#[derive(Serialize)]
struct ResolvedFitConfig {
    data: String,
    label_column: String,
    family: String,
    structure: String,
    alpha: f64,
    variant: String,
    n_groups: usize,
    unlabel_fraction: Option<f64>,
    seed: u64,
    scoring: ScoringConfig,
}

#[derive(Serialize)]
struct ModelJson<'a> {
    version: &'static str,
    family: &'a str,
    structure: String,
    alpha: f64,
    variant: &'a str,
    n_groups: usize,
    dim: usize,
    weights: &'a [f64],
    locations: &'a [Vec<f64>],
    /// Row-major p×p matrix per component.
    scales: Vec<Vec<f64>>,
    dof: Option<&'a [f64]>,
    converged: bool,
    n_iterations: usize,
    loglik: f64,
    nu_at_boundary: bool,
    warnings: &'a [String],
    class_names: &'a [String],
}

/// Randomly clears the labels of a fraction of the rows (seeded).
fn unlabel_fraction(data: &mut LabelledData, fraction: f64, seed: u64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(CliError::Usage(format!(
            "--unlabel-frac must be in [0, 1], got {fraction}"
        )));
    }
    let n = data.n_rows();
    let k = ((fraction * n as f64).floor() as usize).min(n);
    let mut rng = Rng::seed_from(derive_seed(seed, &[0x5EED, 1]));
    for idx in rng.sample_distinct(n, k) {
        data.labels[idx] = None;
    }
    Ok(())
}

pub fn run(mut args: Args, raw_argv: &[String]) -> Result<(), CliError> {
    let data_path = PathBuf::from(args.require("data")?);
    let label_col = args.require("label-col")?;
    let family = super::parse_family(&mut args, Family::Gaussian)?;
    let structure = super::parse_structure(&mut args, "UUUU")?;
    let scoring = super::parse_scoring(&mut args)?;
    let unlabel_frac = args.take_parse::<f64>("unlabel-frac")?;
    let groups_override = args.take_parse::<usize>("groups")?;
    let cfg = super::parse_fit_config(&mut args, 0.5)?;
    let out = super::out_dir(&mut args, "fsc-fit-out")?;
    args.finish()?;

    let mut manifest = RunManifest::start("fit", raw_argv.to_vec(), cfg.seed);
    manifest.record_input(&data_path)?;

    let mut table = read_labelled_csv(&data_path, &label_col)?;
    let original_labels = table.labels.clone();
    if let Some(fraction) = unlabel_frac {
        unlabel_fraction(&mut table, fraction, cfg.seed)?;
    }
    let n_groups = groups_override.unwrap_or(table.n_classes()).max(table.n_classes());
    if n_groups == 0 {
        return Err(CliError::Usage(
            "no labelled rows and no --groups override".to_string(),
        ));
    }
    let assembled = assemble_dataset(&table, n_groups)?;

    manifest.set_config(&ResolvedFitConfig {
        data: data_path.display().to_string(),
        label_column: label_col.clone(),
        family: family.as_str().to_string(),
        structure: structure.code(),
        alpha: cfg.weight.alpha,
        variant: format!("{:?}", cfg.weight.variant).to_lowercase(),
        n_groups,
        unlabel_fraction: unlabel_frac,
        seed: cfg.seed,
        scoring,
    });

    let result = fit(&assembled.dataset, n_groups, family, &structure, &cfg)?;

    // Truth is available when the file labelled every row (ARI is scored
    // even if some were masked by --unlabel-frac).
    let truth = original_labels
        .iter()
        .all(Option::is_some)
        .then(|| TruthLabels {
            classes: assembled
                .original_index
                .iter()
                .map(|&i| original_labels[i].unwrap())
                .collect(),
            n_groups,
        });
    let (criteria, ari) = evaluate_fit(
        &assembled.dataset,
        &result,
        truth.as_ref(),
        &scoring,
        cfg.weight.alpha,
    )?;

    let model_json = ModelJson {
        version: "fsc-model/1",
        family: family.as_str(),
        structure: structure.code(),
        alpha: cfg.weight.alpha,
        variant: match cfg.weight.variant {
            fsc_core::model::LikelihoodVariant::Original => "original",
            fsc_core::model::LikelihoodVariant::Alternative => "alt",
        },
        n_groups,
        dim: assembled.dataset.dim(),
        weights: &result.model.weights,
        locations: &result.model.locations,
        scales: result
            .model
            .scales
            .iter()
            .map(|s| s.data().to_vec())
            .collect(),
        dof: result.model.dof.as_deref(),
        converged: result.converged,
        n_iterations: result.n_iterations,
        loglik: result.final_loglik(),
        nu_at_boundary: result.nu_at_boundary,
        warnings: &result.warnings,
        class_names: &table.class_names,
    };
    write_json(&out.join("model.json"), &model_json)?;

    // Responsibilities, one row per observation in original file order.
    let n1 = assembled.dataset.n_labelled();
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for stacked in 0..assembled.dataset.n_total() {
        let original_row = assembled.original_index[stacked];
        let block = if stacked < n1 { "labelled" } else { "unlabelled" };
        let z = result.responsibilities.z_row(stacked);
        let mut cells = vec![original_row.to_string(), block.to_string()];
        cells.extend(z.iter().map(|v| fmt_f64(*v)));
        cells.push((result.map_partition[stacked] + 1).to_string());
        rows.push((original_row, cells));
    }
    rows.sort_by_key(|(original, _)| *original);
    let mut header = vec!["row".to_string(), "block".to_string()];
    header.extend((1..=n_groups).map(|g| format!("z_{g}")));
    header.push("map".to_string());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        &out.join("responsibilities.csv"),
        &header_refs,
        rows.into_iter().map(|(_, cells)| cells),
    )?;

    let mut criteria_header = vec!["BIC", "ICL", "E", "A", "U", "trW", "detW"];
    let mut criteria_row = vec![
        fmt_f64(criteria.bic),
        fmt_f64(criteria.icl),
        fmt_f64(criteria.entropy),
        fmt_f64(criteria.alt_entropy),
        fmt_f64(criteria.uncertainty),
        fmt_f64(criteria.tr_w),
        fmt_f64(criteria.det_w),
    ];
    if let Some(a) = ari {
        criteria_header.push("ARI");
        criteria_row.push(fmt_f64(a));
    }
    write_csv(
        &out.join("criteria.csv"),
        &criteria_header,
        std::iter::once(criteria_row),
    )?;

    manifest.write(&out)?;
    for w in &result.warnings {
        eprintln!("fsc: warning: {w}");
    }
    println!(
        "fit: loglik {:.6}, converged {}, artifacts in {}",
        result.final_loglik(),
        result.converged,
        out.display()
    );
    Ok(())
}
