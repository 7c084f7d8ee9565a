//! `fsc select`: weight (and model) selection over random splits of a
//! fully labelled dataset.

use std::path::PathBuf;

use serde::Serialize;

use fsc_core::io::read_labelled_csv;
use fsc_core::model::Family;
use fsc_core::numerics::Rng;
use fsc_core::selection::{
    select_model_then_weight, weight_grid_search, FitRecord, ScoringConfig, SelectionReport,
    WeightGrid,
};
use fsc_core::simulation::{derive_seed, label_split, GeneratedData};

use crate::args::{parse_grid, parse_list, Args};
use crate::manifest::RunManifest;
use crate::output::{write_json, write_runs_csv};
use crate::plot::write_box_plot;
use crate::CliError;

#[derive(Serialize)]
struct ResolvedSelectConfig {
    data: String,
    label_column: String,
    family: String,
    structures: Vec<String>,
    groups: Vec<usize>,
    procedure: Option<u8>,
    criterion: String,
    percent_labelled: f64,
    splits: usize,
    grid: Vec<f64>,
    seed: u64,
    scoring: ScoringConfig,
}

#[derive(Serialize)]
struct SplitSummary {
    split: usize,
    chosen_alpha: Vec<(String, f64)>,
    chosen_model: Option<(usize, String)>,
    ari_at_chosen: Vec<(String, f64)>,
    best_ari: Option<f64>,
}

#[derive(Serialize)]
struct SelectSummary {
    criterion: String,
    median_ari_per_criterion: Vec<(String, f64)>,
    median_best_ari: f64,
    splits: Vec<SplitSummary>,
}

/// The ARI each criterion's chosen weight earned in one report, plus the
/// best ARI over the grid. Only per-α winner rows are inspected.
fn score_report(report: &SelectionReport) -> (Vec<(String, f64)>, Option<f64>) {
    let winners: Vec<&FitRecord> = if report.procedure.is_some() {
        report
            .records
            .iter()
            .filter(|r| r.selected_for_alpha)
            .collect()
    } else {
        report.records.iter().collect()
    };
    let mut at_chosen = Vec::new();
    for (name, alpha) in &report.chosen_alpha {
        if let Some(record) = winners.iter().find(|r| r.alpha == *alpha) {
            if let Some(a) = record.ari {
                at_chosen.push((name.clone(), a));
            }
        }
    }
    let best = winners
        .iter()
        .filter_map(|r| r.ari)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        });
    (at_chosen, best)
}

pub fn run(mut args: Args, raw_argv: &[String]) -> Result<(), CliError> {
    let data_path = PathBuf::from(args.require("data")?);
    let label_col = args.require("label-col")?;
    let family = super::parse_family(&mut args, Family::StudentT)?;
    let structures = super::parse_structure_set(&mut args, "implemented")?;
    let procedure = args.take_parse::<u8>("procedure")?;
    let criterion = args.take_or("criterion", "detW");
    let percent: f64 = args.take_parse("p")?.unwrap_or(80.0);
    let splits: usize = args.take_parse("splits")?.unwrap_or(50);
    let grid_raw = args.take_or("grid", "0:1:0.1");
    let grid = WeightGrid::new(parse_grid(&grid_raw)?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let scoring = super::parse_scoring(&mut args)?;
    let groups_raw = args.take("groups");
    let cfg = super::parse_fit_config(&mut args, 0.5)?;
    let out = super::out_dir(&mut args, "fsc-select-out")?;
    args.finish()?;

    if !fsc_core::selection::CRITERION_NAMES.contains(&criterion.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown criterion '{criterion}'; use one of {}",
            fsc_core::selection::CRITERION_NAMES.join(", ")
        )));
    }

    let mut manifest = RunManifest::start("select", raw_argv.to_vec(), cfg.seed);
    manifest.record_input(&data_path)?;

    let table = read_labelled_csv(&data_path, &label_col)?;
    if table.labels.iter().any(Option::is_none) {
        return Err(CliError::Usage(
            "select requires a fully labelled dataset; unlabelled rows are made by the splits"
                .to_string(),
        ));
    }
    let truth: Vec<usize> = table.labels.iter().map(|l| l.unwrap()).collect();
    let generated = GeneratedData {
        features: table.features.clone(),
        truth,
        n_groups: table.n_classes(),
    };
    let groups: Vec<usize> = match groups_raw {
        None => vec![generated.n_groups],
        Some(raw) => parse_list(&raw, "groups")?,
    };

    manifest.set_config(&ResolvedSelectConfig {
        data: data_path.display().to_string(),
        label_column: label_col,
        family: family.as_str().to_string(),
        structures: structures.iter().map(|s| s.code()).collect(),
        groups: groups.clone(),
        procedure,
        criterion: criterion.clone(),
        percent_labelled: percent,
        splits,
        grid: grid.alphas().to_vec(),
        seed: cfg.seed,
        scoring,
    });

    let mut all_rows: Vec<(Vec<String>, FitRecord)> = Vec::new();
    let mut split_summaries = Vec::new();
    for split_idx in 0..splits {
        let mut split_rng = Rng::seed_from(derive_seed(cfg.seed, &[4, split_idx as u64]));
        let split = label_split(&generated, percent, &mut split_rng)?;
        if !split.missing_label_classes.is_empty() {
            eprintln!(
                "fsc: warning: split {split_idx} has no labelled points for class(es) {:?}",
                split.missing_label_classes
            );
        }
        let split_cfg = cfg.with_seed(derive_seed(cfg.seed, &[5, split_idx as u64]));
        let report = match procedure {
            Some(p) => select_model_then_weight(
                p,
                &split.dataset,
                family,
                &groups,
                &structures,
                &grid,
                &split_cfg,
                Some(&split.truth),
                &scoring,
            )?,
            None => {
                if structures.len() != 1 || groups.len() != 1 {
                    return Err(CliError::Usage(
                        "without --procedure give exactly one --structures code and one --groups value"
                            .to_string(),
                    ));
                }
                weight_grid_search(
                    &split.dataset,
                    groups[0],
                    family,
                    &structures[0],
                    &grid,
                    &split_cfg,
                    Some(&split.truth),
                    &scoring,
                )
            }
        };
        let (ari_at_chosen, best_ari) = score_report(&report);
        split_summaries.push(SplitSummary {
            split: split_idx,
            chosen_alpha: report.chosen_alpha.clone(),
            chosen_model: report.chosen_model.clone(),
            ari_at_chosen,
            best_ari,
        });
        for record in report.records {
            all_rows.push((vec![split_idx.to_string()], record));
        }
    }

    write_runs_csv(&out.join("report.csv"), &["split"], all_rows.into_iter())?;

    // Box plot: ARI distribution of each criterion's chosen weight next to
    // the best achievable ARI.
    let box_names = ["E", "A", "U", "trW", "detW"];
    let mut box_groups: Vec<(String, Vec<f64>)> = box_names
        .iter()
        .map(|name| {
            let values = split_summaries
                .iter()
                .filter_map(|s| {
                    s.ari_at_chosen
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, v)| *v)
                })
                .collect();
            (name.to_string(), values)
        })
        .collect();
    box_groups.push((
        "best".to_string(),
        split_summaries.iter().filter_map(|s| s.best_ari).collect(),
    ));
    write_box_plot(
        &out.join("criterion_ari_boxplot.svg"),
        "ARI by weight-selection criterion",
        &box_groups,
    )?;

    let summary = SelectSummary {
        criterion: criterion.clone(),
        median_ari_per_criterion: box_groups
            .iter()
            .map(|(name, values)| (name.clone(), super::median(values)))
            .collect(),
        median_best_ari: super::median(
            &split_summaries
                .iter()
                .filter_map(|s| s.best_ari)
                .collect::<Vec<_>>(),
        ),
        splits: split_summaries,
    };
    write_json(&out.join("summary.json"), &summary)?;
    manifest.write(&out)?;

    let chosen_median = summary
        .median_ari_per_criterion
        .iter()
        .find(|(n, _)| n == &criterion)
        .map(|(_, v)| *v)
        .unwrap_or(f64::NAN);
    println!(
        "select: median ARI under {criterion}-chosen weight {:.4} (best possible {:.4}), artifacts in {}",
        chosen_median,
        summary.median_best_ari,
        out.display()
    );
    Ok(())
}
