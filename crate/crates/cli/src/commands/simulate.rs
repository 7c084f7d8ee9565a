//! `fsc simulate`: synthetic replication studies.

use std::path::PathBuf;

use serde::Serialize;

use fsc_core::model::Family;
use fsc_core::numerics::Rng;
use fsc_core::selection::{weight_grid_search, FitRecord, ScoringConfig, WeightGrid};
use fsc_core::simulation::{
    cluster_case, derive_seed, run_experiment, ClusterCase, ExperimentConfig, Scenario,
};

use crate::args::{parse_grid, parse_list, Args};
use crate::manifest::RunManifest;
use crate::output::{write_experiment_csv, write_json, write_runs_csv};
use crate::plot::{write_sweep_plot, ChosenSeries, SweepSeries};
use crate::CliError;

#[derive(Serialize)]
struct ResolvedSimulateConfig {
    scenario: String,
    delta: Option<f64>,
    n_per_group: Option<usize>,
    family: String,
    structure: String,
    replications: usize,
    percents: Vec<f64>,
    grid: Vec<f64>,
    seed: u64,
    scoring: ScoringConfig,
}

enum Plan {
    Sweep(Scenario),
    Case(ClusterCase),
}

pub fn run(mut args: Args, raw_argv: &[String]) -> Result<(), CliError> {
    let scenario_name = args.take_or("scenario", "two-group-t");
    let delta = args.take_parse::<f64>("delta")?;
    let n_per_group = args.take_parse::<usize>("n-per-group")?;
    let reps: usize = args.take_parse("reps")?.unwrap_or(30);
    let percents: Vec<f64> = match args.take("p") {
        Some(raw) => parse_list(&raw, "percent")?,
        None => (1..=9).map(|k| 10.0 * k as f64).collect(),
    };
    let grid_raw = args.take_or("grid", "0:1:0.1");
    let grid = WeightGrid::new(parse_grid(&grid_raw)?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let structure = super::parse_structure(&mut args, "UUUU")?;
    let scoring = super::parse_scoring(&mut args)?;
    let no_plots = args.take_bool("no-plots");
    let data_path = args.take("data");
    let label_col = args.take("label-col");
    let cfg = super::parse_fit_config(&mut args, 0.5)?;

    let plan = match scenario_name.as_str() {
        "two-group-t" => Plan::Sweep(Scenario::TwoGroupT {
            delta: delta.unwrap_or(3.0),
            n_per_group: n_per_group.unwrap_or(100),
        }),
        "three-group-t" => Plan::Sweep(Scenario::ThreeGroupT {
            n_per_group: n_per_group.unwrap_or(100),
        }),
        "two-group-gaussian" => Plan::Sweep(Scenario::TwoGroupGaussian {
            delta: delta.unwrap_or(5.0),
            n_per_group: n_per_group.unwrap_or(150),
        }),
        "from-file" => {
            let path = data_path.ok_or_else(|| {
                CliError::Usage("--scenario from-file needs --data".to_string())
            })?;
            let column = label_col.ok_or_else(|| {
                CliError::Usage("--scenario from-file needs --label-col".to_string())
            })?;
            Plan::Sweep(Scenario::FromFile {
                path: PathBuf::from(path),
                label_column: column,
            })
        }
        "cluster-case-1" => Plan::Case(ClusterCase::OverlapLabelled),
        "cluster-case-2" => Plan::Case(ClusterCase::PeripheryUnlabelled),
        other => {
            return Err(CliError::Usage(format!(
                "unknown scenario '{other}'; use two-group-t, three-group-t, two-group-gaussian, cluster-case-1, cluster-case-2 or from-file"
            )))
        }
    };
    if let Plan::Sweep(s) = &plan {
        s.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let default_family = match &plan {
        Plan::Sweep(s) => s.family_hint(),
        Plan::Case(_) => Family::Gaussian,
    };
    let family = super::parse_family(&mut args, default_family)?;
    let out = super::out_dir(&mut args, "fsc-simulate-out")?;
    args.finish()?;

    let mut manifest = RunManifest::start("simulate", raw_argv.to_vec(), cfg.seed);
    if let Plan::Sweep(Scenario::FromFile { path, .. }) = &plan {
        manifest.record_input(path)?;
    }
    manifest.set_config(&ResolvedSimulateConfig {
        scenario: scenario_name.clone(),
        delta,
        n_per_group,
        family: family.as_str().to_string(),
        structure: structure.code(),
        replications: reps,
        percents: percents.clone(),
        grid: grid.alphas().to_vec(),
        seed: cfg.seed,
        scoring,
    });

    match plan {
        Plan::Sweep(scenario) => {
            let experiment = ExperimentConfig {
                scenario,
                percents: percents.clone(),
                grid: grid.clone(),
                replications: reps,
                family,
                structure,
                fit: cfg,
                scoring,
            };
            let result = run_experiment(&experiment)?;
            write_experiment_csv(&out.join("results.csv"), &result)?;
            write_json(&out.join("summary.json"), &result)?;

            if !no_plots {
                let series: Vec<SweepSeries> = grid
                    .alphas()
                    .iter()
                    .map(|&alpha| SweepSeries {
                        alpha,
                        points: percents
                            .iter()
                            .map(|&p| {
                                let mean = result
                                    .summaries
                                    .iter()
                                    .find(|s| s.percent_labelled == p && s.alpha == alpha)
                                    .map(|s| s.mean_ari)
                                    .unwrap_or(f64::NAN);
                                (p, mean)
                            })
                            .collect(),
                    })
                    .collect();
                let chosen = ChosenSeries {
                    points: result
                        .chosen_alpha_per_percent
                        .iter()
                        .map(|&(p, alpha)| {
                            let cell = result
                                .summaries
                                .iter()
                                .find(|s| s.percent_labelled == p && s.alpha == alpha);
                            (
                                p,
                                alpha,
                                cell.map(|c| c.mean_ari).unwrap_or(f64::NAN),
                                cell.map(|c| c.sd_ari).unwrap_or(0.0),
                            )
                        })
                        .collect(),
                };
                write_sweep_plot(
                    &out.join("ari_sweep.svg"),
                    &format!("mean ARI vs percent labelled ({scenario_name})"),
                    &series,
                    &chosen,
                )?;
            }
            println!(
                "simulate: {} records over {} replications, artifacts in {}",
                result.records.len(),
                reps,
                out.display()
            );
        }
        Plan::Case(case) => {
            // Fixed structural split; sweep the weights per replication.
            let mut rows: Vec<(Vec<String>, FitRecord)> = Vec::new();
            for rep in 0..reps {
                let mut rng = Rng::seed_from(derive_seed(cfg.seed, &[6, rep as u64]));
                let split = cluster_case(case, &mut rng)?;
                let rep_cfg = cfg.with_seed(derive_seed(cfg.seed, &[7, rep as u64]));
                let report = weight_grid_search(
                    &split.dataset,
                    split.truth.n_groups,
                    family,
                    &structure,
                    &grid,
                    &rep_cfg,
                    Some(&split.truth),
                    &scoring,
                );
                for record in report.records {
                    rows.push((vec![rep.to_string()], record));
                }
            }
            write_runs_csv(&out.join("results.csv"), &["replication"], rows.into_iter())?;
            println!(
                "simulate: cluster case over {} replications, artifacts in {}",
                reps,
                out.display()
            );
        }
    }

    manifest.write(&out)?;
    Ok(())
}
