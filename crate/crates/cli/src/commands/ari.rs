//! `fsc ari`: adjusted Rand index between two partition files.
//!
//! Each file holds one label per line (no header); labels are arbitrary
//! strings compared for equality.

use std::path::PathBuf;

use fsc_core::criteria::{ari, Partition};

use crate::args::Args;
use crate::CliError;

fn read_partition(path: &PathBuf) -> Result<Partition, CliError> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let labels: Vec<&str> = content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if labels.is_empty() {
        return Err(CliError::Io(format!("{} has no labels", path.display())));
    }
    let mut names: Vec<&str> = labels.clone();
    names.sort_unstable();
    names.dedup();
    let assignments = labels
        .iter()
        .map(|l| names.binary_search(l).expect("name collected above"))
        .collect();
    Partition::new(assignments, names.len()).map_err(CliError::from)
}

pub fn run(mut args: Args) -> Result<(), CliError> {
    let a_path = PathBuf::from(args.require("a")?);
    let b_path = PathBuf::from(args.require("b")?);
    args.finish()?;
    let a = read_partition(&a_path)?;
    let b = read_partition(&b_path)?;
    let value = ari(&a, &b)?;
    println!("{value:.6}");
    Ok(())
}
