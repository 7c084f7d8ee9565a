//! CSV ingestion.
//!
//! Input files are plain comma-separated UTF-8 with a header row and '.'
//! decimal separators. One designated column carries the class label; an
//! empty field or "NA" there marks the row as unlabelled.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::DataSet;
use crate::numerics::linalg::Mat;

/// Feature matrix plus per-row labels as parsed from a CSV file.
#[derive(Clone, Debug)]
pub struct LabelledData {
    pub features: Mat,
    /// Class index per row; `None` marks an unlabelled row.
    pub labels: Vec<Option<usize>>,
    /// Class names sorted lexicographically; indices refer into this.
    pub class_names: Vec<String>,
    pub feature_names: Vec<String>,
}

impl LabelledData {
    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }
}

fn split_csv_line(line: &str) -> Vec<String> {
    line.split(',').map(|f| f.trim().to_string()).collect()
}

/// Reads a CSV file with a header and a designated label column.
///
/// Errors carry 1-based line numbers. Label values are mapped to indices in
/// lexicographic order of the distinct names, so class numbering does not
/// depend on row order.
pub fn read_labelled_csv(path: &Path, label_column: &str) -> Result<LabelledData> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::Io {
        message: format!("cannot read {}: {e}", path.display()),
        line: None,
    })?;
    let mut lines = content.lines().enumerate();
    let (_, header_line) = lines.next().ok_or_else(|| Error::Io {
        message: "file is empty".to_string(),
        line: Some(1),
    })?;
    let header = split_csv_line(header_line);
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Io {
            message: format!(
                "label column '{label_column}' not found; columns are: {}",
                header.join(", ")
            ),
            line: Some(1),
        })?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<Option<String>> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let fields = split_csv_line(line);
        if fields.len() != header.len() {
            return Err(Error::Io {
                message: format!(
                    "expected {} fields, found {}",
                    header.len(),
                    fields.len()
                ),
                line: Some(line_no),
            });
        }
        let mut row = Vec::with_capacity(header.len() - 1);
        for (i, field) in fields.iter().enumerate() {
            if i == label_idx {
                let label = if field.is_empty() || field == "NA" {
                    None
                } else {
                    Some(field.clone())
                };
                raw_labels.push(label);
            } else {
                let v: f64 = field.parse().map_err(|_| Error::Io {
                    message: format!("cannot parse '{field}' in column '{}' as a number", header[i]),
                    line: Some(line_no),
                })?;
                row.push(v);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Io {
            message: "no data rows".to_string(),
            line: None,
        });
    }

    let mut class_names: Vec<String> = raw_labels.iter().flatten().cloned().collect();
    class_names.sort();
    class_names.dedup();
    let labels = raw_labels
        .iter()
        .map(|l| {
            l.as_ref()
                .map(|name| class_names.binary_search(name).expect("name collected above"))
        })
        .collect();

    Ok(LabelledData {
        features: Mat::from_rows(&rows)?,
        labels,
        class_names,
        feature_names,
    })
}

/// A dataset in stacked order (labelled rows first) with bookkeeping to map
/// back to original row positions.
#[derive(Clone, Debug)]
pub struct AssembledData {
    pub dataset: DataSet,
    /// Original file row index per stacked position.
    pub original_index: Vec<usize>,
    /// Truth class per stacked position when every row was labelled.
    pub truth: Option<Vec<usize>>,
}

/// Reorders rows into the labelled-block-first layout the fitting code
/// expects. `n_groups` may exceed the observed class count to fit extra
/// groups.
pub fn assemble_dataset(data: &LabelledData, n_groups: usize) -> Result<AssembledData> {
    if n_groups < data.n_classes() {
        return Err(Error::domain(format!(
            "{} groups cannot cover {} observed classes",
            n_groups,
            data.n_classes()
        )));
    }
    let mut labelled_rows = Vec::new();
    let mut labelled_classes = Vec::new();
    let mut unlabelled_rows = Vec::new();
    let mut order = Vec::new();
    for (i, label) in data.labels.iter().enumerate() {
        if let Some(class) = label {
            labelled_rows.push(data.features.row(i).to_vec());
            labelled_classes.push(*class);
            order.push(i);
        }
    }
    for (i, label) in data.labels.iter().enumerate() {
        if label.is_none() {
            unlabelled_rows.push(data.features.row(i).to_vec());
            order.push(i);
        }
    }
    let p = data.features.cols();
    let lx = if labelled_rows.is_empty() {
        Mat::zeros(0, p)
    } else {
        Mat::from_rows(&labelled_rows)?
    };
    let ux = if unlabelled_rows.is_empty() {
        Mat::zeros(0, p)
    } else {
        Mat::from_rows(&unlabelled_rows)?
    };
    let dataset = DataSet::from_labels(lx, &labelled_classes, n_groups, ux)?;
    let truth = data
        .labels
        .iter()
        .all(Option::is_some)
        .then(|| order.iter().map(|&i| data.labels[i].unwrap()).collect());
    Ok(AssembledData {
        dataset,
        original_index: order,
        truth,
    })
}
