//! CSV reading and writing.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{FeatureMatrix, RawTable};

/// How to turn a CSV file into a [`RawTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    pub label: String,
    /// Label text mapped to 1; every other label value maps to 0. When
    /// `None`, labels must parse as the numbers 0 or 1.
    pub positive_label: Option<String>,
    /// Columns skipped before parsing.
    pub drop: Vec<String>,
    /// Integer-code non-numeric columns in first-appearance order.
    pub code_categorical: bool,
    /// Drop rows with an empty or `NA` cell instead of failing.
    pub drop_missing: bool,
}

impl LoadOptions {
    /// Strict numeric parsing with a 0/1 label column.
    pub fn strict(label: &str) -> Self {
        Self {
            label: label.to_string(),
            positive_label: None,
            drop: Vec::new(),
            code_categorical: false,
            drop_missing: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_dropped_missing: usize,
    /// Coded columns with their categories; code `i` is `categories[i]`.
    pub coded_columns: Vec<(String, Vec<String>)>,
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "NA" | "NaN" | "nan" | "null")
}

/// Numeric CSV with a 0/1 label column.
pub fn load_csv(path: &Path, label: &str) -> Result<RawTable> {
    load_csv_with(path, &LoadOptions::strict(label)).map(|(t, _)| t)
}

pub fn load_csv_with(path: &Path, opts: &LoadOptions) -> Result<(RawTable, LoadReport)> {
    let shown = path.display().to_string();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(File::open(path)?);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let label_idx = header
        .iter()
        .position(|h| *h == opts.label)
        .ok_or_else(|| Error::MissingColumn {
            path: shown.clone(),
            column: opts.label.clone(),
        })?;
    for d in &opts.drop {
        if !header.contains(d) {
            return Err(Error::MissingColumn {
                path: shown.clone(),
                column: d.clone(),
            });
        }
    }
    let feature_idx: Vec<usize> = (0..header.len())
        .filter(|&i| i != label_idx && !opts.drop.contains(&header[i]))
        .collect();

    // Rows are 1-based data rows (the header is row 0).
    let mut records: Vec<(usize, Vec<String>)> = Vec::new();
    let mut report = LoadReport::default();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        if rec.len() != header.len() {
            return Err(Error::RaggedRow {
                path: shown,
                row,
                found: rec.len(),
                expected: header.len(),
            });
        }
        report.rows_read += 1;
        let cells: Vec<String> = rec.iter().map(str::to_string).collect();
        let missing =
            is_missing(&cells[label_idx]) || feature_idx.iter().any(|&j| is_missing(&cells[j]));
        if missing && opts.drop_missing {
            report.rows_dropped_missing += 1;
            continue;
        }
        records.push((row, cells));
    }

    let mut codes: HashMap<usize, HashMap<String, f64>> = HashMap::new();
    if opts.code_categorical {
        for &j in &feature_idx {
            let numeric = records.iter().all(|(_, c)| c[j].parse::<f64>().is_ok());
            if numeric {
                continue;
            }
            let mut map = HashMap::new();
            let mut order = Vec::new();
            for (_, c) in &records {
                if !map.contains_key(&c[j]) {
                    map.insert(c[j].clone(), order.len() as f64);
                    order.push(c[j].clone());
                }
            }
            report.coded_columns.push((header[j].clone(), order));
            codes.insert(j, map);
        }
    }

    let mut rows = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (row, cells) in &records {
        let mut values = Vec::with_capacity(feature_idx.len());
        for &j in &feature_idx {
            let v = match codes.get(&j) {
                Some(map) => map[&cells[j]],
                None => parse_number(&cells[j]).ok_or_else(|| Error::NonNumeric {
                    path: shown.clone(),
                    row: *row,
                    column: header[j].clone(),
                    value: cells[j].clone(),
                })?,
            };
            values.push(v);
        }
        rows.push(values);
        labels.push(
            parse_label(&cells[label_idx], opts).ok_or_else(|| Error::NonNumeric {
                path: shown.clone(),
                row: *row,
                column: opts.label.clone(),
                value: cells[label_idx].clone(),
            })?,
        );
    }

    let table = RawTable {
        feature_names: feature_idx.iter().map(|&j| header[j].clone()).collect(),
        label_name: opts.label.clone(),
        rows,
        labels,
    };
    Ok((table, report))
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_label(cell: &str, opts: &LoadOptions) -> Option<u8> {
    match &opts.positive_label {
        Some(pos) => Some(u8::from(cell == pos)),
        None => match parse_number(cell)? {
            0.0 => Some(0),
            1.0 => Some(1),
            _ => None,
        },
    }
}

/// Writes `f1..fd,label` with shortest round-trip float formatting.
pub fn write_processed_csv(path: &Path, m: &FeatureMatrix) -> Result<()> {
    let mut out = Vec::new();
    let header: Vec<String> = (1..=m.n_features()).map(|i| format!("f{i}")).collect();
    writeln!(out, "{},label", header.join(","))?;
    for (r, y) in m.rows.iter().zip(&m.labels) {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{},{y}", cells.join(","))?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a file produced by [`write_processed_csv`].
pub fn read_processed_csv(path: &Path) -> Result<FeatureMatrix> {
    let table = load_csv(path, "label")?;
    let shown = path.display().to_string();
    if table.n_columns() == 0 {
        return Err(Error::InvalidInput(format!("{shown}: no feature columns")));
    }
    let mut m = table.into_matrix()?;
    m.notes.push(format!("loaded from {shown}"));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn three_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "a,b,Class\n1,2,0\n3,4.5,1\n-1,0,0\n");
        let t = load_csv(&p, "Class").unwrap();
        assert_eq!(t.n_rows(), 3);
        assert_eq!(t.feature_names, vec!["a", "b"]);
        assert_eq!(t.rows[1], vec![3.0, 4.5]);
        assert_eq!(t.labels, vec![0, 1, 0]);
    }

    #[test]
    fn diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "a,b\n1,2\n");
        let e = load_csv(&p, "Class").unwrap_err().to_string();
        assert!(e.contains("Class"), "{e}");

        let p = write(&dir, "b.csv", "a,Class\n1,0\n2\n");
        assert!(matches!(
            load_csv(&p, "Class"),
            Err(Error::RaggedRow {
                row: 2,
                found: 1,
                ..
            })
        ));

        let p = write(&dir, "c.csv", "a,Class\n1,0\nx,1\n");
        match load_csv(&p, "Class") {
            Err(Error::NonNumeric {
                row, column, value, ..
            }) => {
                assert_eq!((row, column.as_str(), value.as_str()), (2, "a", "x"));
            }
            other => panic!("{other:?}"),
        }

        let p = dir.path().join("absent.csv");
        assert!(matches!(load_csv(&p, "Class"), Err(Error::MissingFile(_))));
    }

    #[test]
    fn coded_columns_and_missing_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "lp.csv",
            "id,g,n,s\nA1,Male,1,Y\nA2,,2,N\nA3,Female,3,N\nA4,Male,,Y\nA5,Female,5,Y\n",
        );
        let opts = LoadOptions {
            label: "s".into(),
            positive_label: Some("Y".into()),
            drop: vec!["id".into()],
            code_categorical: true,
            drop_missing: true,
        };
        let (t, r) = load_csv_with(&p, &opts).unwrap();
        assert_eq!(r.rows_read, 5);
        assert_eq!(r.rows_dropped_missing, 2);
        assert_eq!(t.rows, vec![vec![0.0, 1.0], vec![1.0, 3.0], vec![1.0, 5.0]]);
        assert_eq!(t.labels, vec![1, 0, 1]);
        assert_eq!(
            r.coded_columns,
            vec![(
                "g".to_string(),
                vec!["Male".to_string(), "Female".to_string()]
            )]
        );
    }

    #[test]
    fn processed_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let m = FeatureMatrix::new(
            vec!["p".into(), "q".into()],
            vec![
                vec![0.1 + 0.2, -1e-300],
                vec![std::f64::consts::PI, 12345.678],
            ],
            vec![1, 0],
        )
        .unwrap();
        let p = dir.path().join("m.csv");
        write_processed_csv(&p, &m).unwrap();
        let back = read_processed_csv(&p).unwrap();
        assert_eq!(back.rows, m.rows);
        assert_eq!(back.labels, m.labels);
        assert_eq!(back.feature_names, vec!["f1", "f2"]);
    }
}
