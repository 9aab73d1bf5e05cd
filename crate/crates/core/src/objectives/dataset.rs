use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column:?}: {message}")]
    Parse {
        line: u64,
        column: Option<String>,
        message: String,
    },
    #[error("label column {0:?} not found in header")]
    MissingLabel(String),
    #[error("dataset has no rows")]
    Empty,
}

/// A labeled table after imputation.
///
/// Categorical cells are stored as level codes (indices into `levels`), in
/// order of first appearance. Labels are class codes into `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub feature_kinds: Vec<FeatureKind>,
    pub levels: Vec<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub classes: Vec<String>,
    pub label_name: String,
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c == "?"
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn intern(levels: &mut Vec<String>, value: &str) -> usize {
    match levels.iter().position(|l| l == value) {
        Some(i) => i,
        None => {
            levels.push(value.to_string());
            levels.len() - 1
        }
    }
}

pub fn load_csv_dataset(
    path: impl AsRef<Path>,
    label_column: &str,
    schema: Option<&HashMap<String, FeatureKind>>,
) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Dataset::from_reader(file, label_column, schema)
}

impl Dataset {
    pub fn from_csv_str(
        text: &str,
        label_column: &str,
        schema: Option<&HashMap<String, FeatureKind>>,
    ) -> Result<Self, DatasetError> {
        Self::from_reader(text.as_bytes(), label_column, schema)
    }

    pub fn from_reader<R: Read>(
        reader: R,
        label_column: &str,
        schema: Option<&HashMap<String, FeatureKind>>,
    ) -> Result<Self, DatasetError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let parse_err = |e: csv::Error| DatasetError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            column: None,
            message: e.to_string(),
        };
        let header: Vec<String> = rdr
            .headers()
            .map_err(parse_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let label_idx = header
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| DatasetError::MissingLabel(label_column.to_string()))?;

        let mut raw: Vec<(u64, Vec<String>)> = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(parse_err)?;
            let line = record.position().map_or(0, |p| p.line());
            raw.push((line, record.iter().map(str::to_string).collect()));
        }
        if raw.is_empty() {
            return Err(DatasetError::Empty);
        }

        let feature_cols: Vec<usize> = (0..header.len()).filter(|&c| c != label_idx).collect();
        let mut feature_kinds = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let inferred = if raw
                .iter()
                .all(|(_, r)| is_missing(&r[c]) || r[c].trim().parse::<f64>().is_ok())
            {
                FeatureKind::Numeric
            } else {
                FeatureKind::Categorical
            };
            let kind = schema
                .and_then(|s| s.get(&header[c]).copied())
                .unwrap_or(inferred);
            feature_kinds.push(kind);
        }

        let n = raw.len();
        let mut rows = vec![Vec::with_capacity(feature_cols.len()); n];
        let mut levels = vec![Vec::new(); feature_cols.len()];
        for (f, &c) in feature_cols.iter().enumerate() {
            let mut column: Vec<Option<f64>> = Vec::with_capacity(n);
            match feature_kinds[f] {
                FeatureKind::Numeric => {
                    for (line, r) in &raw {
                        let cell = r[c].trim();
                        if is_missing(cell) {
                            column.push(None);
                            continue;
                        }
                        let v = cell.parse::<f64>().map_err(|_| DatasetError::Parse {
                            line: *line,
                            column: Some(header[c].clone()),
                            message: format!("{cell:?} is not a number"),
                        })?;
                        column.push(Some(v));
                    }
                    let mut present: Vec<f64> = column.iter().flatten().copied().collect();
                    let fill = median(&mut present);
                    for (row, v) in rows.iter_mut().zip(column) {
                        row.push(v.unwrap_or(fill));
                    }
                }
                FeatureKind::Categorical => {
                    let mut counts: Vec<usize> = Vec::new();
                    for (_, r) in &raw {
                        let cell = r[c].trim();
                        if is_missing(cell) {
                            column.push(None);
                            continue;
                        }
                        let code = intern(&mut levels[f], cell);
                        if code == counts.len() {
                            counts.push(0);
                        }
                        counts[code] += 1;
                        column.push(Some(code as f64));
                    }
                    // mode; ties go to the level seen first
                    let fill = counts
                        .iter()
                        .enumerate()
                        .fold(None, |best: Option<(usize, usize)>, (i, &k)| match best {
                            Some((_, bk)) if bk >= k => best,
                            _ => Some((i, k)),
                        })
                        .map(|(i, _)| i);
                    let fill = match fill {
                        Some(i) => i as f64,
                        None => {
                            levels[f].push(String::new());
                            0.0
                        }
                    };
                    for (row, v) in rows.iter_mut().zip(column) {
                        row.push(v.unwrap_or(fill));
                    }
                }
            }
        }

        let mut classes = Vec::new();
        let mut labels = Vec::with_capacity(n);
        for (line, r) in &raw {
            let cell = r[label_idx].trim();
            if is_missing(cell) {
                return Err(DatasetError::Parse {
                    line: *line,
                    column: Some(label_column.to_string()),
                    message: "label is missing".to_string(),
                });
            }
            labels.push(intern(&mut classes, cell));
        }

        Ok(Dataset {
            feature_names: feature_cols.iter().map(|&c| header[c].clone()).collect(),
            feature_kinds,
            levels,
            rows,
            labels,
            classes,
            label_name: label_column.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_kinds.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Rows at `indices`, keeping the feature and class metadata.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            feature_kinds: self.feature_kinds.clone(),
            levels: self.levels.clone(),
            rows: Vec::new(),
            labels: Vec::new(),
            classes: self.classes.clone(),
            label_name: self.label_name.clone(),
        }
    }

    /// Render back to CSV: features in order, label last, categorical codes
    /// as their level names.
    pub fn to_csv_string(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = self.feature_names.clone();
        header.push(self.label_name.clone());
        wtr.write_record(&header).expect("in-memory write");
        for (row, &label) in self.rows.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(f, v)| match self.feature_kinds[f] {
                    FeatureKind::Numeric => v.to_string(),
                    FeatureKind::Categorical => self.levels[f][*v as usize].clone(),
                })
                .collect();
            rec.push(self.classes[label].clone());
            wtr.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn schema(&self) -> HashMap<String, FeatureKind> {
        self.feature_names
            .iter()
            .cloned()
            .zip(self.feature_kinds.iter().copied())
            .collect()
    }
}
