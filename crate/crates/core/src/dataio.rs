//! CSV ingestion, prediction output and JSON reports.
//!
//! Input files are UTF-8 CSV with `,` separators and `.` decimals, an optional
//! single header line, LF or CRLF line endings. Files ending in `.gz` are
//! decompressed transparently.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pipeline::PipelineConfig;
use crate::programming::{LabeledDataset, Prediction};
use crate::scalar::Scalar;

pub const DEFAULT_LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    /// Zero-based column index; works with or without a header.
    Index(usize),
}

impl Default for LabelColumn {
    fn default() -> Self {
        LabelColumn::Name(DEFAULT_LABEL_COLUMN.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub has_header: bool,
    pub label_column: LabelColumn,
}

impl DatasetFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        DatasetFile {
            path: path.into(),
            has_header: true,
            label_column: LabelColumn::default(),
        }
    }

    pub fn with_header(mut self, has_header: bool) -> Self {
        self.has_header = has_header;
        self
    }

    pub fn with_label_column(mut self, label_column: LabelColumn) -> Self {
        self.label_column = label_column;
        self
    }
}

/// Bijection between original label strings and dense class indices, in order
/// of first appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut dict = Self::new();
        for l in labels {
            dict.encode(l.as_ref());
        }
        dict
    }

    /// Returns the index for `label`, assigning the next free one if unseen.
    pub fn encode(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn decode(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("gz"))
    {
        Ok(Box::new(flate2::read::MultiGzDecoder::new(reader)))
    } else {
        Ok(Box::new(reader))
    }
}

struct RawTable {
    header: Option<Vec<String>>,
    /// `(line number, cells)`
    rows: Vec<(u64, Vec<String>)>,
}

fn parse_error(
    path: &Path,
    line: u64,
    column: Option<String>,
    message: impl Into<String>,
) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

fn read_table(path: &Path, has_header: bool) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(open_input(path)?);

    let mut header = None;
    let mut rows = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::io(path, io),
                _ => unreachable!(),
            },
            _ => {
                let line = e.position().map_or(0, |p| p.line());
                parse_error(path, line, None, e.to_string())
            }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cells: Vec<String> = record
            .iter()
            .map(|c| c.trim_start_matches('\u{feff}').to_string())
            .collect();
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(parse_error(
                    path,
                    line,
                    None,
                    format!("expected {w} columns, found {}", cells.len()),
                ));
            }
            Some(_) => {}
        }
        if has_header && header.is_none() {
            header = Some(cells);
        } else {
            rows.push((line, cells));
        }
    }
    if rows.is_empty() {
        return Err(parse_error(path, 0, None, "file contains no data rows"));
    }
    Ok(RawTable { header, rows })
}

fn column_name(table: &RawTable, col: usize) -> String {
    match &table.header {
        Some(h) => h[col].clone(),
        None => col.to_string(),
    }
}

fn resolve_label_column(
    table: &RawTable,
    path: &Path,
    label: &LabelColumn,
) -> Result<Option<usize>> {
    let width = table.rows[0].1.len();
    match label {
        LabelColumn::Index(i) if *i < width => Ok(Some(*i)),
        LabelColumn::Index(i) => Err(parse_error(
            path,
            table.rows[0].0,
            Some(i.to_string()),
            format!("label column index {i} out of range for {width} columns"),
        )),
        LabelColumn::Name(name) => match &table.header {
            Some(h) => Ok(h.iter().position(|c| c == name)),
            None => Err(Error::invalid(format!(
                "{}: headerless file needs a label column index, not a name",
                path.display()
            ))),
        },
    }
}

fn parse_features<T: Scalar>(
    table: &RawTable,
    path: &Path,
    skip: Option<usize>,
) -> Result<Matrix<T>> {
    let width = table.rows[0].1.len() - usize::from(skip.is_some());
    if width == 0 {
        return Err(parse_error(
            path,
            table.rows[0].0,
            None,
            "no feature columns",
        ));
    }
    let mut data = Vec::with_capacity(table.rows.len() * width);
    for (line, cells) in &table.rows {
        for (col, cell) in cells.iter().enumerate() {
            if Some(col) == skip {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| {
                parse_error(
                    path,
                    *line,
                    Some(column_name(table, col)),
                    format!("not a number: {cell:?}"),
                )
            })?;
            if !value.is_finite() {
                return Err(parse_error(
                    path,
                    *line,
                    Some(column_name(table, col)),
                    format!("non-finite value {cell:?}"),
                ));
            }
            let v = T::from_f64(value)
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    parse_error(
                        path,
                        *line,
                        Some(column_name(table, col)),
                        format!("{cell:?} overflows"),
                    )
                })?;
            data.push(v);
        }
    }
    Matrix::new(table.rows.len(), width, data)
}

/// Loads features plus a label column; labels are densified in order of first
/// appearance.
pub fn load_labeled<T: Scalar>(f: &DatasetFile) -> Result<(LabeledDataset<T>, LabelDictionary)> {
    let table = read_table(&f.path, f.has_header)?;
    let label_col = resolve_label_column(&table, &f.path, &f.label_column)?.ok_or_else(|| {
        parse_error(
            &f.path,
            1,
            None,
            format!("missing label column {:?}", f.label_column),
        )
    })?;
    let features = parse_features(&table, &f.path, Some(label_col))?;
    let mut dict = LabelDictionary::new();
    let labels = table
        .rows
        .iter()
        .map(|(_, cells)| dict.encode(&cells[label_col]))
        .collect();
    let dataset = LabeledDataset::new(features, labels, dict.len())?;
    Ok((dataset, dict))
}

/// Loads a feature matrix. A header column matching the label name is
/// dropped; an index-specified label column is dropped only when the file has
/// a header, since headerless targets normally carry no labels.
pub fn load_unlabeled<T: Scalar>(f: &DatasetFile) -> Result<Matrix<T>> {
    let table = read_table(&f.path, f.has_header)?;
    let skip = if f.has_header {
        resolve_label_column(&table, &f.path, &f.label_column)?
    } else {
        None
    };
    parse_features(&table, &f.path, skip)
}

/// Reads just the label column of a file (e.g. ground truth or a predictions
/// file). A single-column file is read as labels whatever its header says.
pub fn load_label_column(f: &DatasetFile) -> Result<Vec<String>> {
    let table = read_table(&f.path, f.has_header)?;
    let col = if table.rows[0].1.len() == 1 {
        0
    } else {
        resolve_label_column(&table, &f.path, &f.label_column)?.ok_or_else(|| {
            parse_error(
                &f.path,
                1,
                None,
                format!("missing label column {:?}", f.label_column),
            )
        })?
    };
    Ok(table
        .rows
        .into_iter()
        .map(|(_, mut cells)| cells.swap_remove(col))
        .collect())
}

fn create_output(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, io::Error::other(format!("{other:?}"))),
    }
}

/// Writes `index,label` rows using the original label vocabulary.
pub fn write_predictions<W: Write>(labels: &[usize], dict: &LabelDictionary, out: W) -> Result<()> {
    let path = Path::new("<predictions>");
    let mut w = csv_writer(out);
    w.write_record(["index", "label"])
        .map_err(|e| csv_io(path, e))?;
    for (i, &l) in labels.iter().enumerate() {
        let name = dict
            .decode(l)
            .ok_or_else(|| Error::invalid(format!("class index {l} has no label")))?;
        w.write_record([i.to_string().as_str(), name])
            .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn save_predictions<T: Scalar>(
    p: &Prediction<T>,
    dict: &LabelDictionary,
    path: &Path,
) -> Result<()> {
    let out = create_output(path)?;
    write_predictions(&p.labels, dict, out).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Writes a feature matrix with a `x0,x1,...` header. Values use the shortest
/// representation that parses back to the same bits.
pub fn save_features<T: Scalar>(x: &Matrix<T>, path: &Path) -> Result<()> {
    let mut w = csv_writer(create_output(path)?);
    let header: Vec<String> = (0..x.cols()).map(|j| format!("x{j}")).collect();
    w.write_record(&header).map_err(|e| csv_io(path, e))?;
    for row in x.iter_rows() {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassAccuracy {
    pub label: String,
    pub accuracy: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub per_class_accuracy: Vec<ClassAccuracy>,
    pub n: usize,
}

/// Accuracy of `predicted` against `truth`, with per-class recall listed in
/// `class_order` first, then any other truth labels by first appearance.
pub fn evaluate<S: AsRef<str>>(
    predicted: &[S],
    truth: &[S],
    class_order: &[String],
) -> Result<Evaluation> {
    if predicted.len() != truth.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} ground-truth labels",
            predicted.len(),
            truth.len()
        )));
    }
    let mut classes = LabelDictionary::from_labels(class_order);
    let mut support = Vec::new();
    let mut hits = Vec::new();
    let mut correct = 0usize;
    for (p, t) in predicted.iter().zip(truth) {
        let c = classes.encode(t.as_ref());
        if c >= support.len() {
            support.resize(c + 1, 0usize);
            hits.resize(c + 1, 0usize);
        }
        support[c] += 1;
        if p.as_ref() == t.as_ref() {
            hits[c] += 1;
            correct += 1;
        }
    }
    let per_class_accuracy = support
        .iter()
        .zip(&hits)
        .enumerate()
        .filter(|(_, (&s, _))| s > 0)
        .map(|(c, (&s, &h))| ClassAccuracy {
            label: classes.labels()[c].clone(),
            accuracy: h as f64 / s as f64,
            support: s,
        })
        .collect();
    let n = truth.len();
    Ok(Evaluation {
        accuracy: if n == 0 {
            0.0
        } else {
            correct as f64 / n as f64
        },
        per_class_accuracy,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallTimes {
    pub load: f64,
    pub alignment: f64,
    pub classification: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    /// `None` when no ground truth was supplied.
    pub accuracy: Option<f64>,
    pub per_class_accuracy: Vec<ClassAccuracy>,
    pub n_source: usize,
    pub n_target: usize,
    pub num_classes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<WallTimes>,
    pub config: PipelineConfig,
    pub label_dictionary: Vec<String>,
}

pub fn report_json(report: &TaskReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn save_report(report: &TaskReport, path: &Path) -> Result<()> {
    let mut out = create_output(path)?;
    out.write_all(report_json(report).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}
