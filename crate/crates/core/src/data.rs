//! Annotation matrices: annotators in rows, datapoints in columns, ratings on
//! a `1..=K` Likert scale with `0` marking a missing rating.

use std::collections::HashSet;
use std::io::{Read, Write};

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use thiserror::Error;

/// The rating value that marks a missing cell.
pub const MISSING: u32 = 0;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("row {row}, column {col}: `{value}` is not an integer rating")]
    NotAnInteger { row: usize, col: usize, value: String },
    #[error("row {row}, column {col}: value {value} is outside 0..={scale_max}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: i64,
        scale_max: u32,
    },
    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("need at least 2 datapoints (columns), found {0}")]
    TooFewDatapoints(usize),
    #[error("need at least 1 annotator (row)")]
    NoAnnotators,
    #[error("scale maximum must be at least 2, got {0}")]
    ScaleTooSmall(u32),
    #[error("expected {expected} {kind} labels, got {found}")]
    LabelCount {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("duplicate {kind} label `{label}`")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("{kind} index {index} out of range (len {len})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Validated `m x n` rating grid with labels.
///
/// Immutable once built; every constructor checks the bounds, shape and
/// label invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationMatrix {
    ratings: Array2<u32>,
    scale_max: u32,
    annotator_ids: Vec<String>,
    datapoint_ids: Vec<String>,
}

impl AnnotationMatrix {
    /// Builds a matrix from a rating grid. Missing labels are synthesized as
    /// `a1..am` and `d1..dn`.
    pub fn new(
        ratings: Array2<u32>,
        scale_max: u32,
        annotator_ids: Option<Vec<String>>,
        datapoint_ids: Option<Vec<String>>,
    ) -> Result<Self, DataError> {
        if scale_max < 2 {
            return Err(DataError::ScaleTooSmall(scale_max));
        }
        let (m, n) = ratings.dim();
        if m == 0 {
            return Err(DataError::NoAnnotators);
        }
        if n < 2 {
            return Err(DataError::TooFewDatapoints(n));
        }
        for ((i, j), &r) in ratings.indexed_iter() {
            if r > scale_max {
                return Err(DataError::OutOfRange {
                    row: i + 1,
                    col: j + 1,
                    value: i64::from(r),
                    scale_max,
                });
            }
        }
        let annotator_ids = check_labels("annotator", annotator_ids, m, 'a')?;
        let datapoint_ids = check_labels("datapoint", datapoint_ids, n, 'd')?;
        Ok(Self {
            ratings,
            scale_max,
            annotator_ids,
            datapoint_ids,
        })
    }

    /// Convenience constructor from nested rows, mostly for tests and examples.
    pub fn from_rows(rows: &[Vec<u32>], scale_max: u32) -> Result<Self, DataError> {
        let m = rows.len();
        if m == 0 {
            return Err(DataError::NoAnnotators);
        }
        let n = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(DataError::Ragged {
                    row: i + 1,
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let flat: Vec<u32> = rows.iter().flatten().copied().collect();
        let grid = Array2::from_shape_vec((m, n), flat).expect("shape checked above");
        Self::new(grid, scale_max, None, None)
    }

    /// Parses comma-separated integer ratings.
    ///
    /// A header row of datapoint ids and a leading column of annotator ids are
    /// detected from non-integer cells: a non-integer anywhere in the first
    /// row past column 0 means a header, anywhere in the first column past
    /// row 0 means a label column, and a lone non-integer corner cell is read
    /// as whichever of the two the rest of the file supports. With
    /// `transpose`, the file is read as datapoints x annotators.
    pub fn load_csv<R: Read>(source: R, scale_max: u32, transpose: bool) -> Result<Self, DataError> {
        if scale_max < 2 {
            return Err(DataError::ScaleTooSmall(scale_max));
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source);

        let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let line = rec.position().map_or(rows.len() + 1, |p| p.line() as usize);
            rows.push((line, rec.iter().map(str::to_owned).collect()));
        }
        if rows.is_empty() {
            return Err(if transpose {
                DataError::TooFewDatapoints(0)
            } else {
                DataError::NoAnnotators
            });
        }

        let width = rows[0].1.len();
        for (line, cells) in &rows {
            if cells.len() != width {
                return Err(DataError::Ragged {
                    row: *line,
                    expected: width,
                    found: cells.len(),
                });
            }
        }

        // blank cells are never labels; only the corner of a labeled file may be empty
        for (r, (line, cells)) in rows.iter().enumerate() {
            for (c, cell) in cells.iter().enumerate() {
                if cell.is_empty() && (r, c) != (0, 0) {
                    return Err(DataError::NotAnInteger {
                        row: *line,
                        col: c + 1,
                        value: String::new(),
                    });
                }
            }
        }
        let is_int = |s: &str| s.parse::<i64>().is_ok();
        let corner = !is_int(&rows[0].1[0]);
        let row0_rest = rows[0].1.iter().skip(1).any(|c| !is_int(c));
        let col0_rest = rows.iter().skip(1).any(|(_, c)| !is_int(&c[0]));
        let has_header = row0_rest || (corner && !col0_rest && rows.len() > 1);
        let has_labels = col0_rest || (corner && !row0_rest);

        let col_labels: Option<Vec<String>> = has_header.then(|| rows[0].1[usize::from(has_labels)..].to_vec());
        let body = &rows[usize::from(has_header)..];
        let row_labels: Option<Vec<String>> = has_labels.then(|| body.iter().map(|(_, c)| c[0].clone()).collect());

        let skip = usize::from(has_labels);
        let (nr, nc) = (body.len(), width - skip);
        let mut grid = Array2::<u32>::zeros((nr, nc));
        for (i, (line, cells)) in body.iter().enumerate() {
            for (j, cell) in cells[skip..].iter().enumerate() {
                let col = j + skip + 1;
                let v: i64 = cell.parse().map_err(|_| DataError::NotAnInteger {
                    row: *line,
                    col,
                    value: cell.clone(),
                })?;
                if v < 0 || v > i64::from(scale_max) {
                    return Err(DataError::OutOfRange {
                        row: *line,
                        col,
                        value: v,
                        scale_max,
                    });
                }
                grid[[i, j]] = v as u32;
            }
        }

        if transpose {
            let grid = grid.reversed_axes().as_standard_layout().into_owned();
            Self::new(grid, scale_max, col_labels, row_labels)
        } else {
            Self::new(grid, scale_max, row_labels, col_labels)
        }
    }

    /// Writes the grid as CSV; `labeled` adds the header row and label column.
    pub fn write_csv<W: Write>(&self, mut out: W, labeled: bool) -> std::io::Result<()> {
        if labeled {
            write!(out, "annotator")?;
            for id in &self.datapoint_ids {
                write!(out, ",{id}")?;
            }
            writeln!(out)?;
        }
        for (i, row) in self.ratings.outer_iter().enumerate() {
            let mut first = true;
            if labeled {
                write!(out, "{}", self.annotator_ids[i])?;
                first = false;
            }
            for r in row {
                if !first {
                    write!(out, ",")?;
                }
                write!(out, "{r}")?;
                first = false;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn n_annotators(&self) -> usize {
        self.ratings.nrows()
    }

    pub fn n_datapoints(&self) -> usize {
        self.ratings.ncols()
    }

    pub fn scale_max(&self) -> u32 {
        self.scale_max
    }

    pub fn ratings(&self) -> ArrayView2<'_, u32> {
        self.ratings.view()
    }

    pub fn annotator_ids(&self) -> &[String] {
        &self.annotator_ids
    }

    pub fn datapoint_ids(&self) -> &[String] {
        &self.datapoint_ids
    }

    /// Ratings given to datapoint `j` by every annotator, zeros included.
    pub fn column(&self, j: usize) -> Result<ArrayView1<'_, u32>, DataError> {
        if j >= self.n_datapoints() {
            return Err(DataError::IndexOutOfRange {
                kind: "datapoint",
                index: j,
                len: self.n_datapoints(),
            });
        }
        Ok(self.ratings.column(j))
    }

    pub fn row(&self, i: usize) -> Result<ArrayView1<'_, u32>, DataError> {
        if i >= self.n_annotators() {
            return Err(DataError::IndexOutOfRange {
                kind: "annotator",
                index: i,
                len: self.n_annotators(),
            });
        }
        Ok(self.ratings.row(i))
    }

    /// `true` exactly where the rating is missing.
    pub fn missing_mask(&self) -> Array2<bool> {
        self.ratings.mapv(|r| r == MISSING)
    }

    /// Ratings as reals, for the linear algebra.
    pub fn to_f64(&self) -> Array2<f64> {
        self.ratings.mapv(f64::from)
    }

    /// New matrix whose column `k` is this matrix's column `order[k]`.
    pub fn select_datapoints(&self, order: &[usize]) -> Result<Self, DataError> {
        self.select(Axis(1), order)
    }

    /// New matrix whose row `k` is this matrix's row `order[k]`.
    pub fn select_annotators(&self, order: &[usize]) -> Result<Self, DataError> {
        self.select(Axis(0), order)
    }

    fn select(&self, axis: Axis, order: &[usize]) -> Result<Self, DataError> {
        let len = self.ratings.len_of(axis);
        if let Some(&bad) = order.iter().find(|&&k| k >= len) {
            return Err(DataError::IndexOutOfRange {
                kind: if axis == Axis(0) { "annotator" } else { "datapoint" },
                index: bad,
                len,
            });
        }
        let ratings = self.ratings.select(axis, order);
        let (mut aids, mut dids) = (self.annotator_ids.clone(), self.datapoint_ids.clone());
        let picked = |ids: &[String]| -> Vec<String> {
            let mut seen = HashSet::new();
            order
                .iter()
                .map(|&k| {
                    // repeated picks get a suffix so labels stay unique
                    let base = ids[k].clone();
                    let mut label = base.clone();
                    let mut dup = 1;
                    while !seen.insert(label.clone()) {
                        dup += 1;
                        label = format!("{base}#{dup}");
                    }
                    label
                })
                .collect()
        };
        if axis == Axis(0) {
            aids = picked(&aids);
        } else {
            dids = picked(&dids);
        }
        Self::new(ratings, self.scale_max, Some(aids), Some(dids))
    }
}

fn check_labels(
    kind: &'static str,
    labels: Option<Vec<String>>,
    expected: usize,
    prefix: char,
) -> Result<Vec<String>, DataError> {
    let labels = labels.unwrap_or_else(|| (1..=expected).map(|k| format!("{prefix}{k}")).collect());
    if labels.len() != expected {
        return Err(DataError::LabelCount {
            kind,
            expected,
            found: labels.len(),
        });
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for l in &labels {
        if !seen.insert(l.as_str()) {
            return Err(DataError::DuplicateLabel { kind, label: l.clone() });
        }
    }
    Ok(labels)
}
