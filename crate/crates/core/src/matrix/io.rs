//! Matrix text formats.
//!
//! JSON: `{"rows": n, "cols": m, "entries": [["1", "1/2"], ...]}` with each
//! entry a rational string. CSV: one row per line, same cell syntax.
//! Serialization always writes canonical rational strings.

use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixDoc> for Matrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        if doc.entries.len() != doc.rows {
            return Err(Error::ShapeMismatch(format!(
                "declared {} rows, found {}",
                doc.rows,
                doc.entries.len()
            )));
        }
        if let Some(row) = doc.entries.iter().find(|r| r.len() != doc.cols) {
            return Err(Error::ShapeMismatch(format!(
                "declared {} columns, found a row of {}",
                doc.cols,
                row.len()
            )));
        }
        Matrix::from_rows(doc.entries)
    }
}

impl From<&Matrix> for MatrixDoc {
    fn from(m: &Matrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|r| m.row(r).to_vec()).collect(),
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(deserializer)?;
        Matrix::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl Matrix {
    pub fn from_json_str(text: &str) -> Result<Matrix> {
        let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Matrix::try_from(doc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_csv_str(text: &str) -> Result<Matrix> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let row = record
                .iter()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Matrix::from_rows(rows)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows() {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Reads JSON when the text starts with `{`, CSV otherwise.
    pub fn from_text(text: &str) -> Result<Matrix> {
        if text.trim_start().starts_with('{') {
            Matrix::from_json_str(text)
        } else {
            Matrix::from_csv_str(text)
        }
    }
}
