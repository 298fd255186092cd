//! JSON form of complex matrices.
//!
//! A matrix is `{"rows": m, "cols": n, "columns": [[[re, im], ...], ...]}`
//! with `n` column arrays of `m` entries each.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matcore::ComplexMatrix;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<[f64; 2]>>,
}

pub fn to_doc(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixDoc::from(m)).expect("matrix serialises")
}

impl From<&ComplexMatrix> for MatrixDoc {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixDoc {
            rows: m.nrows(),
            cols: m.ncols(),
            columns: m
                .column_iter()
                .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixDoc> for ComplexMatrix {
    type Error = String;

    fn try_from(d: MatrixDoc) -> Result<Self, String> {
        if d.columns.len() != d.cols {
            return Err(format!(
                "matrix declares {} columns but lists {}",
                d.cols,
                d.columns.len()
            ));
        }
        let mut out = ComplexMatrix::zeros(d.rows, d.cols);
        for (j, col) in d.columns.iter().enumerate() {
            if col.len() != d.rows {
                return Err(format!(
                    "column {j} has {} entries, expected {}",
                    col.len(),
                    d.rows
                ));
            }
            for (i, [re, im]) in col.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(format!("non-finite entry at ({i}, {j})"));
                }
                out[(i, j)] = Complex64::new(*re, *im);
            }
        }
        Ok(out)
    }
}

/// `#[serde(with = "jsonio::matrix")]` adapter.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        MatrixDoc::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        ComplexMatrix::try_from(doc).map_err(D::Error::custom)
    }
}
