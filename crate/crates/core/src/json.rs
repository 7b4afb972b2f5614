//! Matrix JSON format: `{"dim": d, "entries": [[re, im], ...]}` with `d^2`
//! entries in row-major order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.dim == 0 {
            return Err(Error::InvalidInput("dim must be positive".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::InvalidInput(format!(
                "dim {} requires {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.entries.iter().map(|[re, im]| C64::new(*re, *im)),
        ))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed matrix JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix JSON serialization cannot fail")
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }

    pub fn to_psd(&self) -> Result<PsdMatrix> {
        PsdMatrix::new(self.to_hermitian()?)
    }

    pub fn to_pd(&self) -> Result<PdMatrix> {
        PdMatrix::new(self.to_psd()?)
    }
}
