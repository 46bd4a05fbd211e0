use serde::{Deserialize, Serialize};

use super::matrix::{c64, ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Row-major interchange format `{"rows", "cols", "re", "im"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            re: a.data().iter().map(|z| z.re).collect(),
            im: a.data().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected {n} entries for {}x{}, got re={} im={}",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self.re.iter().zip(&self.im).map(|(&r, &i)| c64(r, i)).collect();
        ComplexMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        serde_json::from_str::<Self>(text)?.to_matrix()
    }

    pub fn render(a: &ComplexMatrix) -> String {
        serde_json::to_string(&Self::from_matrix(a)).expect("plain numbers always serialize")
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        j.to_matrix()
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(a: ComplexMatrix) -> Self {
        MatrixJson::from_matrix(&a)
    }
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        j.to_hermitian()
    }
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(a: HermitianMatrix) -> Self {
        MatrixJson::from_matrix(&a)
    }
}
