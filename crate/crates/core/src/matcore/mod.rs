//! Dense complex matrices with a Hermitian wrapper, eigendecomposition,
//! Schatten norms and positive-semidefiniteness checks.

mod eigh;
mod json;
mod matrix;
mod norms;

pub use eigh::{eigh, eigvalsh, EigenDecomposition};
pub use json::MatrixJson;
pub use matrix::{c64, ComplexMatrix, HermitianMatrix, HERMITIZE_TOL};
pub use num_complex::Complex64;
pub use norms::{
    is_psd, is_psd_default, schatten_norm, singular_values, thin_svd, Norm, PsdReport, SvdTriple,
    DEFAULT_PSD_TOL,
};
