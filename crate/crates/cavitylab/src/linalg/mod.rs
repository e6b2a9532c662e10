//! Dense complex helpers on top of `faer`, plus a symmetric tridiagonal
//! eigensolver.

pub mod dense;
pub mod tridiag;

pub use num_complex::Complex64 as C64;

/// Dense complex matrix (column major).
pub type CMat = faer::Mat<C64>;

pub use dense::{frobenius, identity, matvec, min_singular_value, norm2, singular_values, transpose, vec_norm};
