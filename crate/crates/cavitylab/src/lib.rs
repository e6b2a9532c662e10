pub mod bem;
pub mod bound;
pub mod error;
pub mod geometry;
pub mod gmres;
pub mod linalg;
pub mod quadrature;
pub mod quasimodes;
pub mod specfun;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
