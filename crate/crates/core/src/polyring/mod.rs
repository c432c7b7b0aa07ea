//! Coefficient fields, sparse multivariate polynomials and rational functions
//! with root-linear denominators.

pub mod linalg;
mod poly;
mod ratfun;
mod scalar;

pub use poly::{reflection_matrix, Division, Monomial, Poly};
pub use ratfun::{LinearForms, RatFun};
pub use scalar::{parse_coefficient, parse_rational, Backend, Scalar, FLOAT_TOL, RADICANDS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
}

/// Dot product of two coordinate vectors in one backend.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let backend = a.first().or(b.first()).map(Scalar::backend).unwrap_or(Backend::Rational);
    a.iter().zip(b).fold(backend.zero(), |acc, (x, y)| &acc + &(x * y))
}
