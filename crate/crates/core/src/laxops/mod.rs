//! Real-form Lax operators `A±`, `Q`, `N` acting on equivariant vectors,
//! operator words, the generating-function expansion of the symmetric
//! products and the structural checks on them.

mod budget;
mod checks;
mod equivariant;
mod generating;
mod operators;

pub use budget::Budget;
pub use checks::Verdict;
pub use equivariant::EquivariantVec;
pub use generating::{BetaApplication, SPoly};
pub use operators::{LaxOperators, LaxWord, Letter};

use crate::polyring::PolyError;
use crate::rootsys::RootSystemError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaxError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invariant violation at root {root}, weight {weight}: {detail}")]
    InvariantViolation { root: usize, weight: usize, detail: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
}

#[cfg(test)]
mod tests;
