//! Root systems, orbit couplings, invariant degrees, representation sets
//! and the excitation spectrum.

mod construct;
mod repset;
mod spec;
mod spectrum;
mod system;

pub use repset::{ClosureReport, RepKind, RepSet, RepSetSummary};
pub use spec::{Couplings, Embedding, Family, Orbit, RootSystemSpec};
pub use spectrum::{quantum_numbers, Level, Spectrum, State};
pub use system::{Root, RootEntry, RootSystem, RootSystemSummary};

use crate::polyring::PolyError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootSystemError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[cfg(test)]
mod tests;
