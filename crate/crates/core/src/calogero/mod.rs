//! The physics layer: Hamiltonian, eigenbasis, sinusoidal coordinates,
//! Heisenberg solutions and the identity suites.

mod eigen;
mod hamiltonian;
mod heisenberg;
mod hermite;
mod identities;
mod sinusoidal;
pub mod suites;

use std::sync::Arc;

pub use eigen::{BasisReport, Eigenfunction};
pub use hamiltonian::{hamiltonian_apply, hamiltonian_poly, hamiltonian_ratfun};
pub use heisenberg::{Component, FrequencyDecomposition, HeisenbergCheck};
pub use hermite::{hermite, HermiteReport};
pub use identities::{ClosureForm, ConservedReport, DtypeReport};
pub use sinusoidal::{Piece, SinusoidalCoordinate};

use crate::laxops::{BetaApplication, Budget, LaxError, LaxOperators};
use crate::polyring::{Poly, PolyError, Scalar};
use crate::rootsys::{Family, RepKind, RepSet, RootSystem, RootSystemError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalogeroError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<LaxError> for CalogeroError {
    fn from(e: LaxError) -> Self {
        match e {
            LaxError::Usage(s) => CalogeroError::Usage(s),
            LaxError::Domain(s) => CalogeroError::Domain(s),
            LaxError::Resource(s) => CalogeroError::Resource(s),
            other => CalogeroError::Internal(other.to_string()),
        }
    }
}

impl From<RootSystemError> for CalogeroError {
    fn from(e: RootSystemError) -> Self {
        match e {
            RootSystemError::Usage(s) => CalogeroError::Usage(s),
            RootSystemError::Domain(s) => CalogeroError::Domain(s),
            other => CalogeroError::Internal(other.to_string()),
        }
    }
}

impl From<PolyError> for CalogeroError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Usage(s) => CalogeroError::Usage(s),
            other => CalogeroError::Internal(other.to_string()),
        }
    }
}

/// A root system together with the Lax operators every sinusoidal
/// coordinate is built from.
#[derive(Clone, Debug)]
pub struct Model {
    rs: Arc<RootSystem>,
    standard: Arc<LaxOperators>,
    spinor: Option<Arc<LaxOperators>>,
    antispinor: Option<Arc<LaxOperators>>,
    budget: Budget,
    spinor_fault: bool,
}

impl Model {
    /// Uses the preferred representation set of the family.
    pub fn new(rs: RootSystem, budget: Budget) -> Result<Model, CalogeroError> {
        let kind = RepKind::default_for(&rs);
        Model::with_repset(rs, kind, budget)
    }

    pub fn with_repset(rs: RootSystem, kind: RepKind, budget: Budget) -> Result<Model, CalogeroError> {
        let rs = Arc::new(rs);
        let ops = |k: RepKind| -> Result<Arc<LaxOperators>, CalogeroError> {
            let set = Arc::new(RepSet::build(&rs, k)?);
            Ok(Arc::new(LaxOperators::new(rs.clone(), set)?))
        };
        let standard = ops(kind)?;
        let (spinor, antispinor) = if rs.spec().family == Family::D {
            (Some(ops(RepKind::Spinor)?), Some(ops(RepKind::Antispinor)?))
        } else {
            (None, None)
        };
        Ok(Model { rs, standard, spinor, antispinor, budget, spinor_fault: false })
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn with_budget(mut self, budget: Budget) -> Model {
        self.budget = budget;
        self
    }

    pub fn standard(&self) -> &Arc<LaxOperators> {
        &self.standard
    }

    pub fn spinor(&self) -> Option<&Arc<LaxOperators>> {
        self.spinor.as_ref()
    }

    pub fn antispinor(&self) -> Option<&Arc<LaxOperators>> {
        self.antispinor.as_ref()
    }

    pub fn nvars(&self) -> usize {
        self.rs.dim()
    }

    pub fn rank(&self) -> usize {
        self.rs.degrees().len()
    }

    /// `f_j` for `j = 1..=r`.
    pub fn degree(&self, j: usize) -> Result<u32, CalogeroError> {
        if j == 0 || j > self.rank() {
            return Err(CalogeroError::Usage(format!("j must lie in 1..={}, got {j}", self.rank())));
        }
        Ok(self.rs.degrees()[j - 1])
    }

    /// Whether coordinate `j` is the D-type spinor construction.
    pub fn is_spinor_coordinate(&self, j: usize) -> bool {
        self.spinor.is_some() && j == self.rank()
    }

    /// Representation sets and signs whose total sums define `η^{(j)}` and
    /// its `β` operators.
    pub fn pieces(&self, j: usize) -> Result<Vec<Piece>, CalogeroError> {
        self.degree(j)?;
        if self.is_spinor_coordinate(j) {
            let mut out = vec![Piece { ops: self.spinor.clone().expect("D family"), sign: 1 }];
            let asp = self.antispinor.clone().expect("D family");
            if self.spinor_fault {
                out.push(Piece { ops: asp, sign: 1 });
            } else if self.rank() % 2 == 0 {
                out.push(Piece { ops: asp, sign: -1 });
            }
            return Ok(out);
        }
        Ok(vec![Piece { ops: self.standard.clone(), sign: 1 }])
    }

    /// Copy in which every `A±` uses `value` for the coupling of `root`.
    pub fn with_lax_fault(&self, root: usize, value: Scalar) -> Model {
        let fault = |o: &Arc<LaxOperators>| Arc::new(o.with_lax_coupling(root, value.clone()));
        Model {
            rs: self.rs.clone(),
            standard: fault(&self.standard),
            spinor: self.spinor.as_ref().map(fault),
            antispinor: self.antispinor.as_ref().map(fault),
            budget: self.budget,
            spinor_fault: self.spinor_fault,
        }
    }

    /// Copy whose D-type spinor coordinate adds the anti-spinor sum instead
    /// of subtracting it (or omitting it, for odd rank).
    pub fn with_spinor_sign_fault(&self) -> Model {
        let mut out = self.clone();
        out.spinor_fault = true;
        out
    }

    pub fn hamiltonian(&self, p: &Poly) -> Result<Poly, CalogeroError> {
        hamiltonian_apply(&self.rs, p)
    }

    pub(crate) fn h(&self, p: &Poly) -> Result<Poly, CalogeroError> {
        hamiltonian_poly(&self.rs, p)
    }

    /// `β_{f_j;f_j-2l}·P` for all `l`, summed over the pieces of `j`.
    pub fn beta(&self, j: usize, p: &Poly) -> Result<BetaApplication, CalogeroError> {
        let f = self.degree(j)?;
        let mut total: Option<BetaApplication> = None;
        for piece in self.pieces(j)? {
            let b = piece.ops.generating_unchecked(f, p, &self.budget)?;
            total = Some(match total {
                None => piece.signed(b),
                Some(mut acc) => {
                    for (x, y) in acc.beta.iter_mut().zip(piece.signed(b).beta) {
                        *x = &*x + &y;
                    }
                    acc
                }
            });
        }
        Ok(total.expect("at least one piece"))
    }

    /// As [`Model::beta`], rejecting non-invariant `P`.
    pub fn beta_checked(&self, j: usize, p: &Poly) -> Result<BetaApplication, CalogeroError> {
        self.standard.check_invariant(p)?;
        self.beta(j, p)
    }

    /// `β_{f_j;f_j}·P`.
    pub fn creation(&self, j: usize, p: &Poly) -> Result<Poly, CalogeroError> {
        let f = self.degree(j)?;
        let mut acc = Poly::zero(self.nvars(), self.rs.backend());
        for piece in self.pieces(j)? {
            let c = piece.ops.creation_apply(f, p, &self.budget)?;
            acc.add_scaled(&c, &self.rs.backend().from_i64(piece.sign));
        }
        Ok(acc)
    }

    /// `β_{f_j;f_j-2l}·P` for one `l`.
    pub fn beta_coefficient(&self, j: usize, l: usize, p: &Poly) -> Result<Poly, CalogeroError> {
        let f = self.degree(j)?;
        if l > f as usize {
            return Err(CalogeroError::Usage(format!("l must lie in 0..={f}")));
        }
        let mut acc = Poly::zero(self.nvars(), self.rs.backend());
        for piece in self.pieces(j)? {
            let c = piece.ops.beta_upto(f, l, p, &self.budget)?;
            acc.add_scaled(&c[l], &self.rs.backend().from_i64(piece.sign));
        }
        Ok(acc)
    }
}
