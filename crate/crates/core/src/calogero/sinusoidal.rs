use std::sync::Arc;

use serde::Serialize;

use super::{CalogeroError, Model};
use crate::laxops::{BetaApplication, LaxOperators};
use crate::polyring::Poly;

/// One signed total sum contributing to a sinusoidal coordinate.
#[derive(Clone, Debug)]
pub struct Piece {
    pub ops: Arc<LaxOperators>,
    pub sign: i64,
}

impl Piece {
    pub(crate) fn signed(&self, mut b: BetaApplication) -> BetaApplication {
        if self.sign < 0 {
            for p in b.beta.iter_mut() {
                *p = -&*p;
            }
        }
        b
    }

    /// `Ts(Q^f)` over this piece's set.
    pub fn power_sum(&self, f: u32) -> Poly {
        let ops = &self.ops;
        let mut acc = Poly::zero(ops.nvars(), ops.backend());
        for mu in 0..ops.dim() {
            acc.add_scaled(&ops.weight_form(mu).pow(f), &ops.backend().from_i64(self.sign));
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceRecord {
    pub repset: String,
    pub dim: usize,
    pub sign: i64,
}

/// `η^{(j)} = Ts(Q^{f_j})` together with how it was assembled.
#[derive(Clone, Debug, Serialize)]
pub struct SinusoidalCoordinate {
    pub j: usize,
    pub f: u32,
    pub eta: Poly,
    pub pieces: Vec<PieceRecord>,
}

impl Model {
    pub fn sinusoidal_coordinate(&self, j: usize) -> Result<SinusoidalCoordinate, CalogeroError> {
        let f = self.degree(j)?;
        let pieces = self.pieces(j)?;
        let mut eta = Poly::zero(self.nvars(), self.root_system().backend());
        for piece in &pieces {
            eta = &eta + &piece.power_sum(f);
        }
        Ok(SinusoidalCoordinate {
            j,
            f,
            eta,
            pieces: pieces
                .iter()
                .map(|p| PieceRecord {
                    repset: p.ops.repset().kind().to_string(),
                    dim: p.ops.dim(),
                    sign: p.sign,
                })
                .collect(),
        })
    }

    /// `η^{(j)}` as a polynomial.
    pub fn eta(&self, j: usize) -> Result<Poly, CalogeroError> {
        Ok(self.sinusoidal_coordinate(j)?.eta)
    }
}
