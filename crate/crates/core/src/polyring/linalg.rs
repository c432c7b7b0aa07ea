//! Exact linear algebra on coefficient vectors: echelon spans of polynomials
//! and small dense solves.

use std::collections::BTreeMap;

use super::poly::{Monomial, Poly};
use super::scalar::Scalar;
use super::PolyError;

/// Row-echelon basis of a span of polynomials, keyed by leading monomial.
#[derive(Clone, Debug, Default)]
pub struct EchelonSpan {
    pivots: BTreeMap<Monomial, Poly>,
}

impl EchelonSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `p` against the current pivots.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut r = p.clone();
        // only the leading term needs eliminating each step; the pivot's
        // other terms are all smaller
        let mut done = Poly::zero(p.nvars(), p.backend());
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match self.pivots.get(&m) {
                Some(pivot) => r.add_scaled(pivot, &-&c),
                None => {
                    done.add_term(m.clone(), c.clone());
                    r.add_term(m, -&c);
                }
            }
        }
        done
    }

    /// Inserts `p`; returns false when it already lies in the span.
    pub fn insert(&mut self, p: &Poly) -> bool {
        let r = self.reduce(p);
        match r.leading() {
            None => false,
            Some((m, _)) => {
                let m = m.clone();
                self.pivots.insert(m, r.monic());
                true
            }
        }
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Rank of a family of polynomials viewed as coefficient vectors.
pub fn rank(polys: &[Poly]) -> usize {
    let mut span = EchelonSpan::new();
    polys.iter().filter(|p| span.insert(p)).count()
}

/// Inverts a square matrix by Gauss-Jordan elimination.
pub fn invert(matrix: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, PolyError> {
    let n = matrix.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let backend = matrix[0][0].backend();
    let mut a: Vec<Vec<Scalar>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { backend.one() } else { backend.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| PolyError::Arithmetic("singular matrix".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].inv();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let v = &a[r][k] - &(&f * &a[col][k]);
                    a[r][k] = v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
