use serde::Serialize;

use super::budget::Budget;
use super::operators::LaxOperators;
use super::LaxError;
use crate::polyring::Poly;

/// Polynomial in a formal `s` with vector coefficients: `coeffs[k]` is the
/// coefficient of `s^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SPoly {
    pub coeffs: Vec<Vec<Poly>>,
}

/// `β_{f;f-2l}·P` for `l = 0..=f`, in the real form. The operators of the
/// complex picture are `b = i^f β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaApplication {
    pub f: u32,
    /// `f mod 4`, the power of `i` relating `β` to `b`.
    pub i_power: u32,
    /// Entry `l` is `β_{f;f-2l}·P`.
    pub beta: Vec<Poly>,
}

impl BetaApplication {
    /// `β_{f;f-2l}·P`.
    pub fn coefficient(&self, l: usize) -> &Poly {
        &self.beta[l]
    }

    /// Frequency `f - 2l` carried by entry `l`.
    pub fn frequency(&self, l: usize) -> i64 {
        i64::from(self.f) - 2 * l as i64
    }
}

impl LaxOperators {
    /// Rejects polynomials not invariant under the simple reflections.
    pub fn check_invariant(&self, p: &Poly) -> Result<(), LaxError> {
        let rs = self.root_system();
        for &a in rs.simple_indices() {
            if rs.reflect_poly(a, p) != *p {
                return Err(LaxError::Domain(format!("polynomial is not invariant under reflection {a}")));
            }
        }
        Ok(())
    }

    /// `(A⁺ + s A⁻)^f` applied to the constant seed `P`, keeping powers of
    /// `s` up to `max_power`.
    pub fn expand(&self, f: u32, p: &Poly, max_power: usize, budget: &Budget) -> Result<SPoly, LaxError> {
        budget.check_expansion(f, self.dim(), p.degree().unwrap_or(0))?;
        let two = self.backend().from_i64(2);
        let mut state: Vec<Vec<Poly>> = vec![vec![p.clone(); self.dim()]];
        for _ in 0..f {
            let mut next: Vec<Option<Vec<Poly>>> = Vec::with_capacity(state.len() + 1);
            for (k, v) in state.iter().enumerate() {
                if v.iter().all(Poly::is_zero) {
                    push_add(&mut next, k, None);
                    if k < max_power {
                        push_add(&mut next, k + 1, None);
                    }
                    continue;
                }
                let minus = self.apply_a_minus(v)?;
                let q = self.apply_q(v);
                let plus: Vec<Poly> = minus
                    .iter()
                    .zip(&q)
                    .map(|(m, q)| {
                        let mut out = m.clone();
                        out.add_scaled(q, &two);
                        out
                    })
                    .collect();
                for e in &plus {
                    budget.check_terms(e.len())?;
                }
                push_add(&mut next, k, Some(plus));
                if k < max_power {
                    push_add(&mut next, k + 1, Some(minus));
                }
            }
            state = next
                .into_iter()
                .map(|v| v.unwrap_or_else(|| vec![Poly::zero(self.nvars(), self.backend()); self.dim()]))
                .collect();
        }
        Ok(SPoly { coeffs: state })
    }

    /// All coefficients `β_{f;f-2l}·P`, `l = 0..=f`.
    pub fn generating_apply(&self, f: u32, p: &Poly, budget: &Budget) -> Result<BetaApplication, LaxError> {
        self.check_invariant(p)?;
        self.generating_unchecked(f, p, budget)
    }

    pub(crate) fn generating_unchecked(&self, f: u32, p: &Poly, budget: &Budget) -> Result<BetaApplication, LaxError> {
        let s = self.expand(f, p, f as usize, budget)?;
        let beta = s.coeffs.iter().map(|v| self.total_sum_poly(v)).collect();
        Ok(BetaApplication { f, i_power: f % 4, beta })
    }

    /// `β_{f;f}·P = Ts((A⁺)^f P)`.
    pub fn creation_apply(&self, f: u32, p: &Poly, budget: &Budget) -> Result<Poly, LaxError> {
        let s = self.expand(f, p, 0, budget)?;
        Ok(self.total_sum_poly(&s.coeffs[0]))
    }

    /// `β_{f;f-2l}·P` for `l <= max_l` only.
    pub fn beta_upto(&self, f: u32, max_l: usize, p: &Poly, budget: &Budget) -> Result<Vec<Poly>, LaxError> {
        let s = self.expand(f, p, max_l, budget)?;
        Ok(s.coeffs.iter().map(|v| self.total_sum_poly(v)).collect())
    }
}

fn push_add(next: &mut Vec<Option<Vec<Poly>>>, k: usize, v: Option<Vec<Poly>>) {
    while next.len() <= k {
        next.push(None);
    }
    match (next[k].as_mut(), v) {
        (_, None) => {}
        (None, Some(v)) => next[k] = Some(v),
        (Some(acc), Some(v)) => {
            for (a, b) in acc.iter_mut().zip(v) {
                *a = &*a + &b;
            }
        }
    }
}
