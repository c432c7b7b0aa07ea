use std::collections::BTreeMap;

use serde::Serialize;

use super::equivariant::EquivariantVec;
use super::operators::{LaxOperators, Letter};
use super::LaxError;
use crate::calogero::hamiltonian_ratfun;
use crate::polyring::{Poly, RatFun, Scalar};

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    /// Number of elementary comparisons made.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RatFun>,
}

impl Verdict {
    pub fn pass(checked: usize) -> Verdict {
        Verdict { pass: true, checked, detail: None, witness: None }
    }

    pub fn fail(checked: usize, detail: impl Into<String>, witness: Option<RatFun>) -> Verdict {
        Verdict { pass: false, checked, detail: Some(detail.into()), witness }
    }
}

impl LaxOperators {
    /// `v_{s_ρ μ} = v_μ ∘ s_ρ` for every positive root and weight.
    pub fn verify_equivariance(&self, v: &EquivariantVec) -> Verdict {
        let rs = self.root_system();
        let mut checked = 0;
        for a in 0..rs.positive_roots().len() {
            for mu in 0..self.dim() {
                checked += 1;
                let nu = self.partner(a, mu);
                let image = rs.reflect_ratfun(a, v.entry(mu));
                if image != *v.entry(nu) {
                    let diff = image.sub(v.entry(nu), self.forms());
                    return Verdict::fail(checked, format!("root {a}, weight {mu}: entry {nu} differs"), Some(diff));
                }
            }
        }
        Verdict::pass(checked)
    }

    /// Row and column sums of `M` vanish, hence `Ts(M) = 0`.
    ///
    /// Row sums are checked by applying `N` to the constant vector. Column
    /// `ν` of `N` is `Σ_ρ ½ g|ρ|²(1 - #{μ : s_ρ μ = ν})/(ρ·q)²`, kept in
    /// partial-fraction form; the `1/(ρ·q)²` are independent, so it vanishes
    /// iff every coefficient does.
    pub fn verify_m_sum_rule(&self) -> Verdict {
        let rs = self.root_system();
        let b = self.backend();
        let one = Poly::one(self.nvars(), b);
        let rows = self.apply_rational(Letter::N, &vec![RatFun::from(one); self.dim()]);
        let mut checked = 0;
        for (mu, r) in rows.iter().enumerate() {
            checked += 1;
            if !r.is_zero() {
                return Verdict::fail(checked, format!("row {mu} of M does not sum to zero"), Some(r.clone()));
            }
        }
        let half = b.from_ratio(1, 2);
        for a in 0..rs.positive_roots().len() {
            let mut preimages = vec![0i64; self.dim()];
            for mu in 0..self.dim() {
                match self.repset().try_reflect(a, mu) {
                    Some(nu) => preimages[nu] += 1,
                    None => {
                        return Verdict::fail(checked, format!("root {a}, weight {mu}: no reflection image"), None);
                    }
                }
            }
            let root = rs.root(a);
            let scale = &(&half * &root.coupling) * &root.norm2;
            for (nu, &count) in preimages.iter().enumerate() {
                checked += 1;
                let coeff: Scalar = &scale * &b.from_i64(1 - count);
                if !coeff.is_zero() {
                    let mut den = BTreeMap::new();
                    den.insert(a, 2);
                    let witness = RatFun::new(Poly::constant(self.nvars(), coeff), den, self.forms());
                    return Verdict::fail(
                        checked,
                        format!("root {a}, weight {nu}: column sum of M is nonzero ({count} preimages)"),
                        Some(witness),
                    );
                }
            }
        }
        Verdict::pass(checked)
    }

    /// `[H̃, A±]v = [A±, N]v ± A±v`, compared entry by entry.
    pub fn verify_lax_equation(&self, v: &EquivariantVec, sign: Letter) -> Result<Verdict, LaxError> {
        if !matches!(sign, Letter::APlus | Letter::AMinus) {
            return Err(LaxError::Usage("the Lax equation is stated for A+ and A-".into()));
        }
        let rs = self.root_system();
        let forms = self.forms();
        let h = |x: &EquivariantVec| -> EquivariantVec {
            EquivariantVec::new(x.entries().iter().map(|e| hamiltonian_ratfun(rs, e)).collect())
        };
        let av = self.apply(sign, v)?;
        let lhs = h(&av).sub(&self.apply(sign, &h(v))?, forms);
        let anv = self.apply(sign, &self.apply(Letter::N, v)?)?;
        let nav = self.apply(Letter::N, &av)?;
        let shift = if sign == Letter::APlus { av.clone() } else { av.scale(&self.backend().from_i64(-1)) };
        let rhs = anv.sub(&nav, forms).add(&shift, forms);
        for mu in 0..self.dim() {
            if lhs.entry(mu) != rhs.entry(mu) {
                let diff = lhs.entry(mu).sub(rhs.entry(mu), forms);
                return Ok(Verdict::fail(mu + 1, format!("entry {mu} differs"), Some(diff)));
            }
        }
        Ok(Verdict::pass(self.dim()))
    }
}
