use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use serde::Serialize;

use super::{CalogeroError, Model};
use crate::polyring::{Monomial, Poly};

/// Which closure relation to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureForm {
    /// `Π_{l=-f,-f+2..f} (ad H̃ - l) η = 0`.
    Full,
    /// For even `f`: drop `l = 0` and act on `η` minus its conserved part.
    Even,
}

impl ClosureForm {
    pub fn name(self) -> &'static str {
        match self {
            ClosureForm::Full => "full",
            ClosureForm::Even => "even",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservedReport {
    pub j: usize,
    pub k: usize,
    /// `[H̃, β_{f_j;0}]P = 0` on every test polynomial (`None` for odd `f_j`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conserved: Option<bool>,
    pub creation_commute: bool,
    pub annihilation_commute: bool,
    /// Test polynomial index with `[β_{f_j;0}, β_{f_k;0}]P ≠ 0`, if searched
    /// and found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution_witness: Option<usize>,
    pub involution_searched: bool,
    pub tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Poly>,
}

impl ConservedReport {
    pub fn pass(&self) -> bool {
        self.conserved != Some(false) && self.creation_commute && self.annihilation_commute
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DtypeReport {
    pub r: usize,
    pub eta: Poly,
    /// Coefficient of `q_1⋯q_r` when `η^{(r)}` is a multiple of it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
    pub proportional: bool,
}

/// Coefficients of `Π_{l∈roots} (x - l)`, lowest power first.
fn expand_roots(roots: &[i64]) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(1)];
    for &l in roots {
        let mut next = vec![BigInt::from(0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * BigInt::from(l);
        }
        c = next;
    }
    c
}

impl Model {
    /// Products of the sinusoidal coordinates of total degree at most
    /// `max_degree`, as a spanning set of invariant test polynomials.
    pub fn invariant_basis(&self, max_degree: u32) -> Result<Vec<Poly>, CalogeroError> {
        let etas: Vec<(u32, Poly)> = (1..=self.rank())
            .map(|j| Ok((self.degree(j)?, self.eta(j)?)))
            .collect::<Result<_, CalogeroError>>()?;
        let mut out = vec![(0u32, Poly::one(self.nvars(), self.root_system().backend()), 0usize)];
        let mut i = 0;
        while i < out.len() {
            let (deg, p, from) = out[i].clone();
            for (j, (f, eta)) in etas.iter().enumerate().skip(from) {
                if deg + f <= max_degree {
                    out.push((deg + f, &p * eta, j));
                }
            }
            i += 1;
        }
        out.sort_by_key(|(d, _, _)| *d);
        Ok(out.into_iter().map(|(_, p, _)| p).collect())
    }

    /// `ad(H̃)^k(X)·P` summed against `coeffs[k]`, for an operator `X`.
    fn ad_polynomial<F>(&self, coeffs: &[BigInt], x: F, p: &Poly) -> Result<Poly, CalogeroError>
    where
        F: Fn(&Poly) -> Result<Poly, CalogeroError>,
    {
        let b = self.root_system().backend();
        let top = coeffs.len() - 1;
        let mut h_pow = vec![p.clone()];
        for m in 0..top {
            h_pow.push(self.h(&h_pow[m])?);
        }
        let mut acc = Poly::zero(self.nvars(), b);
        // ad^k(X)P = Σ_i C(k,i) (-1)^{k-i} H̃^i X H̃^{k-i} P; group by m = k - i
        for m in 0..=top {
            let mut w = x(&h_pow[m])?;
            for i in 0..=top - m {
                let k = i + m;
                let c = &coeffs[k] * binomial(BigInt::from(k), BigInt::from(i));
                let c = if m % 2 == 1 { -c } else { c };
                if c != BigInt::from(0) {
                    acc.add_scaled(&w, &b.lift(&BigRational::from_integer(c)));
                }
                if i < top - m {
                    w = self.h(&w)?;
                }
            }
        }
        Ok(acc)
    }

    /// Closure relation for `η^{(j)}` applied to `P`; returns the residual.
    pub fn verify_closure(&self, j: usize, p: &Poly, form: ClosureForm) -> Result<Poly, CalogeroError> {
        let f = self.degree(j)? as i64;
        let eta = self.eta(j)?;
        match form {
            ClosureForm::Full => {
                let roots: Vec<i64> = (0..=f).map(|l| f - 2 * l).collect();
                self.ad_polynomial(&expand_roots(&roots), |v| Ok(&eta * v), p)
            }
            ClosureForm::Even => {
                if f % 2 == 1 {
                    return Err(CalogeroError::Usage(format!("the order-f closure form needs even f, got {f}")));
                }
                let roots: Vec<i64> = (0..=f).map(|l| f - 2 * l).filter(|&l| l != 0).collect();
                let b = self.root_system().backend();
                let half = (f / 2) as usize;
                let sign = if half % 2 == 0 { 1 } else { -1 };
                let c = b.from_ratio(-sign, 1i64 << f);
                let y = |v: &Poly| -> Result<Poly, CalogeroError> {
                    let mut out = &eta * v;
                    out.add_scaled(&self.beta_coefficient(j, half, v)?, &c);
                    Ok(out)
                };
                self.ad_polynomial(&expand_roots(&roots), y, p)
            }
        }
    }

    fn commutator<F, G>(&self, x: F, y: G, p: &Poly) -> Result<Poly, CalogeroError>
    where
        F: Fn(&Poly) -> Result<Poly, CalogeroError>,
        G: Fn(&Poly) -> Result<Poly, CalogeroError>,
    {
        Ok(&x(&y(p)?)? - &y(&x(p)?)?)
    }

    /// `[H̃, β_{f_j;0}]P` for even `f_j`.
    pub fn conserved_residual(&self, j: usize, p: &Poly) -> Result<Poly, CalogeroError> {
        let f = self.degree(j)?;
        if f % 2 == 1 {
            return Err(CalogeroError::Usage(format!("β_(f;0) needs even f, got {f}")));
        }
        self.commutator(|v| self.h(v), |v| self.beta_coefficient(j, f as usize / 2, v), p)
    }

    /// `[β_{f_j;f_j}, β_{f_k;f_k}]P` and `[β_{f_j;-f_j}, β_{f_k;-f_k}]P`.
    pub fn extremes_residual(&self, j: usize, k: usize, p: &Poly) -> Result<(Poly, Poly), CalogeroError> {
        let fj = self.degree(j)? as usize;
        let fk = self.degree(k)? as usize;
        let creation = self.commutator(|v| self.creation(j, v), |v| self.creation(k, v), p)?;
        let annihilation = self.commutator(
            |v| self.beta_coefficient(j, fj, v),
            |v| self.beta_coefficient(k, fk, v),
            p,
        )?;
        Ok((creation, annihilation))
    }

    /// `[β_{f_j;0}, β_{f_k;0}]P` for even `f_j`, `f_k`.
    pub fn involution_residual(&self, j: usize, k: usize, p: &Poly) -> Result<Poly, CalogeroError> {
        let fj = self.degree(j)?;
        let fk = self.degree(k)?;
        if fj % 2 == 1 || fk % 2 == 1 {
            return Err(CalogeroError::Usage("the involution probe needs even degrees".into()));
        }
        self.commutator(
            |v| self.beta_coefficient(j, fj as usize / 2, v),
            |v| self.beta_coefficient(k, fk as usize / 2, v),
            p,
        )
    }

    /// Conserved-quantity and commuting-extreme checks on `tests`.
    pub fn conserved_quantities(&self, j: usize, k: usize, tests: &[Poly]) -> Result<ConservedReport, CalogeroError> {
        let fj = self.degree(j)?;
        let fk = self.degree(k)?;
        let even = fj % 2 == 0 && fk % 2 == 0;
        let mut residual: Option<Poly> = None;
        let mut keep = |r: Poly| -> bool {
            if r.is_zero() {
                return true;
            }
            residual.get_or_insert(r);
            false
        };
        let mut conserved = (fj % 2 == 0).then_some(true);
        let mut creation_commute = true;
        let mut annihilation_commute = true;
        let mut involution_witness = None;
        for (idx, p) in tests.iter().enumerate() {
            if fj % 2 == 0 && !keep(self.conserved_residual(j, p)?) {
                conserved = Some(false);
            }
            let (c, a) = self.extremes_residual(j, k, p)?;
            creation_commute &= keep(c);
            annihilation_commute &= keep(a);
            if even && involution_witness.is_none() && !self.involution_residual(j, k, p)?.is_zero() {
                involution_witness = Some(idx);
            }
        }
        Ok(ConservedReport {
            j,
            k,
            conserved,
            creation_commute,
            annihilation_commute,
            involution_witness,
            involution_searched: even,
            tested: tests.len(),
            residual,
        })
    }

    /// `Σ_{l+m=n} [β_{f_j;f_j-2l}, β_{f_k;f_k-2m}]P` for every `n`; entry `n`
    /// of the result is that residual. With `alternate`, the terms are
    /// weighted by `(-1)^l`, a convention that must fail.
    pub fn commutator_sums(&self, j: usize, k: usize, p: &Poly, alternate: bool) -> Result<Vec<Poly>, CalogeroError> {
        let fj = self.degree(j)? as usize;
        let fk = self.degree(k)? as usize;
        let b = self.root_system().backend();
        let bk = self.beta(k, p)?.beta;
        let bj = self.beta(j, p)?.beta;
        // jk[m][l] = β_{j,l} β_{k,m} P and kj[l][m] = β_{k,m} β_{j,l} P
        let jk: Vec<Vec<Poly>> = bk.iter().map(|v| Ok(self.beta(j, v)?.beta)).collect::<Result<_, CalogeroError>>()?;
        let kj: Vec<Vec<Poly>> = bj.iter().map(|v| Ok(self.beta(k, v)?.beta)).collect::<Result<_, CalogeroError>>()?;
        let mut out = vec![Poly::zero(self.nvars(), b); fj + fk + 1];
        for l in 0..=fj {
            for m in 0..=fk {
                let sign = if alternate && l % 2 == 1 { -1 } else { 1 };
                let term = &jk[m][l] - &kj[l][m];
                out[l + m].add_scaled(&term, &b.from_i64(sign));
            }
        }
        Ok(out)
    }

    /// The sum rule at one fixed `l + m = n`.
    pub fn verify_commutator_sum_rule(
        &self,
        j: usize,
        k: usize,
        n: usize,
        p: &Poly,
        alternate: bool,
    ) -> Result<Poly, CalogeroError> {
        let sums = self.commutator_sums(j, k, p, alternate)?;
        sums.into_iter()
            .nth(n)
            .ok_or_else(|| CalogeroError::Usage(format!("l + m must lie in 0..={}", self.degree(j).unwrap() + self.degree(k).unwrap())))
    }

    /// The D-type spinor coordinate `η^{(r)}` against `c·q_1⋯q_r`.
    pub fn dtype_check(&self) -> Result<DtypeReport, CalogeroError> {
        if self.spinor().is_none() {
            return Err(CalogeroError::Usage("the spinor construction exists for the D family only".into()));
        }
        let r = self.rank();
        let eta = self.eta(r)?;
        let top = Monomial::new(vec![1; self.nvars()]);
        let c = eta.coeff(&top);
        let proportional = !c.is_zero() && eta.len() == 1;
        Ok(DtypeReport {
            r,
            coefficient: proportional.then(|| c.to_exact_string()),
            eta,
            proportional,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_products() {
        let s = |v: Vec<BigInt>| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        // (x - 2)(x)(x + 2) = x^3 - 4x
        assert_eq!(s(expand_roots(&[2, 0, -2])), "0 -4 0 1");
        assert_eq!(s(expand_roots(&[])), "1");
    }
}
