use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::equivariant::EquivariantVec;
use super::LaxError;
use crate::polyring::{Backend, Division, LinearForms, Poly, RatFun, Scalar};
use crate::rootsys::{RepSet, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    APlus,
    AMinus,
    Q,
    N,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::APlus => "A+",
            Letter::AMinus => "A-",
            Letter::Q => "Q",
            Letter::N => "N",
        })
    }
}

/// A product of operators, written left to right and applied right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaxWord(pub Vec<Letter>);

impl LaxWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        LaxWord(letters)
    }

    /// `#A+ - #A-`.
    pub fn signature(&self) -> i32 {
        self.0
            .iter()
            .map(|l| match l {
                Letter::APlus => 1,
                Letter::AMinus => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for LaxWord {
    type Err = LaxError;

    /// Space separated letters, e.g. `"A+ A- Q"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(|t| match t {
                "A+" => Ok(Letter::APlus),
                "A-" => Ok(Letter::AMinus),
                "Q" => Ok(Letter::Q),
                "N" => Ok(Letter::N),
                other => Err(LaxError::Usage(format!("unknown operator {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LaxWord)
    }
}

impl fmt::Display for LaxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One reflection pair `(μ, s_ρ μ)` with `μ < s_ρ μ`.
#[derive(Clone, Debug)]
struct Pair {
    root: usize,
    mu: usize,
    nu: usize,
}

/// The operators `A±`, `Q`, `N` for one root system and representation set.
#[derive(Clone, Debug)]
pub struct LaxOperators {
    rs: Arc<RootSystem>,
    rep: Arc<RepSet>,
    perm: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
    /// Coupling per positive root as used inside `A±`.
    lax_couplings: Vec<Scalar>,
    /// `μ·q` per weight.
    weight_forms: Vec<Poly>,
}

impl LaxOperators {
    pub fn new(rs: Arc<RootSystem>, rep: Arc<RepSet>) -> Result<LaxOperators, LaxError> {
        let report = rep.check_closure();
        if !report.pass {
            return Err(LaxError::Domain(format!(
                "representation set is not reflection closed: {}",
                report.detail.unwrap_or_default()
            )));
        }
        Ok(LaxOperators::new_unchecked(rs, rep))
    }

    /// As [`LaxOperators::new`] without the closure check, so that a
    /// corrupted table reaches the structural checks.
    pub fn new_unchecked(rs: Arc<RootSystem>, rep: Arc<RepSet>) -> LaxOperators {
        let n = rs.positive_roots().len();
        let perm: Vec<Vec<usize>> = (0..n).map(|a| (0..rep.len()).map(|mu| rep.reflect(a, mu)).collect()).collect();
        let mut pairs = Vec::new();
        for (a, row) in perm.iter().enumerate() {
            for (mu, &nu) in row.iter().enumerate() {
                if mu < nu {
                    pairs.push(Pair { root: a, mu, nu });
                }
            }
        }
        let b = rs.backend();
        let weight_forms = rep.weights().iter().map(|w| Poly::linear(w, b)).collect();
        let lax_couplings = rs.positive_roots().iter().map(|r| r.coupling.clone()).collect();
        LaxOperators { rs, rep, perm, pairs, lax_couplings, weight_forms }
    }

    /// Copy whose `A±` use a different coupling on one root (fault injection;
    /// `N` and the Hamiltonian keep the original).
    pub fn with_lax_coupling(&self, root: usize, value: Scalar) -> LaxOperators {
        let mut out = self.clone();
        out.lax_couplings[root] = value;
        out
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn repset(&self) -> &Arc<RepSet> {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    pub fn forms(&self) -> &LinearForms {
        self.rs.forms()
    }

    pub fn backend(&self) -> Backend {
        self.rs.backend()
    }

    pub fn nvars(&self) -> usize {
        self.rs.dim()
    }

    pub fn partner(&self, root: usize, mu: usize) -> usize {
        self.perm[root][mu]
    }

    /// `v_μ = P` for every weight.
    pub fn seed(&self, p: &Poly) -> EquivariantVec {
        EquivariantVec::from_polys(vec![p.clone(); self.dim()])
    }

    /// `v_μ = (μ·q)^k P`.
    pub fn seed_weighted(&self, p: &Poly, k: u32) -> EquivariantVec {
        EquivariantVec::from_polys(self.weight_forms.iter().map(|w| &w.pow(k) * p).collect())
    }

    pub fn weight_form(&self, mu: usize) -> &Poly {
        &self.weight_forms[mu]
    }

    pub fn apply(&self, op: Letter, v: &EquivariantVec) -> Result<EquivariantVec, LaxError> {
        if v.len() != self.dim() {
            return Err(LaxError::Usage("vector length differs from the representation set".into()));
        }
        if op != Letter::N {
            if let Some(polys) = v.polys() {
                return Ok(EquivariantVec::from_polys(self.apply_poly(op, &polys)?));
            }
        }
        Ok(EquivariantVec::new(self.apply_rational(op, v.entries())))
    }

    pub fn apply_word(&self, word: &LaxWord, v: &EquivariantVec) -> Result<EquivariantVec, LaxError> {
        let mut cur = v.clone();
        for &letter in word.0.iter().rev() {
            cur = self.apply(letter, &cur)?;
        }
        Ok(cur)
    }

    pub fn total_sum(&self, v: &EquivariantVec) -> RatFun {
        v.total_sum(self.forms())
    }

    /// `Σ_μ v_μ` for polynomial entries.
    pub fn total_sum_poly(&self, v: &[Poly]) -> Poly {
        let mut acc = Poly::zero(self.nvars(), self.backend());
        let one = self.backend().one();
        for p in v {
            acc.add_scaled(p, &one);
        }
        acc
    }

    /// `(μ·q) v_μ`.
    pub fn apply_q(&self, v: &[Poly]) -> Vec<Poly> {
        v.par_iter().zip(self.weight_forms.par_iter()).map(|(p, w)| p * w).collect()
    }

    /// Divided differences `(v_μ - v_ν)/(ρ·q)` over all pairs, by exact division.
    fn divided_differences(&self, v: &[Poly]) -> Result<BTreeMap<(usize, usize), Poly>, LaxError> {
        let forms = self.forms();
        let out: Result<Vec<_>, LaxError> = self
            .pairs
            .par_iter()
            .filter(|pair| !self.rep.root_dot(pair.root, pair.mu).is_zero())
            .map(|pair| {
                let diff = &v[pair.mu] - &v[pair.nu];
                if diff.is_zero() {
                    return Ok(((pair.root, pair.mu), diff));
                }
                match diff.divide_linear(forms.form(pair.root))? {
                    Division::Exact(q) => Ok(((pair.root, pair.mu), q)),
                    Division::Indivisible { remainder, .. } => Err(LaxError::InvariantViolation {
                        root: pair.root,
                        weight: pair.mu,
                        detail: format!("divided difference leaves remainder {remainder}"),
                    }),
                }
            })
            .collect();
        Ok(out?.into_iter().collect())
    }

    /// Polynomial fast path for `A±` and `Q`.
    pub fn apply_poly(&self, op: Letter, v: &[Poly]) -> Result<Vec<Poly>, LaxError> {
        match op {
            Letter::Q => Ok(self.apply_q(v)),
            Letter::APlus => {
                let minus = self.apply_a_minus(v)?;
                let q = self.apply_q(v);
                let two = self.backend().from_i64(2);
                Ok(minus
                    .into_iter()
                    .zip(q)
                    .map(|(mut m, q)| {
                        m.add_scaled(&q, &two);
                        m
                    })
                    .collect())
            }
            Letter::AMinus => self.apply_a_minus(v),
            Letter::N => Err(LaxError::Usage("N does not preserve polynomial entries".into())),
        }
    }

    /// `(A⁻v)_μ = -μ·∇v_μ - Σ g (ρ·μ) (v_μ - v_{s_ρ μ})/(ρ·q)`.
    pub fn apply_a_minus(&self, v: &[Poly]) -> Result<Vec<Poly>, LaxError> {
        let dd = self.divided_differences(v)?;
        let rep = &self.rep;
        let result: Result<Vec<Poly>, LaxError> = (0..self.dim())
            .into_par_iter()
            .map(|mu| {
                let w = rep.weight(mu);
                let mut out = -v[mu].directional_derivative(w)?;
                for a in 0..self.perm.len() {
                    let c = rep.root_dot(a, mu);
                    if c.is_zero() {
                        continue;
                    }
                    let nu = self.perm[a][mu];
                    let g = &self.lax_couplings[a] * c;
                    if mu < nu {
                        if let Some(q) = dd.get(&(a, mu)) {
                            out.add_scaled(q, &-&g);
                        }
                    } else if let Some(q) = dd.get(&(a, nu)) {
                        // (v_μ - v_ν)/(ρ·q) = -(v_ν - v_μ)/(ρ·q)
                        out.add_scaled(q, &g);
                    }
                }
                Ok(out)
            })
            .collect();
        result
    }

    /// General path on rational entries.
    pub fn apply_rational(&self, op: Letter, v: &[RatFun]) -> Vec<RatFun> {
        let forms = self.forms();
        let rs = &self.rs;
        let rep = &self.rep;
        let b = self.backend();
        let half = b.from_ratio(1, 2);
        (0..self.dim())
            .into_par_iter()
            .map(|mu| {
                let w = rep.weight(mu);
                let q = v[mu].mul_poly(&self.weight_forms[mu], forms);
                if op == Letter::Q {
                    return q;
                }
                let mut out = RatFun::zero(self.nvars(), b);
                if op != Letter::N {
                    out = v[mu].directional_derivative(w, forms).expect("matching length").neg();
                    if op == Letter::APlus {
                        out = out.add(&q.scale(&b.from_i64(2)), forms);
                    }
                }
                for a in 0..self.perm.len() {
                    let c = rep.root_dot(a, mu);
                    if c.is_zero() {
                        continue;
                    }
                    let nu = self.perm[a][mu];
                    let diff = v[mu].sub(&v[nu], forms);
                    if diff.is_zero() {
                        continue;
                    }
                    let term = if op == Letter::N {
                        let root = rs.root(a);
                        diff.divide_by_form(a, 2, forms).scale(&(&(&half * &root.coupling) * &root.norm2))
                    } else {
                        diff.divide_by_form(a, 1, forms).scale(&-&(&self.lax_couplings[a] * c))
                    };
                    out = out.add(&term, forms);
                }
                out
            })
            .collect()
    }
}
