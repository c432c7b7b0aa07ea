use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{CalogeroError, Model};
use crate::polyring::linalg::EchelonSpan;
use crate::polyring::{Backend, Monomial, Poly};
use crate::rootsys::RootSystem;

/// Coefficients of the physicists' Hermite polynomial `H_n`, lowest power
/// first, from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![];
    let mut cur: Vec<BigInt> = vec![BigInt::from(1)];
    for k in 0..n {
        let mut next = vec![BigInt::from(0); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * BigInt::from(2 * k);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn hermite_in(var: usize, n: u32, nvars: usize, b: Backend) -> Poly {
    let mut p = Poly::zero(nvars, b);
    for (k, c) in hermite(n).into_iter().enumerate() {
        if c == BigInt::from(0) {
            continue;
        }
        let mut exps = vec![0u16; nvars];
        exps[var] = k as u16;
        p.add_term(Monomial::new(exps), b.lift(&BigRational::from_integer(c)));
    }
    p
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Orbit of `p` under the group, by closure under simple reflections.
fn orbit(rs: &RootSystem, p: &Poly) -> Vec<Poly> {
    let mut seen = HashSet::new();
    seen.insert(p.clone());
    let mut out = vec![p.clone()];
    let mut i = 0;
    while i < out.len() {
        for &a in rs.simple_indices() {
            let image = rs.reflect_poly(a, &out[i]);
            if seen.insert(image.clone()) {
                out.push(image);
            }
        }
        i += 1;
    }
    out
}

/// Span of the orbit sums of Hermite products of total degree `level`.
pub(crate) fn hermite_span(rs: &RootSystem, level: u32) -> EchelonSpan {
    let n = rs.dim();
    let b = rs.backend();
    let mut span = EchelonSpan::new();
    let mut covered: HashSet<Poly> = HashSet::new();
    for k in compositions(level, n) {
        let mut product = Poly::one(n, b);
        for (var, &d) in k.iter().enumerate() {
            if d > 0 {
                product = &product * &hermite_in(var, d, n, b);
            }
        }
        if covered.contains(&product) || covered.contains(&-&product) {
            continue;
        }
        let images = orbit(rs, &product);
        let mut sum = Poly::zero(n, b);
        for image in &images {
            sum = &sum + image;
        }
        covered.extend(images);
        span.insert(&sum);
    }
    span
}

#[derive(Clone, Debug, Serialize)]
pub struct HermiteReport {
    pub n: Vec<u32>,
    pub level: u32,
    /// Dimension of the symmetrised Hermite-product span at this level.
    pub span_rank: usize,
    pub member: bool,
    pub ground_state_energy: String,
    pub expected_ground_state_energy: String,
}

impl HermiteReport {
    pub fn pass(&self) -> bool {
        self.member && self.ground_state_energy == self.expected_ground_state_energy
    }
}

impl Model {
    /// At zero coupling, checks that `P_n` lies in the symmetrised
    /// Hermite-product span of its level and that `E₀ = r/2`.
    pub fn hermite_limit(&self, n: &[u32]) -> Result<HermiteReport, CalogeroError> {
        let rs = self.root_system();
        if rs.positive_roots().iter().any(|r| !r.coupling.is_zero()) {
            return Err(CalogeroError::Domain("the Hermite limit needs every coupling zero".into()));
        }
        let state = self.build_eigenfunction(n)?;
        Ok(self.hermite_report(&state.n, state.eigenvalue, &state.poly))
    }

    /// Membership of an arbitrary polynomial claimed to sit at `level`.
    pub fn hermite_report(&self, n: &[u32], level: u32, p: &Poly) -> HermiteReport {
        let rs = self.root_system();
        let span = hermite_span(rs, level);
        let r = rs.degrees().len() as i64;
        HermiteReport {
            n: n.to_vec(),
            level,
            span_rank: span.rank(),
            member: span.contains(p),
            ground_state_energy: rs.ground_state_energy().to_exact_string(),
            expected_ground_state_energy: rs.backend().from_ratio(r, 2).to_exact_string(),
        }
    }
}
