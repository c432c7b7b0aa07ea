use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use super::construct::{degrees, raw_system};
use super::spec::{Couplings, Embedding, Family, Orbit, RootSystemSpec};
use super::RootSystemError;
use crate::polyring::linalg::invert;
use crate::polyring::{dot, Backend, LinearForms, Poly, RatFun, Scalar};

#[derive(Clone, Debug)]
pub struct Root {
    pub vector: Vec<Scalar>,
    pub orbit: Orbit,
    pub norm2: Scalar,
    pub coupling: Scalar,
    /// `2/|ρ|^2`, so that `s_ρ(x) = x - two_over_norm2 (ρ·x) ρ`.
    pub two_over_norm2: Scalar,
}

/// A root system with its positive roots `Δ₊`, orbit couplings and degrees.
#[derive(Clone, Debug)]
pub struct RootSystem {
    spec: RootSystemSpec,
    backend: Backend,
    dim: usize,
    positive: Vec<Root>,
    all_roots: Vec<(Vec<Scalar>, Orbit)>,
    simple: Vec<usize>,
    couplings: BTreeMap<Orbit, Scalar>,
    degrees: Vec<u32>,
    forms: LinearForms,
    /// `reflect[a][k] = (j, negated)` with `s_{ρ_a}(ρ_k) = ±ρ_j`.
    reflect: Vec<Vec<(usize, bool)>>,
    generic: Vec<Scalar>,
}

impl RootSystem {
    /// Builds the system for `spec` with the given couplings.
    ///
    /// `backend` may be `None` for the natural coefficient field. Every
    /// coupling must be positive.
    pub fn build(spec: RootSystemSpec, couplings: &Couplings, backend: Option<Backend>) -> Result<RootSystem, RootSystemError> {
        let resolved = couplings.resolve(&spec)?;
        for (o, g) in &resolved {
            if !g.is_positive() {
                return Err(RootSystemError::Domain(format!("coupling for {o} roots must be positive, got {g}")));
            }
        }
        Self::build_unchecked(spec, &resolved, backend)
    }

    /// Builds with arbitrary (possibly zero) couplings; the free limit
    /// `g = 0` needs this.
    pub fn build_unchecked(
        spec: RootSystemSpec,
        couplings: &BTreeMap<Orbit, BigRational>,
        backend: Option<Backend>,
    ) -> Result<RootSystem, RootSystemError> {
        spec.validate()?;
        let natural = spec.natural_backend();
        let backend = backend.unwrap_or(natural);
        if backend.is_exact() && backend != natural {
            return Err(RootSystemError::Usage(format!(
                "{} has no realization over {}",
                spec.name(),
                backend.name()
            )));
        }
        let raw = raw_system(&spec, backend);
        let convert = |v: &[Scalar]| -> Result<Vec<Scalar>, RootSystemError> {
            v.iter().map(|x| x.to_backend(backend).map_err(RootSystemError::from)).collect()
        };
        let mut all_roots = Vec::with_capacity(raw.roots.len());
        for (v, o) in &raw.roots {
            all_roots.push((convert(v)?, *o));
        }
        let generic = convert(&raw.generic)?;
        let mut coupling_scalars = BTreeMap::new();
        for o in spec.orbits() {
            let g = couplings
                .get(&o)
                .or_else(|| couplings.get(&Orbit::All))
                .ok_or_else(|| RootSystemError::Usage(format!("missing coupling for {o} roots")))?;
            coupling_scalars.insert(o, backend.lift(g));
        }
        let two = backend.from_i64(2);
        let mut positive = Vec::new();
        for (v, o) in &all_roots {
            let s = dot(v, &generic);
            if s.is_zero() {
                return Err(RootSystemError::Internal(format!("root {v:?} is orthogonal to the positivity vector")));
            }
            if s.signum() > 0 {
                let norm2 = dot(v, v);
                positive.push(Root {
                    vector: v.clone(),
                    orbit: *o,
                    two_over_norm2: &two * &norm2.inv(),
                    norm2,
                    coupling: coupling_scalars[o].clone(),
                });
            }
        }
        // deterministic order: by height against the positivity vector, then
        // lexicographically by coordinates
        positive.sort_by(|a, b| {
            let ha = dot(&a.vector, &generic).to_f64();
            let hb = dot(&b.vector, &generic).to_f64();
            ha.partial_cmp(&hb).unwrap().then_with(|| {
                let ka: Vec<f64> = a.vector.iter().map(Scalar::to_f64).collect();
                let kb: Vec<f64> = b.vector.iter().map(Scalar::to_f64).collect();
                kb.partial_cmp(&ka).unwrap()
            })
        });
        if 2 * positive.len() != all_roots.len() {
            return Err(RootSystemError::Internal("roots do not split into positive and negative halves".into()));
        }
        let index: HashMap<Vec<Scalar>, usize> =
            positive.iter().enumerate().map(|(i, r)| (r.vector.clone(), i)).collect();
        let lookup = |v: &[Scalar]| -> Option<(usize, bool)> {
            if let Some(&j) = index.get(v) {
                return Some((j, false));
            }
            let neg: Vec<Scalar> = v.iter().map(|x| -x).collect();
            index.get(&neg).map(|&j| (j, true))
        };
        let mut reflect = Vec::with_capacity(positive.len());
        for a in &positive {
            let mut row = Vec::with_capacity(positive.len());
            for b in &positive {
                let image = reflect_with(a, &b.vector);
                let found = lookup(&image).ok_or_else(|| {
                    RootSystemError::Internal(format!(
                        "{}: reflection image {image:?} is not a root (root set not closed)",
                        spec.name()
                    ))
                })?;
                row.push(found);
            }
            reflect.push(row);
        }
        for (a, root) in positive.iter().enumerate() {
            for (k, other) in positive.iter().enumerate() {
                if root.orbit != other.orbit {
                    continue;
                }
                let (j, _) = reflect[a][k];
                if positive[j].orbit != other.orbit {
                    return Err(RootSystemError::Internal("orbit labels are not reflection invariant".into()));
                }
            }
        }
        // simple: reflection permutes the other positive roots
        let simple: Vec<usize> = (0..positive.len())
            .filter(|&a| reflect[a].iter().enumerate().all(|(k, &(_, neg))| k == a || !neg))
            .collect();
        let forms = LinearForms::new(positive.iter().map(|r| r.vector.clone()).collect(), backend);
        Ok(RootSystem {
            degrees: degrees(&spec),
            spec,
            backend,
            dim: raw.dim,
            positive,
            all_roots,
            simple,
            couplings: coupling_scalars,
            forms,
            reflect,
            generic,
        })
    }

    /// Same system with new couplings (no positivity check).
    pub fn with_couplings(&self, couplings: &BTreeMap<Orbit, BigRational>) -> Result<RootSystem, RootSystemError> {
        let mut out = self.clone();
        let mut scalars = BTreeMap::new();
        for o in self.spec.orbits() {
            let g = couplings
                .get(&o)
                .or_else(|| couplings.get(&Orbit::All))
                .ok_or_else(|| RootSystemError::Usage(format!("missing coupling for {o} roots")))?;
            scalars.insert(o, self.backend.lift(g));
        }
        for r in &mut out.positive {
            r.coupling = scalars[&r.orbit].clone();
        }
        out.couplings = scalars;
        Ok(out)
    }

    /// Free limit: every coupling zero.
    pub fn free_limit(&self) -> RootSystem {
        let mut zero = BTreeMap::new();
        zero.insert(Orbit::All, BigRational::from_integer(0.into()));
        self.with_couplings(&zero).expect("all= covers every orbit")
    }

    pub fn spec(&self) -> &RootSystemSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.name()
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Number of coordinates `q_1..q_dim`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.positive[i]
    }

    pub fn all_roots(&self) -> &[(Vec<Scalar>, Orbit)] {
        &self.all_roots
    }

    pub fn simple_roots(&self) -> Vec<&Root> {
        self.simple.iter().map(|&i| &self.positive[i]).collect()
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn couplings(&self) -> &BTreeMap<Orbit, Scalar> {
        &self.couplings
    }

    pub fn coupling(&self, orbit: Orbit) -> Option<&Scalar> {
        self.couplings.get(&orbit)
    }

    /// Invariant degrees `F_Δ` (for the ambient `A` embedding the trailing 1
    /// is the centre-of-mass mode).
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// The coordinate-space directions not spanned by roots that carry a free
    /// mode outside `F_Δ` (only the ambient `G2` embedding has one).
    pub fn hidden_modes(&self) -> usize {
        match (self.spec.family, self.spec.embedding) {
            (Family::G, Embedding::Ambient) => 1,
            _ => 0,
        }
    }

    /// Linear forms `ρ·q` of the positive roots in index order.
    pub fn forms(&self) -> &LinearForms {
        &self.forms
    }

    /// `s_{ρ_a}(ρ_k) = ±ρ_j`, returned as `(j, negated)`.
    pub fn reflect_root(&self, a: usize, k: usize) -> (usize, bool) {
        self.reflect[a][k]
    }

    pub fn reflect_vector(&self, a: usize, x: &[Scalar]) -> Vec<Scalar> {
        reflect_with(&self.positive[a], x)
    }

    /// Reflection matrix of `s_{ρ_a}`.
    pub fn reflection_matrix(&self, a: usize) -> Vec<Vec<Scalar>> {
        crate::polyring::reflection_matrix(&self.positive[a].vector, self.backend).expect("nonzero root")
    }

    /// `P ∘ s_{ρ_a}`.
    pub fn reflect_poly(&self, a: usize, p: &Poly) -> Poly {
        p.apply_linear_map(&self.reflection_matrix(a))
    }

    /// `f ∘ s_{ρ_a}` for a rational function over the positive-root forms.
    pub fn reflect_ratfun(&self, a: usize, f: &RatFun) -> RatFun {
        let matrix = self.reflection_matrix(a);
        f.compose(&matrix, |k| self.reflect[a][k], &self.forms)
    }

    /// Ground-state energy `E₀ = r/2 + Σ_{Δ₊} g`, `r` counting only the
    /// modes reported in `F_Δ`.
    pub fn ground_state_energy(&self) -> Scalar {
        let r = self.degrees.len() as i64;
        self.positive
            .iter()
            .fold(self.backend.from_ratio(r, 2), |acc, root| &acc + &root.coupling)
    }

    /// `μ·∇W = -(μ·q) + Σ g (ρ·μ)/(ρ·q)`.
    pub fn log_gradient_w(&self, mu: &[Scalar]) -> Result<RatFun, RootSystemError> {
        if mu.len() != self.dim {
            return Err(RootSystemError::Usage("vector length differs from the ambient dimension".into()));
        }
        let mut out: RatFun = (-Poly::linear(mu, self.backend)).into();
        for (i, root) in self.positive.iter().enumerate() {
            let c = &root.coupling * &dot(&root.vector, mu);
            if c.is_zero() {
                continue;
            }
            let term = RatFun::new(Poly::constant(self.dim, c), [(i, 1)].into(), &self.forms);
            out = out.add(&term, &self.forms);
        }
        Ok(out)
    }

    /// Fundamental coweights: `α_i · ω̌_j = δ_ij`, inside the span of the roots.
    pub fn fundamental_coweights(&self) -> Vec<Vec<Scalar>> {
        let simple = self.simple_roots();
        let gram: Vec<Vec<Scalar>> =
            simple.iter().map(|a| simple.iter().map(|b| dot(&a.vector, &b.vector)).collect()).collect();
        let inv = invert(&gram).expect("simple roots are independent");
        inv.iter()
            .map(|row| {
                (0..self.dim)
                    .map(|k| {
                        row.iter()
                            .zip(&simple)
                            .fold(self.backend.zero(), |acc, (c, a)| &acc + &(c * &a.vector[k]))
                    })
                    .collect()
            })
            .collect()
    }

    /// Sum of the fundamental coweights: strictly inside the principal chamber.
    pub fn chamber_vector(&self) -> Vec<Scalar> {
        let mut out = vec![self.backend.zero(); self.dim];
        for w in self.fundamental_coweights() {
            for (o, x) in out.iter_mut().zip(&w) {
                *o = &*o + x;
            }
        }
        out
    }

    pub fn positivity_vector(&self) -> &[Scalar] {
        &self.generic
    }

    pub fn in_chamber(&self, x: &[Scalar]) -> bool {
        self.simple_roots().iter().all(|a| dot(&a.vector, x).signum() > 0)
    }

    /// Random point of the principal chamber with small rational coordinates.
    pub fn sample_chamber_point<R: Rng>(&self, rng: &mut R) -> Vec<Scalar> {
        let b = self.backend;
        let coweights = self.fundamental_coweights();
        loop {
            let mut x = vec![b.zero(); self.dim];
            for w in &coweights {
                let c = b.from_ratio(rng.gen_range(5..=15), 10);
                for (o, y) in x.iter_mut().zip(w) {
                    *o = &*o + &(&c * y);
                }
            }
            for o in x.iter_mut() {
                let jitter = b.from_ratio(rng.gen_range(-10..=10), 40);
                *o = &*o + &jitter;
            }
            if self.in_chamber(&x) {
                return x;
            }
        }
    }

    pub fn summary(&self) -> RootSystemSummary {
        RootSystemSummary {
            name: self.name(),
            family: self.spec.family.to_string(),
            dim: self.dim,
            backend: self.backend.name(),
            degrees: self.degrees.clone(),
            hidden_modes: self.hidden_modes(),
            ground_state_energy: self.ground_state_energy().to_string(),
            couplings: self.couplings.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            positive_roots: self
                .positive
                .iter()
                .map(|r| RootEntry {
                    vector: r.vector.iter().map(|x| x.to_string()).collect(),
                    orbit: r.orbit.to_string(),
                    simple: false,
                })
                .enumerate()
                .map(|(i, mut e)| {
                    e.simple = self.simple.contains(&i);
                    e
                })
                .collect(),
        }
    }
}

fn reflect_with(root: &Root, x: &[Scalar]) -> Vec<Scalar> {
    let c = &root.two_over_norm2 * &dot(&root.vector, x);
    x.iter().zip(&root.vector).map(|(xi, ri)| xi - &(&c * ri)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RootEntry {
    pub vector: Vec<String>,
    pub orbit: String,
    pub simple: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSystemSummary {
    pub name: String,
    pub family: String,
    pub dim: usize,
    pub backend: String,
    pub degrees: Vec<u32>,
    pub hidden_modes: usize,
    pub ground_state_energy: String,
    pub couplings: BTreeMap<String, String>,
    pub positive_roots: Vec<RootEntry>,
}
