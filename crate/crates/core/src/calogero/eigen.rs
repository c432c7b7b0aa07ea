use std::collections::HashMap;

use serde::Serialize;

use super::{CalogeroError, Model};
use crate::polyring::linalg::EchelonSpan;
use crate::polyring::Poly;
use crate::rootsys::quantum_numbers;

/// `P_n = Π_j (β_{f_j;f_j})^{n_j}·1` with eigenvalue `Σ n_j f_j`.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenfunction {
    pub n: Vec<u32>,
    pub eigenvalue: u32,
    pub poly: Poly,
    /// Whether `H̃P = E P` held exactly.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCount {
    pub level: u32,
    pub expected: usize,
    pub built: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub max_level: u32,
    pub states: usize,
    pub rank: usize,
    pub independent: bool,
    pub eigen_ok: bool,
    pub counts_match: bool,
    pub levels: Vec<LevelCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl BasisReport {
    pub fn pass(&self) -> bool {
        self.independent && self.eigen_ok && self.counts_match
    }
}

impl Model {
    /// Builds `P_n` by creation operators and checks its eigenvalue.
    pub fn build_eigenfunction(&self, n: &[u32]) -> Result<Eigenfunction, CalogeroError> {
        let degrees = self.root_system().degrees();
        if n.len() != degrees.len() {
            return Err(CalogeroError::Usage(format!(
                "state needs {} quantum numbers, got {}",
                degrees.len(),
                n.len()
            )));
        }
        let level: u32 = n.iter().zip(degrees).map(|(k, f)| k * f).sum();
        if level > self.budget().max_degree {
            return Err(CalogeroError::Resource(format!(
                "level {level} exceeds the degree budget {}",
                self.budget().max_degree
            )));
        }
        let b = self.root_system().backend();
        let mut p = Poly::one(self.nvars(), b);
        for (j, &count) in n.iter().enumerate() {
            for _ in 0..count {
                p = self.creation(j + 1, &p)?;
            }
        }
        let hp = self.h(&p)?;
        let verified = hp == p.scale(&b.from_i64(i64::from(level)));
        Ok(Eigenfunction { n: n.to_vec(), eigenvalue: level, poly: p, verified })
    }

    /// Every state up to `max_level`, in spectrum order. Each `P_n` is one
    /// creation step from an earlier state.
    pub fn eigenbasis(&self, max_level: u32) -> Result<Vec<Eigenfunction>, CalogeroError> {
        let b = self.root_system().backend();
        let degrees = self.root_system().degrees();
        let mut built: HashMap<Vec<u32>, Poly> = HashMap::new();
        let mut out = Vec::new();
        for state in quantum_numbers(degrees, max_level) {
            if state.level > self.budget().max_degree {
                return Err(CalogeroError::Resource(format!(
                    "level {} exceeds the degree budget {}",
                    state.level,
                    self.budget().max_degree
                )));
            }
            let p = match state.n.iter().rposition(|&k| k > 0) {
                None => Poly::one(self.nvars(), b),
                Some(j) => {
                    let mut parent = state.n.clone();
                    parent[j] -= 1;
                    let base = built.get(&parent).expect("parents have lower level");
                    self.creation(j + 1, base)?
                }
            };
            let hp = self.h(&p)?;
            let verified = hp == p.scale(&b.from_i64(i64::from(state.level)));
            built.insert(state.n.clone(), p.clone());
            out.push(Eigenfunction { n: state.n, eigenvalue: state.level, poly: p, verified });
        }
        Ok(out)
    }

    /// Checks the eigenvalue equations, the level counts and the exact
    /// linear independence of `{P_n}`.
    pub fn eigenbasis_independence(&self, max_level: u32) -> Result<BasisReport, CalogeroError> {
        let states = self.eigenbasis(max_level)?;
        Ok(self.basis_report(max_level, &states))
    }

    /// As [`Model::eigenbasis_independence`] on a given list of states.
    pub fn basis_report(&self, max_level: u32, states: &[Eigenfunction]) -> BasisReport {
        let spectrum = self.root_system().spectrum_levels(max_level);
        let mut span = EchelonSpan::new();
        let mut failure = None;
        let mut independent = true;
        for s in states {
            if !span.insert(&s.poly) && independent {
                independent = false;
                failure = Some(format!("P{:?} lies in the span of the earlier states", s.n));
            }
        }
        let eigen_ok = states.iter().all(|s| s.verified);
        if !eigen_ok && failure.is_none() {
            let bad = states.iter().find(|s| !s.verified).expect("a failing state");
            failure = Some(format!("P{:?} is not an eigenfunction", bad.n));
        }
        let levels: Vec<LevelCount> = spectrum
            .levels
            .iter()
            .map(|l| LevelCount {
                level: l.level,
                expected: l.degeneracy,
                built: states.iter().filter(|s| s.eigenvalue == l.level).count(),
            })
            .collect();
        let counts_match = levels.iter().all(|l| l.expected == l.built);
        if !counts_match && failure.is_none() {
            failure = Some("state counts differ from the spectrum enumeration".into());
        }
        BasisReport {
            max_level,
            states: states.len(),
            rank: span.rank(),
            independent,
            eigen_ok,
            counts_match,
            levels,
            failure,
        }
    }
}
