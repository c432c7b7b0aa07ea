use serde::Serialize;

use super::{CalogeroError, Model};
use crate::polyring::Poly;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Component {
    pub freq: i64,
    pub poly: Poly,
}

/// `η^{(j)}(t)·P_n = Σ_l c_l e^{i(f_j - 2l)t}`, with
/// `c_l = 2^{-f_j}(-1)^l β_{f_j;f_j-2l}·P_n`.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyDecomposition {
    pub j: usize,
    pub f: u32,
    pub state: Vec<u32>,
    pub components: Vec<Component>,
}

impl FrequencyDecomposition {
    /// Component of frequency `f - 2l`.
    pub fn component(&self, l: usize) -> &Poly {
        &self.components[l].poly
    }

    /// Value at `t = 0`.
    pub fn sum(&self) -> Poly {
        let mut it = self.components.iter();
        let first = it.next().expect("f + 1 components").poly.clone();
        it.fold(first, |acc, c| &acc + &c.poly)
    }

    /// `Σ_l (f - 2l) c_l`, the time derivative at `t = 0` divided by `i`.
    pub fn derivative(&self) -> Poly {
        let b = self.components[0].poly.backend();
        let mut acc = Poly::zero(self.components[0].poly.nvars(), b);
        for c in &self.components {
            acc.add_scaled(&c.poly, &b.from_i64(c.freq));
        }
        acc
    }

    /// The frequency-zero part (present for even `f`).
    pub fn conserved_part(&self) -> Option<&Poly> {
        self.components.iter().find(|c| c.freq == 0).map(|c| &c.poly)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HeisenbergCheck {
    /// `Σ c_l = η P`.
    pub sum_ok: bool,
    /// Every nonzero `c_l` is an eigenvector at `E + f - 2l`.
    pub eigen_ok: bool,
    /// `Σ (f - 2l) c_l = [H̃, η] P`.
    pub derivative_ok: bool,
    /// For the ground state: `c_l = 0` for all `l > f/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_annihilated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl HeisenbergCheck {
    pub fn pass(&self) -> bool {
        self.sum_ok && self.eigen_ok && self.derivative_ok && self.ground_annihilated != Some(false)
    }
}

impl Model {
    /// Splits `η^{(j)}·P` into its frequency components.
    pub fn expand_eta(&self, j: usize, p: &Poly) -> Result<Vec<Component>, CalogeroError> {
        let beta = self.beta(j, p)?;
        let f = beta.f;
        let b = self.root_system().backend();
        let scale = b.from_ratio(1, 1i64 << f);
        Ok(beta
            .beta
            .iter()
            .enumerate()
            .map(|(l, poly)| {
                let sign = if l % 2 == 0 { scale.clone() } else { -&scale };
                Component { freq: beta.frequency(l), poly: poly.scale(&sign) }
            })
            .collect())
    }

    /// Heisenberg solution of `η^{(j)}` on the eigenstate `n`.
    pub fn heisenberg_solution(&self, j: usize, n: &[u32]) -> Result<FrequencyDecomposition, CalogeroError> {
        let state = self.build_eigenfunction(n)?;
        self.heisenberg_on(j, &state.n, &state.poly)
    }

    pub fn heisenberg_on(&self, j: usize, n: &[u32], p: &Poly) -> Result<FrequencyDecomposition, CalogeroError> {
        let f = self.degree(j)?;
        Ok(FrequencyDecomposition { j, f, state: n.to_vec(), components: self.expand_eta(j, p)? })
    }

    /// Checks a decomposition of `η^{(j)}P` for an eigenfunction `P` with
    /// eigenvalue `energy`.
    pub fn check_heisenberg(
        &self,
        d: &FrequencyDecomposition,
        p: &Poly,
        energy: u32,
    ) -> Result<HeisenbergCheck, CalogeroError> {
        let eta = self.eta(d.j)?;
        let b = self.root_system().backend();
        let eta_p = &eta * p;
        let sum_ok = d.sum() == eta_p;
        let mut failure = (!sum_ok).then(|| "component sum differs from eta*P".to_string());
        let mut eigen_ok = true;
        for c in &d.components {
            if c.poly.is_zero() {
                continue;
            }
            let e = i64::from(energy) + c.freq;
            if self.h(&c.poly)? != c.poly.scale(&b.from_i64(e)) {
                eigen_ok = false;
                failure.get_or_insert_with(|| format!("component at frequency {} is not an eigenvector", c.freq));
            }
        }
        let commutator = &self.h(&eta_p)? - &(&eta * &self.h(p)?);
        let derivative_ok = d.derivative() == commutator;
        if !derivative_ok {
            failure.get_or_insert_with(|| "time derivative differs from the commutator".into());
        }
        let ground_annihilated = d.state.iter().all(|&k| k == 0).then(|| {
            d.components.iter().enumerate().all(|(l, c)| 2 * l <= d.f as usize || c.poly.is_zero())
        });
        if ground_annihilated == Some(false) {
            failure.get_or_insert_with(|| "an annihilation component survives on the ground state".into());
        }
        Ok(HeisenbergCheck { sum_ok, eigen_ok, derivative_ok, ground_annihilated, failure })
    }
}
