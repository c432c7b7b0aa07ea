use serde::Serialize;

use super::system::RootSystem;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct State {
    pub n: Vec<u32>,
    /// `N_n = Σ n_j f_j`.
    pub level: u32,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Level {
    pub level: u32,
    pub energy: String,
    pub degeneracy: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub degrees: Vec<u32>,
    pub ground_state_energy: String,
    pub max_level: u32,
    pub states: Vec<State>,
    pub levels: Vec<Level>,
}

/// All quantum numbers with `Σ n_j f_j <= max_level`, grouped by level.
pub fn quantum_numbers(degrees: &[u32], max_level: u32) -> Vec<State> {
    fn rec(degrees: &[u32], budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<State>, full: &[u32]) {
        if degrees.is_empty() {
            let level = prefix.iter().zip(full).map(|(n, f)| n * f).sum();
            out.push(State { n: prefix.clone(), level });
            return;
        }
        let f = degrees[0];
        for n in 0..=budget / f {
            prefix.push(n);
            rec(&degrees[1..], budget - n * f, prefix, out, full);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, max_level, &mut Vec::new(), &mut out, degrees);
    out.sort_by(|a, b| a.level.cmp(&b.level).then_with(|| b.n.cmp(&a.n)));
    out
}

impl RootSystem {
    /// Excitation spectrum `E_n = E₀ + Σ n_j f_j` up to `max_level`.
    pub fn spectrum_levels(&self, max_level: u32) -> Spectrum {
        let states = quantum_numbers(self.degrees(), max_level);
        let e0 = self.ground_state_energy();
        let levels = (0..=max_level)
            .map(|level| Level {
                level,
                energy: (&e0 + &self.backend().from_i64(i64::from(level))).to_string(),
                degeneracy: states.iter().filter(|s| s.level == level).count(),
            })
            .collect();
        Spectrum {
            degrees: self.degrees().to_vec(),
            ground_state_energy: e0.to_string(),
            max_level,
            states,
            levels,
        }
    }
}
