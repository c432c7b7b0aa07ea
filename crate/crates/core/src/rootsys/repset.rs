use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::construct::{e6_minimal, e7_minimal, half_sign_vectors, mgon_vertices};
use super::spec::{Family, Orbit};
use super::system::RootSystem;
use super::RootSystemError;
use crate::polyring::{dot, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    Vector,
    Spinor,
    Antispinor,
    AllRoots,
    LongRoots,
    ShortRoots,
    Minimal27,
    Minimal56,
    MgonVertices,
}

impl RepKind {
    pub const ALL: [RepKind; 9] = [
        RepKind::Vector,
        RepKind::Spinor,
        RepKind::Antispinor,
        RepKind::AllRoots,
        RepKind::LongRoots,
        RepKind::ShortRoots,
        RepKind::Minimal27,
        RepKind::Minimal56,
        RepKind::MgonVertices,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Vector => "vector",
            RepKind::Spinor => "spinor",
            RepKind::Antispinor => "antispinor",
            RepKind::AllRoots => "all-roots",
            RepKind::LongRoots => "long-roots",
            RepKind::ShortRoots => "short-roots",
            RepKind::Minimal27 => "minimal-27",
            RepKind::Minimal56 => "minimal-56",
            RepKind::MgonVertices => "mgon-vertices",
        }
    }

    /// Preferred set for each family.
    pub fn default_for(rs: &RootSystem) -> RepKind {
        let spec = rs.spec();
        match spec.family {
            Family::A | Family::B | Family::C | Family::D => RepKind::Vector,
            Family::E => match spec.rank {
                6 => RepKind::Minimal27,
                7 => RepKind::Minimal56,
                _ => RepKind::AllRoots,
            },
            Family::F | Family::G => RepKind::ShortRoots,
            Family::I2 => RepKind::MgonVertices,
            Family::H => RepKind::AllRoots,
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepKind {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RepKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| RootSystemError::Usage(format!("unknown representation set {s:?}")))
    }
}

/// A finite set `𝓡` of weights with the action of every positive-root
/// reflection recorded as an index table.
#[derive(Clone, Debug)]
pub struct RepSet {
    kind: RepKind,
    weights: Vec<Vec<Scalar>>,
    /// `perm[a][μ]` is the index of `s_{ρ_a}(μ)`, if it lies in the set.
    perm: Vec<Vec<Option<usize>>>,
    /// `dots[a][μ] = ρ_a · μ`.
    dots: Vec<Vec<Scalar>>,
}

impl RepSet {
    /// Builds the set of the given kind; fails unless it is closed.
    pub fn build(rs: &RootSystem, kind: RepKind) -> Result<RepSet, RootSystemError> {
        let weights = weights_for(rs, kind)?;
        let set = RepSet::from_weights(rs, kind, weights)?;
        let report = set.check_closure();
        if !report.pass {
            return Err(RootSystemError::Internal(format!(
                "{} {} set is not closed: {}",
                rs.name(),
                kind,
                report.detail.unwrap_or_default()
            )));
        }
        Ok(set)
    }

    /// Wraps arbitrary weights; closure is not enforced.
    pub fn from_weights(rs: &RootSystem, kind: RepKind, weights: Vec<Vec<Scalar>>) -> Result<RepSet, RootSystemError> {
        let b = rs.backend();
        let mut converted = Vec::with_capacity(weights.len());
        for w in weights {
            if w.len() != rs.dim() {
                return Err(RootSystemError::Usage("weight length differs from the ambient dimension".into()));
            }
            converted.push(w.iter().map(|x| x.to_backend(b)).collect::<Result<Vec<_>, _>>()?);
        }
        let index: HashMap<Vec<Scalar>, usize> = converted.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut perm = Vec::with_capacity(rs.positive_roots().len());
        let mut dots = Vec::with_capacity(rs.positive_roots().len());
        for (a, root) in rs.positive_roots().iter().enumerate() {
            perm.push(converted.iter().map(|w| index.get(&rs.reflect_vector(a, w)).copied()).collect());
            dots.push(converted.iter().map(|w| dot(&root.vector, w)).collect());
        }
        Ok(RepSet { kind, weights: converted, perm, dots })
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Vec<Scalar>] {
        &self.weights
    }

    pub fn weight(&self, mu: usize) -> &[Scalar] {
        &self.weights[mu]
    }

    /// Index of `s_{ρ_a}(μ)`; panics on an unclosed set.
    pub fn reflect(&self, a: usize, mu: usize) -> usize {
        self.perm[a][mu].expect("closed representation set")
    }

    pub fn try_reflect(&self, a: usize, mu: usize) -> Option<usize> {
        self.perm[a][mu]
    }

    pub fn root_dot(&self, a: usize, mu: usize) -> &Scalar {
        &self.dots[a][mu]
    }

    /// Overwrites one table entry (fault injection).
    pub fn with_permutation_entry(&self, a: usize, mu: usize, target: usize) -> RepSet {
        let mut out = self.clone();
        out.perm[a][mu] = Some(target);
        out
    }

    /// Passes iff each reflection maps the set bijectively onto itself.
    pub fn check_closure(&self) -> ClosureReport {
        let d = self.len();
        let mut checked = 0;
        for (a, row) in self.perm.iter().enumerate() {
            let mut hit = vec![false; d];
            for (mu, entry) in row.iter().enumerate() {
                checked += 1;
                match entry {
                    None => {
                        return ClosureReport::failed(checked, a, mu, "reflection image is not in the set");
                    }
                    Some(j) if hit[*j] => {
                        return ClosureReport::failed(checked, a, mu, "two weights share a reflection image");
                    }
                    Some(j) => hit[*j] = true,
                }
                // the reflection is an involution
                if let Some(j) = entry {
                    if row[*j] != Some(mu) {
                        return ClosureReport::failed(checked, a, mu, "reflection table is not an involution");
                    }
                }
            }
        }
        ClosureReport { pass: true, checked, root: None, weight: None, detail: None }
    }

    pub fn summary(&self) -> RepSetSummary {
        RepSetSummary {
            kind: self.kind.name().to_string(),
            dim: self.len(),
            weights: self.weights.iter().map(|w| w.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClosureReport {
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ClosureReport {
    fn failed(checked: usize, a: usize, mu: usize, why: &str) -> ClosureReport {
        ClosureReport {
            pass: false,
            checked,
            root: Some(a),
            weight: Some(mu),
            detail: Some(format!("root {a}, weight {mu}: {why}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepSetSummary {
    pub kind: String,
    pub dim: usize,
    pub weights: Vec<Vec<String>>,
}

fn roots_of(rs: &RootSystem, orbit: Option<Orbit>) -> Vec<Vec<Scalar>> {
    rs.all_roots()
        .iter()
        .filter(|(_, o)| orbit.is_none_or(|x| x == *o))
        .map(|(v, _)| v.clone())
        .collect()
}

fn weights_for(rs: &RootSystem, kind: RepKind) -> Result<Vec<Vec<Scalar>>, RootSystemError> {
    let spec = rs.spec();
    let b = rs.backend();
    let dim = rs.dim();
    let bad = || RootSystemError::Usage(format!("{kind} is not available for {}", spec.name()));
    let unit = |i: usize, s: i64| -> Vec<Scalar> {
        (0..dim).map(|k| if k == i { b.from_i64(s) } else { b.zero() }).collect()
    };
    let two_orbits = spec.orbits().len() == 2;
    Ok(match kind {
        RepKind::Vector => match spec.family {
            Family::A => (0..dim).map(|i| unit(i, 1)).collect(),
            Family::B | Family::C | Family::D => (0..dim).flat_map(|i| [unit(i, 1), unit(i, -1)]).collect(),
            _ => return Err(bad()),
        },
        RepKind::Spinor | RepKind::Antispinor => {
            if spec.family != Family::D {
                return Err(bad());
            }
            let parity = u32::from(kind == RepKind::Antispinor);
            half_sign_vectors(dim, Some(parity))
        }
        RepKind::AllRoots => roots_of(rs, None),
        RepKind::LongRoots if two_orbits => roots_of(rs, Some(Orbit::Long)),
        RepKind::ShortRoots if two_orbits => roots_of(rs, Some(Orbit::Short)),
        RepKind::LongRoots | RepKind::ShortRoots => return Err(bad()),
        RepKind::Minimal27 if spec.family == Family::E && spec.rank == 6 => e6_minimal(),
        RepKind::Minimal56 if spec.family == Family::E && spec.rank == 7 => e7_minimal(),
        RepKind::Minimal27 | RepKind::Minimal56 => return Err(bad()),
        RepKind::MgonVertices if spec.family == Family::I2 => mgon_vertices(spec.m.expect("validated"), b),
        RepKind::MgonVertices => return Err(bad()),
    })
}
