use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RootSystemError;
use crate::polyring::{parse_rational, Backend};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    I2,
    H,
}

impl FromStr for Family {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            "I2" | "I" => Family::I2,
            "H" => Family::H,
            other => return Err(RootSystemError::Usage(format!("unknown root system family {other:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::I2 => "I2",
            Family::H => "H",
        };
        write!(f, "{s}")
    }
}

/// How a root system is placed in coordinate space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    /// `A_{r-1}` and `G2` live in `R^r` / `R^3` with integer coordinates.
    #[default]
    Ambient,
    /// `G2` in the plane with coordinates in `Q(sqrt 3)`.
    Planar,
}

/// Which root system to build.
///
/// For family `A` the `rank` field is the number of coordinates `r`
/// (the system is `A_{r-1}` embedded in `R^r`, centre of mass included).
/// For `I2` the rank is always 2 and `m` selects the dihedral order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub embedding: Embedding,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Self {
        RootSystemSpec { family, rank, m: None, embedding: Embedding::Ambient }
    }

    pub fn dihedral(m: u32) -> Self {
        RootSystemSpec { family: Family::I2, rank: 2, m: Some(m), embedding: Embedding::Ambient }
    }

    pub fn planar(mut self) -> Self {
        self.embedding = Embedding::Planar;
        self
    }

    pub fn validate(&self) -> Result<(), RootSystemError> {
        let r = self.rank;
        let ok = match self.family {
            Family::A => r >= 2,
            Family::B | Family::C => r >= 2,
            Family::D => r >= 3,
            Family::E => (6..=8).contains(&r),
            Family::F => r == 4,
            Family::G => r == 2,
            Family::H => (3..=4).contains(&r),
            Family::I2 => {
                let m = self.m.ok_or_else(|| RootSystemError::Usage("I2 requires m".into()))?;
                if m < 3 {
                    return Err(RootSystemError::Usage(format!("I2(m) requires m >= 3, got {m}")));
                }
                true
            }
        };
        if !ok {
            return Err(RootSystemError::Usage(format!(
                "invalid rank {r} for family {}",
                self.family
            )));
        }
        if self.embedding == Embedding::Planar && self.family != Family::G {
            return Err(RootSystemError::Usage("the planar embedding exists only for G2".into()));
        }
        Ok(())
    }

    /// Conventional name, e.g. `A2`, `B3`, `I2(7)`.
    pub fn name(&self) -> String {
        match self.family {
            Family::A => format!("A{}", self.rank - 1),
            Family::I2 => format!("I2({})", self.m.unwrap_or(0)),
            f => format!("{f}{}", self.rank),
        }
    }

    /// Orbits of the Coxeter group on roots, each carrying its own coupling.
    pub fn orbits(&self) -> Vec<Orbit> {
        match self.family {
            Family::B | Family::C | Family::F | Family::G => vec![Orbit::Long, Orbit::Short],
            Family::I2 if self.m.unwrap_or(3) % 2 == 0 => vec![Orbit::Long, Orbit::Short],
            _ => vec![Orbit::All],
        }
    }

    /// Coefficient field the exact realization needs.
    pub fn natural_backend(&self) -> Backend {
        match (self.family, self.m, self.embedding) {
            (Family::H, _, _) => Backend::Quadratic(5),
            (Family::G, _, Embedding::Planar) => Backend::Quadratic(3),
            (Family::I2, Some(8), _) => Backend::Quadratic(2),
            (Family::I2, Some(12), _) => Backend::Quadratic(3),
            (Family::I2, _, _) => Backend::Float,
            _ => Backend::Rational,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orbit {
    Long,
    Short,
    All,
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orbit::Long => "long",
            Orbit::Short => "short",
            Orbit::All => "all",
        })
    }
}

impl FromStr for Orbit {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "long" => Ok(Orbit::Long),
            "short" => Ok(Orbit::Short),
            "all" => Ok(Orbit::All),
            other => Err(RootSystemError::Usage(format!("unknown orbit {other:?}"))),
        }
    }
}

/// Coupling constants keyed by orbit label, as exact rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Couplings(BTreeMap<Orbit, num_rational::BigRational>);

impl Couplings {
    pub fn new() -> Self {
        Couplings::default()
    }

    pub fn uniform(value: num_rational::BigRational) -> Self {
        let mut c = Couplings::new();
        c.0.insert(Orbit::All, value);
        c
    }

    pub fn uniform_int(value: i64) -> Self {
        Couplings::uniform(num_rational::BigRational::from_integer(value.into()))
    }

    pub fn set(&mut self, orbit: Orbit, value: num_rational::BigRational) {
        self.0.insert(orbit, value);
    }

    pub fn with(mut self, orbit: Orbit, value: num_rational::BigRational) -> Self {
        self.set(orbit, value);
        self
    }

    pub fn get(&self, orbit: Orbit) -> Option<&num_rational::BigRational> {
        self.0.get(&orbit)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Orbit, &num_rational::BigRational)> {
        self.0.iter()
    }

    /// Overlays `other` on top of `self`.
    pub fn merged(&self, other: &Couplings) -> Couplings {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.0.insert(*k, v.clone());
        }
        out
    }

    /// Parses `long=3/2,short=1` or `all=2` (commas or newlines separate
    /// entries; `#` starts a comment).
    pub fn parse(text: &str) -> Result<Couplings, RootSystemError> {
        let mut out = Couplings::new();
        for raw in text.split([',', '\n']) {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| RootSystemError::Usage(format!("expected key=value, got {line:?}")))?;
            let orbit: Orbit = key.trim().parse()?;
            let value = parse_rational(value).map_err(|e| RootSystemError::Usage(e.to_string()))?;
            out.0.insert(orbit, value);
        }
        Ok(out)
    }

    /// One coupling per orbit of `spec`; `all` fills any orbit not given.
    pub fn resolve(&self, spec: &RootSystemSpec) -> Result<BTreeMap<Orbit, num_rational::BigRational>, RootSystemError> {
        let orbits = spec.orbits();
        for k in self.0.keys() {
            if *k != Orbit::All && !orbits.contains(k) {
                return Err(RootSystemError::Usage(format!(
                    "{} has no {k} roots (use all=...)",
                    spec.name()
                )));
            }
        }
        let mut out = BTreeMap::new();
        for o in orbits {
            let v = self
                .0
                .get(&o)
                .or_else(|| self.0.get(&Orbit::All))
                .ok_or_else(|| RootSystemError::Usage(format!("missing coupling for {o} roots of {}", spec.name())))?;
            out.insert(o, v.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for Couplings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}
