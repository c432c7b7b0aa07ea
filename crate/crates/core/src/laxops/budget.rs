use serde::Serialize;

use super::LaxError;

/// Cost limits for operator expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest `f · d` (word length times representation dimension).
    pub max_fd: usize,
    /// Largest polynomial degree an expansion may reach.
    pub max_degree: u32,
    /// Largest number of terms in any single entry.
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_fd: 64, max_degree: 12, max_terms: 200_000 }
    }
}

pub const BUDGET_ENV: &str = "CALOGERO_BUDGET";

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_fd: usize::MAX, max_degree: u32::MAX, max_terms: usize::MAX }
    }

    /// Parses `fd=64,degree=12,terms=200000`; missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Budget, LaxError> {
        let mut b = Budget::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| LaxError::Usage(format!("bad budget entry {part:?}")))?;
            let bad = || LaxError::Usage(format!("bad budget value {part:?}"));
            match k.trim() {
                "fd" => b.max_fd = v.trim().parse().map_err(|_| bad())?,
                "degree" => b.max_degree = v.trim().parse().map_err(|_| bad())?,
                "terms" => b.max_terms = v.trim().parse().map_err(|_| bad())?,
                other => return Err(LaxError::Usage(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(b)
    }

    /// Default budget overridden by `CALOGERO_BUDGET` when set.
    pub fn from_env() -> Result<Budget, LaxError> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn check_expansion(&self, f: u32, d: usize, degree: u32) -> Result<(), LaxError> {
        let fd = f as usize * d;
        if fd > self.max_fd {
            return Err(LaxError::Resource(format!("f*d = {fd} exceeds the budget {}", self.max_fd)));
        }
        let reach = degree.saturating_add(f);
        if reach > self.max_degree {
            return Err(LaxError::Resource(format!(
                "degree {reach} exceeds the budget {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    pub fn check_terms(&self, terms: usize) -> Result<(), LaxError> {
        if terms > self.max_terms {
            return Err(LaxError::Resource(format!("{terms} terms exceed the budget {}", self.max_terms)));
        }
        Ok(())
    }
}
