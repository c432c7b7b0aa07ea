use crate::polyring::{LinearForms, Poly, RatFun, Scalar};

/// One rational function per weight of a representation set.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantVec {
    entries: Vec<RatFun>,
}

impl EquivariantVec {
    pub fn new(entries: Vec<RatFun>) -> Self {
        EquivariantVec { entries }
    }

    pub fn from_polys(entries: Vec<Poly>) -> Self {
        EquivariantVec { entries: entries.into_iter().map(RatFun::from).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RatFun] {
        &self.entries
    }

    pub fn entry(&self, mu: usize) -> &RatFun {
        &self.entries[mu]
    }

    pub fn into_entries(self) -> Vec<RatFun> {
        self.entries
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(RatFun::is_poly)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFun::is_zero)
    }

    /// Entries as polynomials, if none has a denominator.
    pub fn polys(&self) -> Option<Vec<Poly>> {
        self.entries.iter().map(|e| e.as_poly().cloned()).collect()
    }

    /// Replaces one entry (used to build corrupted inputs).
    pub fn with_entry(&self, mu: usize, value: RatFun) -> Self {
        let mut out = self.clone();
        out.entries[mu] = value;
        out
    }

    pub fn add(&self, other: &EquivariantVec, forms: &LinearForms) -> EquivariantVec {
        EquivariantVec {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b, forms)).collect(),
        }
    }

    pub fn sub(&self, other: &EquivariantVec, forms: &LinearForms) -> EquivariantVec {
        EquivariantVec {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b, forms)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> EquivariantVec {
        EquivariantVec { entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    /// `Ts(v) = Σ_μ v_μ`.
    pub fn total_sum(&self, forms: &LinearForms) -> RatFun {
        let first = &self.entries[0];
        let mut acc = RatFun::zero(first.nvars(), first.backend());
        if self.is_polynomial() {
            let mut p = Poly::zero(first.nvars(), first.backend());
            for e in &self.entries {
                p.add_scaled(e.numerator(), &first.backend().one());
            }
            return p.into();
        }
        for e in &self.entries {
            acc = acc.add(e, forms);
        }
        acc
    }
}
