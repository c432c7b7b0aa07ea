use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{parse_coefficient, Backend, Scalar};
use super::PolyError;

/// Exponent vector ordered graded-lexicographically with `q1 > q2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| u32::from(e)).sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    fn shift(&self, lower: usize, raise: Option<usize>) -> Monomial {
        let mut exps = self.exps.clone();
        exps[lower] -= 1;
        let mut degree = self.degree - 1;
        if let Some(i) = raise {
            exps[i] += 1;
            degree += 1;
        }
        Monomial { degree, exps }
    }
}

/// Sparse multivariate polynomial over a [`Scalar`] backend.
///
/// No zero coefficient is ever stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug)]
pub struct Poly {
    nvars: usize,
    backend: Backend,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Outcome of dividing by a linear form.
#[derive(Clone, Debug, PartialEq)]
pub enum Division {
    Exact(Poly),
    Indivisible { quotient: Poly, remainder: Poly },
}

impl Poly {
    pub fn zero(nvars: usize, backend: Backend) -> Self {
        Poly { nvars, backend, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let backend = c.backend();
        let mut p = Poly::zero(nvars, backend);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, backend: Backend) -> Self {
        Poly::constant(nvars, backend.one())
    }

    pub fn var(nvars: usize, i: usize, backend: Backend) -> Self {
        Poly::term(Monomial::var(nvars, i), backend.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero(m.exps.len(), c.backend());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form `sum_i coeffs[i] q_i`.
    pub fn linear(coeffs: &[Scalar], backend: Backend) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n, backend);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        backend: Backend,
        terms: impl IntoIterator<Item = (Vec<u16>, Scalar)>,
    ) -> Result<Self, PolyError> {
        let mut p = Poly::zero(nvars, backend);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::Usage(format!(
                    "exponent vector of length {} in a rank-{nvars} polynomial",
                    exps.len()
                )));
            }
            if c.backend() != backend {
                return Err(PolyError::Usage("coefficient backend mismatch".into()));
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.backend.zero())
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::Usage(format!(
                "rank mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.backend != other.backend {
            return Err(PolyError::Usage(format!(
                "backend mismatch: {} vs {}",
                self.backend.name(),
                other.backend.name()
            )));
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, a) in &other.terms {
            let v = if unit { a.clone() } else { a * c };
            self.add_term(m.clone(), v);
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.nvars, self.backend));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly { nvars: self.nvars, backend: self.backend, terms })
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.backend);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a * c))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Poly { nvars: self.nvars, backend: self.backend, terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(self.nvars, self.backend);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars, self.backend);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e > 0 {
                out.add_term(m.shift(var, None), c * &self.backend.from_i64(i64::from(e)));
            }
        }
        out
    }

    /// Directional derivative `(direction . grad) P`.
    pub fn directional_derivative(&self, direction: &[Scalar]) -> Result<Poly, PolyError> {
        if direction.len() != self.nvars {
            return Err(PolyError::Usage("direction length differs from rank".into()));
        }
        let mut out = Poly::zero(self.nvars, self.backend);
        for (i, c) in direction.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.partial(i), c);
            }
        }
        Ok(out)
    }

    /// Sum of second partials.
    pub fn laplacian(&self) -> Poly {
        let mut out = Poly::zero(self.nvars, self.backend);
        for i in 0..self.nvars {
            out.add_scaled(&self.partial(i).partial(i), &self.backend.one());
        }
        out
    }

    /// Euler operator `q . grad`: multiplies each term by its degree.
    pub fn euler(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree > 0)
            .map(|(m, c)| (m.clone(), c * &self.backend.from_i64(i64::from(m.degree))))
            .collect();
        Poly { nvars: self.nvars, backend: self.backend, terms }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Usage("evaluation point has the wrong length".into()));
        }
        if point.iter().any(|x| x.backend() != self.backend) {
            return Err(PolyError::Usage("evaluation point backend mismatch".into()));
        }
        let mut powers: Vec<Vec<Scalar>> = point.iter().map(|x| vec![self.backend.one(), x.clone()]).collect();
        let mut total = self.backend.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                let e = usize::from(e);
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            total = &total + &t;
        }
        Ok(total)
    }

    /// Substitutes `q_i -> images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::Usage("substitution has the wrong length".into()));
        }
        let target = images.first().map(Poly::nvars).unwrap_or(self.nvars);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(target, self.backend), p.clone()])
            .collect();
        let mut out = Poly::zero(target, self.backend);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                let e = usize::from(e);
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out.add_scaled(&t, &self.backend.one());
        }
        Ok(out)
    }

    /// `P o s_root`: evaluates `P` at `x - (root_check . x) root`.
    pub fn apply_reflection(&self, root: &[Scalar]) -> Result<Poly, PolyError> {
        let matrix = reflection_matrix(root, self.backend)?;
        if matrix.len() != self.nvars {
            return Err(PolyError::Usage("root length differs from rank".into()));
        }
        Ok(self.apply_linear_map(&matrix))
    }

    /// `P(A x)` for a square matrix `A` (rows are images of coordinates).
    pub fn apply_linear_map(&self, matrix: &[Vec<Scalar>]) -> Poly {
        if let Some(perm) = signed_permutation(matrix) {
            let mut out = Poly::zero(self.nvars, self.backend);
            for (m, c) in &self.terms {
                let mut exps = vec![0u16; self.nvars];
                let mut negate = false;
                for (i, &e) in m.exps.iter().enumerate() {
                    let (j, neg) = perm[i];
                    exps[j] = e;
                    negate ^= neg && e % 2 == 1;
                }
                let v = if negate { -c } else { c.clone() };
                out.terms.insert(Monomial::new(exps), v);
            }
            return out;
        }
        let images: Vec<Poly> = matrix.iter().map(|row| Poly::linear(row, self.backend)).collect();
        self.substitute(&images).expect("square matrix")
    }

    /// Divides by a homogeneous linear form, returning the quotient or the
    /// unique remainder the graded-lex division leaves.
    pub fn divide_linear(&self, form: &Poly) -> Result<Division, PolyError> {
        self.compatible(form)?;
        let (quotient, leftover) = self.divide_impl(form, false)?.expect("full division");
        if leftover.is_zero() {
            Ok(Division::Exact(quotient))
        } else {
            Ok(Division::Indivisible { quotient, remainder: leftover })
        }
    }

    /// Quotient by a linear form if it divides exactly, stopping at the first
    /// obstruction otherwise.
    pub fn try_divide_linear(&self, form: &Poly) -> Option<Poly> {
        match self.divide_impl(form, true) {
            Ok(Some((q, _))) => Some(q),
            _ => None,
        }
    }

    fn divide_impl(&self, form: &Poly, stop_early: bool) -> Result<Option<(Poly, Poly)>, PolyError> {
        let (var, lead) = linear_lead(form)?;
        let lead_inv = lead.inv();
        // the leading term of the remainder either carries the lead variable
        // (and is cancelled) or is final: later steps only create smaller terms
        let rest: Vec<(usize, Scalar)> = form
            .terms
            .iter()
            .map(|(m, c)| (m.exps.iter().position(|&e| e == 1).unwrap(), c.clone()))
            .filter(|(i, _)| *i != var)
            .collect();
        let mut rem = self.terms.clone();
        let mut quotient = Poly::zero(self.nvars, self.backend);
        let mut leftover = Poly::zero(self.nvars, self.backend);
        while let Some((m, c)) = rem.pop_last() {
            if m.exps[var] == 0 {
                if stop_early {
                    return Ok(None);
                }
                leftover.terms.insert(m, c);
                continue;
            }
            let qc = &c * &lead_inv;
            for (i, fc) in &rest {
                let key = m.shift(var, Some(*i));
                let delta = -&(&qc * fc);
                match rem.entry(key) {
                    Entry::Vacant(e) => {
                        e.insert(delta);
                    }
                    Entry::Occupied(mut e) => {
                        let s = &*e.get() + &delta;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
            quotient.terms.insert(m.shift(var, None), qc);
        }
        Ok(Some((quotient, leftover)))
    }

    /// Exact division by the linear form `root . q`.
    pub fn divide_exact(&self, root: &[Scalar]) -> Result<Division, PolyError> {
        if root.len() != self.nvars {
            return Err(PolyError::Usage("root length differs from rank".into()));
        }
        self.divide_linear(&Poly::linear(root, self.backend))
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Poly, PolyError> {
        let mut out = Poly::zero(self.nvars, backend);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_backend(backend)?);
        }
        Ok(out)
    }

    /// Embeds into a ring with more variables (new variables appended).
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars, self.backend);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.resize(nvars, 0);
            out.terms.insert(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }
}

fn linear_lead(form: &Poly) -> Result<(usize, Scalar), PolyError> {
    if form.is_zero() {
        return Err(PolyError::Usage("division by the zero form".into()));
    }
    if form.terms.keys().any(|m| m.degree != 1) {
        return Err(PolyError::Usage("divisor is not a homogeneous linear form".into()));
    }
    let (m, c) = form.leading().unwrap();
    let var = m.exps.iter().position(|&e| e == 1).unwrap();
    Ok((var, c.clone()))
}

/// Matrix of the reflection `x -> x - 2 (root . x)/|root|^2 root`.
pub fn reflection_matrix(root: &[Scalar], backend: Backend) -> Result<Vec<Vec<Scalar>>, PolyError> {
    let norm2 = root.iter().fold(backend.zero(), |acc, x| &acc + &(x * x));
    if norm2.is_zero() {
        return Err(PolyError::Usage("reflection in the zero root".into()));
    }
    let two_over = &backend.from_i64(2) * &norm2.inv();
    let n = root.len();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = if i == j { backend.one() } else { backend.zero() };
                    &delta - &(&(&two_over * &root[i]) * &root[j])
                })
                .collect()
        })
        .collect())
}

/// `(target index, negated)` per source coordinate when `matrix` maps each
/// coordinate to plus or minus another one.
fn signed_permutation(matrix: &[Vec<Scalar>]) -> Option<Vec<(usize, bool)>> {
    let n = matrix.len();
    // row i gives the image of coordinate i: q_i -> sum_j m[i][j] q_j, so the
    // monomial q_i^e maps to (+-q_j)^e.
    let mut perm = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for row in matrix {
        let mut hit = None;
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if hit.is_some() {
                return None;
            }
            let neg = if c.is_one() {
                false
            } else if (-c).is_one() {
                true
            } else {
                return None;
            };
            hit = Some((j, neg));
        }
        let (j, neg) = hit?;
        if seen[j] {
            return None;
        }
        seen[j] = true;
        perm.push((j, neg));
    }
    Some(perm)
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        self.nvars == other.nvars
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((m1, c1), (m2, c2))| m1 == m2 && c1 == c2)
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomial rank/backend mismatch")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly { nvars: self.nvars, backend: self.backend, terms }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mut vars = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => vars.push(format!("q{}", i + 1)),
                    _ => vars.push(format!("q{}^{}", i + 1, e)),
                }
            }
            let monomial = vars.join("*");
            let negative = !c.is_compound() && c.signum() < 0;
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let coeff = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
            if monomial.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{coeff}*{monomial}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u16>,
    coeff: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Plain(String),
    Quadratic { a: String, b: String, d: u8 },
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    rank: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        scalar_repr(self).serialize(serializer)
    }
}

fn scalar_repr(c: &Scalar) -> CoeffRepr {
    match c {
        Scalar::Quadratic { a, b, d } => CoeffRepr::Quadratic {
            a: a.to_string(),
            b: b.to_string(),
            d: *d,
        },
        other => CoeffRepr::Plain(other.to_string()),
    }
}

fn scalar_from_repr(r: CoeffRepr) -> Result<Scalar, PolyError> {
    match r {
        CoeffRepr::Plain(s) => parse_coefficient(&s),
        CoeffRepr::Quadratic { a, b, d } => {
            if !super::scalar::RADICANDS.contains(&d) {
                return Err(PolyError::Usage(format!("unsupported radicand {d}")));
            }
            Ok(Scalar::Quadratic {
                a: super::scalar::parse_rational(&a)?,
                b: super::scalar::parse_rational(&b)?,
                d,
            })
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        scalar_from_repr(CoeffRepr::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            rank: self.nvars,
            terms: self
                .terms()
                .map(|(m, c)| TermRepr { exp: m.exps.clone(), coeff: scalar_repr(c) })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            terms.push((t.exp, scalar_from_repr(t.coeff).map_err(D::Error::custom)?));
        }
        let backend = terms.first().map(|(_, c)| c.backend()).unwrap_or(Backend::Rational);
        Poly::from_terms(repr.rank, backend, terms).map_err(D::Error::custom)
    }
}
