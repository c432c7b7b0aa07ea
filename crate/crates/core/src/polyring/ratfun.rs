use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::poly::Poly;
use super::scalar::{Backend, Scalar};
use super::PolyError;

/// The table of homogeneous linear forms (one per positive root) that may
/// appear in denominators. Forms are pairwise non-proportional, hence coprime.
#[derive(Clone, Debug)]
pub struct LinearForms {
    vectors: Vec<Vec<Scalar>>,
    forms: Vec<Poly>,
    backend: Backend,
}

impl LinearForms {
    pub fn new(vectors: Vec<Vec<Scalar>>, backend: Backend) -> Self {
        let forms = vectors.iter().map(|v| Poly::linear(v, backend)).collect();
        LinearForms { vectors, forms, backend }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, i: usize) -> &Poly {
        &self.forms[i]
    }

    pub fn vector(&self, i: usize) -> &[Scalar] {
        &self.vectors[i]
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }
}

/// Rational function whose denominator is a product of powers of the forms
/// in a [`LinearForms`] table, stored as `index -> multiplicity`.
///
/// Always reduced: the numerator is not divisible by any denominator factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun {
    num: Poly,
    den: BTreeMap<usize, u32>,
}

impl From<Poly> for RatFun {
    fn from(num: Poly) -> Self {
        RatFun { num, den: BTreeMap::new() }
    }
}

impl RatFun {
    pub fn zero(nvars: usize, backend: Backend) -> Self {
        Poly::zero(nvars, backend).into()
    }

    /// `num / prod forms[i]^m`, reduced.
    pub fn new(num: Poly, den: BTreeMap<usize, u32>, forms: &LinearForms) -> Self {
        let mut r = RatFun { num, den };
        r.den.retain(|_, m| *m > 0);
        r.reduce(forms);
        r
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn backend(&self) -> Backend {
        self.num.backend()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<Poly, RatFun> {
        if self.is_poly() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    fn reduce(&mut self, forms: &LinearForms) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<usize> = self.den.keys().copied().collect();
        for i in keys {
            self.reduce_factor(i, forms);
        }
    }

    fn reduce_factor(&mut self, i: usize, forms: &LinearForms) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        while let Some(m) = self.den.get(&i).copied() {
            match self.num.try_divide_linear(forms.form(i)) {
                Some(q) => {
                    self.num = q;
                    if m == 1 {
                        self.den.remove(&i);
                    } else {
                        self.den.insert(i, m - 1);
                    }
                }
                None => break,
            }
        }
    }

    /// Divides by `forms[i]^mult`.
    pub fn divide_by_form(&self, i: usize, mult: u32, forms: &LinearForms) -> RatFun {
        let mut out = self.clone();
        if out.num.is_zero() || mult == 0 {
            return out;
        }
        *out.den.entry(i).or_insert(0) += mult;
        out.reduce_factor(i, forms);
        out
    }

    pub fn scale(&self, c: &Scalar) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.nvars(), self.backend());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    fn lifted_numerator(&self, target: &BTreeMap<usize, u32>, forms: &LinearForms) -> Poly {
        let mut n = self.num.clone();
        for (&i, &m) in target {
            let have = self.den.get(&i).copied().unwrap_or(0);
            for _ in have..m {
                n = &n * forms.form(i);
            }
        }
        n
    }

    pub fn add(&self, other: &RatFun, forms: &LinearForms) -> RatFun {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatFun::new(&self.num + &other.num, self.den.clone(), forms);
        }
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            let e = den.entry(i).or_insert(0);
            *e = (*e).max(m);
        }
        let num = &self.lifted_numerator(&den, forms) + &other.lifted_numerator(&den, forms);
        RatFun::new(num, den, forms)
    }

    pub fn sub(&self, other: &RatFun, forms: &LinearForms) -> RatFun {
        self.add(&other.neg(), forms)
    }

    pub fn mul(&self, other: &RatFun, forms: &LinearForms) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.nvars(), self.backend());
        }
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            *den.entry(i).or_insert(0) += m;
        }
        RatFun::new(&self.num * &other.num, den, forms)
    }

    pub fn mul_poly(&self, p: &Poly, forms: &LinearForms) -> RatFun {
        if self.is_poly() {
            return (&self.num * p).into();
        }
        RatFun::new(&self.num * p, self.den.clone(), forms)
    }

    /// Directional derivative, using `d(1/l) = -(dl)/l^2` for each factor.
    pub fn directional_derivative(&self, direction: &[Scalar], forms: &LinearForms) -> Result<RatFun, PolyError> {
        let dn = self.num.directional_derivative(direction)?;
        if self.is_poly() {
            return Ok(dn.into());
        }
        let backend = self.backend();
        // d(n/D) = (dn * L - n * sum_i m_i c_i L/l_i) / (D * L), L = prod of distinct factors
        let mut big = self.den.clone();
        for m in big.values_mut() {
            *m += 1;
        }
        let mut total = dn;
        for &i in self.den.keys() {
            total = &total * forms.form(i);
        }
        for (&i, &m) in &self.den {
            let ci = forms
                .vector(i)
                .iter()
                .zip(direction)
                .fold(backend.zero(), |acc, (a, b)| &acc + &(a * b));
            if ci.is_zero() {
                continue;
            }
            let mut others = self.num.clone();
            for &k in self.den.keys() {
                if k != i {
                    others = &others * forms.form(k);
                }
            }
            total.add_scaled(&others, &-&(&ci * &backend.from_i64(i64::from(m))));
        }
        Ok(RatFun::new(total, big, forms))
    }

    pub fn partial(&self, var: usize, forms: &LinearForms) -> RatFun {
        let backend = self.backend();
        let dir: Vec<Scalar> = (0..self.nvars())
            .map(|k| if k == var { backend.one() } else { backend.zero() })
            .collect();
        self.directional_derivative(&dir, forms).expect("unit direction")
    }

    pub fn laplacian(&self, forms: &LinearForms) -> RatFun {
        if let Some(p) = self.as_poly() {
            return p.laplacian().into();
        }
        let mut out = RatFun::zero(self.nvars(), self.backend());
        for k in 0..self.nvars() {
            out = out.add(&self.partial(k, forms).partial(k, forms), forms);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar], forms: &LinearForms) -> Result<Scalar, PolyError> {
        let mut value = self.num.eval(point)?;
        for (&i, &m) in &self.den {
            let l = forms.form(i).eval(point)?;
            if l.is_zero() {
                return Err(PolyError::Singular(format!(
                    "point lies on the hyperplane of denominator factor {i}"
                )));
            }
            let inv = l.inv();
            for _ in 0..m {
                value = &value * &inv;
            }
        }
        Ok(value)
    }

    /// Composes with a linear map that permutes the forms up to sign:
    /// `forms[i] o map = sign * forms[perm(i)]`.
    pub fn compose(
        &self,
        matrix: &[Vec<Scalar>],
        perm: impl Fn(usize) -> (usize, bool),
        forms: &LinearForms,
    ) -> RatFun {
        let mut num = self.num.apply_linear_map(matrix);
        let mut den = BTreeMap::new();
        let mut negate = false;
        for (&i, &m) in &self.den {
            let (j, neg) = perm(i);
            den.insert(j, m);
            negate ^= neg && m % 2 == 1;
        }
        if negate {
            num = -num;
        }
        RatFun::new(num, den, forms)
    }

    pub fn to_backend(&self, backend: Backend) -> Result<RatFun, PolyError> {
        Ok(RatFun { num: self.num.to_backend(backend)?, den: self.den.clone() })
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(i, m)| if *m == 1 { format!("l{i}") } else { format!("l{i}^{m}") })
            .collect();
        write!(f, "({}) / ({})", self.num, den.join("*"))
    }
}

/// A polynomial serializes as a plain polynomial object; otherwise
/// `{"numerator": poly, "denominator": [[root_index, multiplicity], ...]}`.
impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_poly() {
            return self.num.serialize(serializer);
        }
        let den: Vec<(usize, u32)> = self.den.iter().map(|(&i, &m)| (i, m)).collect();
        let mut st = serializer.serialize_struct("RatFun", 2)?;
        st.serialize_field("numerator", &self.num)?;
        st.serialize_field("denominator", &den)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Backend = Backend::Rational;

    fn c(n: i64) -> Scalar {
        B.from_i64(n)
    }

    fn a1_forms() -> LinearForms {
        LinearForms::new(vec![vec![c(1), c(-1)]], B)
    }

    #[test]
    fn opposite_fractions_cancel() {
        let forms = a1_forms();
        let g = Poly::constant(2, B.from_ratio(3, 2));
        let x = RatFun::new(g.clone(), [(0, 1)].into(), &forms);
        let y = RatFun::new(-&g, [(0, 1)].into(), &forms);
        let s = x.add(&y, &forms);
        assert!(s.is_zero());
        assert!(s.is_poly());
    }

    #[test]
    fn reduces_to_polynomial() {
        let forms = a1_forms();
        let q1 = Poly::var(2, 0, B);
        let q2 = Poly::var(2, 1, B);
        let num = &(&q1 * &q1) - &(&q2 * &q2);
        let r = RatFun::new(num, [(0, 1)].into(), &forms);
        assert_eq!(r.as_poly(), Some(&(&q1 + &q2)));
    }

    #[test]
    fn square_of_inverse() {
        let forms = a1_forms();
        let inv = RatFun::new(Poly::one(2, B), [(0, 1)].into(), &forms);
        let sq = inv.mul(&inv, &forms);
        assert_eq!(sq.denominator().get(&0), Some(&2));
    }

    #[test]
    fn derivative_of_inverse() {
        let forms = a1_forms();
        let inv = RatFun::new(Poly::one(2, B), [(0, 1)].into(), &forms);
        // d/dq1 1/(q1-q2) = -1/(q1-q2)^2
        let d = inv.partial(0, &forms);
        assert_eq!(d, RatFun::new(Poly::constant(2, c(-1)), [(0, 2)].into(), &forms));
    }

    #[test]
    fn singular_evaluation() {
        let forms = a1_forms();
        let inv = RatFun::new(Poly::one(2, B), [(0, 1)].into(), &forms);
        assert!(matches!(inv.eval(&[c(1), c(1)], &forms), Err(PolyError::Singular(_))));
        assert_eq!(inv.eval(&[c(3), c(1)], &forms).unwrap(), B.from_ratio(1, 2));
    }
}
