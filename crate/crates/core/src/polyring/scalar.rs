//! Exact and approximate coefficient fields.
//!
//! A [`Scalar`] lives in one of three backends: the rationals, a real
//! quadratic extension `Q(sqrt d)` with `d` in {2, 3, 5}, or `f64` with a
//! fixed relative tolerance. Values from different backends never combine;
//! the operator impls panic on a mismatch (a programming error inside one
//! system) while the `checked_*` methods report it as [`PolyError::Usage`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Relative tolerance of the float backend.
pub const FLOAT_TOL: f64 = 1e-9;

/// Square-free radicands supported by the quadratic backend.
pub const RADICANDS: [u8; 3] = [2, 3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Rational,
    Quadratic(u8),
    Float,
}

impl Backend {
    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.lift(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(self, p: i64, q: i64) -> Scalar {
        self.lift(&BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Embeds a rational number into this backend.
    pub fn lift(self, r: &BigRational) -> Scalar {
        match self {
            Backend::Rational => Scalar::Rational(r.clone()),
            Backend::Quadratic(d) => Scalar::Quadratic {
                a: r.clone(),
                b: BigRational::zero(),
                d,
            },
            Backend::Float => Scalar::Float(ratio_to_f64(r)),
        }
    }

    /// `a + b sqrt(d)`; only meaningful for the quadratic backend.
    pub fn quadratic(self, a: BigRational, b: BigRational) -> Result<Scalar, PolyError> {
        match self {
            Backend::Quadratic(d) => Ok(Scalar::Quadratic { a, b, d }),
            Backend::Float => {
                Ok(Scalar::Float(ratio_to_f64(&a) + ratio_to_f64(&b) * self.sqrt_radicand()))
            }
            Backend::Rational => {
                if b.is_zero() {
                    Ok(Scalar::Rational(a))
                } else {
                    Err(PolyError::Usage("irrational value in the rational backend".into()))
                }
            }
        }
    }

    fn sqrt_radicand(self) -> f64 {
        match self {
            Backend::Quadratic(d) => f64::from(d).sqrt(),
            _ => f64::NAN,
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Float)
    }

    pub fn name(self) -> String {
        match self {
            Backend::Rational => "exact".to_string(),
            Backend::Quadratic(d) => format!("exact-sqrt{d}"),
            Backend::Float => "float".to_string(),
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    /// `a + b sqrt(d)`.
    Quadratic { a: BigRational, b: BigRational, d: u8 },
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Quadratic { d, .. } => Backend::Quadratic(*d),
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic { a, b, .. } => a.is_zero() && b.is_zero(),
            Scalar::Float(x) => x.abs() <= FLOAT_TOL,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Quadratic { a, b, .. } => a.is_one() && b.is_zero(),
            Scalar::Float(x) => (x - 1.0).abs() <= FLOAT_TOL,
        }
    }

    /// The rational value, if this scalar is rational (in any exact backend).
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quadratic { a, b, .. } if b.is_zero() => Some(a),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => ratio_to_f64(r),
            Scalar::Quadratic { a, b, d } => {
                ratio_to_f64(a) + ratio_to_f64(b) * f64::from(*d).sqrt()
            }
            Scalar::Float(x) => *x,
        }
    }

    /// Re-expresses the value in `backend`; exact to float is always allowed,
    /// otherwise only rational values move between exact backends.
    pub fn to_backend(&self, backend: Backend) -> Result<Scalar, PolyError> {
        if self.backend() == backend {
            return Ok(self.clone());
        }
        match backend {
            Backend::Float => Ok(Scalar::Float(self.to_f64())),
            _ => match self.as_rational() {
                Some(r) => Ok(backend.lift(r)),
                None => Err(PolyError::Usage(format!(
                    "cannot convert {} to the {} backend",
                    self,
                    backend.name()
                ))),
            },
        }
    }

    /// Sign of the value: -1, 0 or 1 (float values within tolerance of zero give 0).
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(r) => sign_of(r),
            Scalar::Quadratic { a, b, d } => {
                let (sa, sb) = (sign_of(a), sign_of(b));
                if sb == 0 || sa == sb {
                    return if sa == 0 { sb } else { sa };
                }
                if sa == 0 {
                    return sb;
                }
                let lhs = a * a;
                let rhs = b * b * BigRational::from_integer(BigInt::from(*d));
                if lhs > rhs {
                    sa
                } else {
                    sb
                }
            }
            Scalar::Float(x) => {
                if x.abs() <= FLOAT_TOL {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn mismatch(&self, other: &Scalar) -> PolyError {
        PolyError::Usage(format!(
            "backend mismatch: {} vs {}",
            self.backend().name(),
            other.backend().name()
        ))
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Quadratic { a, b, d }, Scalar::Quadratic { a: c, b: e, d: d2 }) if d == d2 => {
                Scalar::Quadratic { a: a + c, b: b + e, d: *d }
            }
            (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x + y),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Quadratic { a, b, d }, Scalar::Quadratic { a: c, b: e, d: d2 }) if d == d2 => {
                let dd = BigRational::from_integer(BigInt::from(*d));
                Scalar::Quadratic {
                    a: a * c + b * e * dd,
                    b: a * e + b * c,
                    d: *d,
                }
            }
            (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x * y),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_inv(&self) -> Result<Scalar, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Arithmetic("inversion of zero".into()));
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Quadratic { a, b, d } => {
                let dd = BigRational::from_integer(BigInt::from(*d));
                let norm = a * a - b * b * dd;
                Scalar::Quadratic {
                    a: a / &norm,
                    b: -(b / &norm),
                    d: *d,
                }
            }
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Backend-aware equality: structural for exact values, toleranced for floats.
    pub fn checked_eq(&self, other: &Scalar) -> Result<bool, PolyError> {
        if self.backend() != other.backend() {
            return Err(self.mismatch(other));
        }
        Ok(self == other)
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inversion of zero")
    }

    /// Exact string form used in text and JSON output.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }

    /// True when the text form needs parentheses as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        matches!(self, Scalar::Quadratic { a, b, .. } if !a.is_zero() && !b.is_zero())
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p`, `p/q` or a finite decimal like `1.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::Usage(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(PolyError::Arithmetic("zero denominator".into()));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?.abs()
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let mut value = BigRational::new(int_part * &scale + frac_part, scale);
        if neg {
            value = -value;
        }
        return Ok(value);
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

/// Parses a coefficient string as emitted by [`Scalar`]'s `Display`: floats
/// use exponent notation, everything else is an exact rational.
pub fn parse_coefficient(s: &str) -> Result<Scalar, PolyError> {
    if s.contains(['e', 'E']) || s.contains("inf") || s.contains("NaN") {
        s.trim()
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| PolyError::Usage(format!("not a float: {s:?}")))
    } else {
        parse_rational(s).map(Scalar::Rational)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x == y,
            (Scalar::Quadratic { a, b, d }, Scalar::Quadratic { a: c, b: e, d: d2 }) => {
                d == d2 && a == c && b == e
            }
            (Scalar::Float(x), Scalar::Float(y)) => {
                (x - y).abs() <= FLOAT_TOL * 1f64.max(x.abs()).max(y.abs())
            }
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Float values hash only their discriminant so that toleranced
        // equality stays consistent with the hash.
        match self {
            Scalar::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Quadratic { a, b, d } => {
                1u8.hash(state);
                a.hash(state);
                b.hash(state);
                d.hash(state);
            }
            Scalar::Float(_) => 2u8.hash(state),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.signum().cmp(&0))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic { a, b, d } => {
                if b.is_zero() {
                    return write!(f, "{a}");
                }
                let radical = if b.is_one() {
                    format!("sqrt({d})")
                } else if (-b).is_one() {
                    format!("-sqrt({d})")
                } else {
                    format!("{b}*sqrt({d})")
                };
                if a.is_zero() {
                    write!(f, "{radical}")
                } else if b.is_negative() {
                    write!(f, "{a} - {}", radical.trim_start_matches('-'))
                } else {
                    write!(f, "{a} + {radical}")
                }
            }
            Scalar::Float(x) => write!(f, "{x:.16e}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar backend mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
