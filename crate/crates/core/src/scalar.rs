//! Coefficient field for every computation in the crate.
//!
//! Three backends are supported: exact rationals, exact Gaussian rationals
//! (`a + b i` with `a, b ∈ ℚ`) and approximate complex numbers. Values of
//! different backends are never combined implicitly; the arithmetic
//! operators panic on a mismatch, and every public entry point that accepts
//! user data validates backends first and reports [`ScalarError`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which field a [`Scalar`] lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Rational,
    Gaussian,
    Approx,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Approx)
    }

    /// Smallest backend that contains both arguments.
    pub fn join(self, other: Backend) -> Backend {
        self.max(other)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rational => "exact-rational",
            Backend::Gaussian => "exact-gaussian-rational",
            Backend::Approx => "approx-complex",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("backend mismatch: {0} vs {1}")]
    Mixed(Backend, Backend),
    #[error("cannot parse scalar literal {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} backend has no imaginary unit")]
    NoImaginaryUnit(Backend),
}

/// An element of the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(Complex<BigRational>),
    Approx(Complex64),
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        Self::from_i64(backend, 0)
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_i64(backend, 1)
    }

    pub fn from_i64(backend: Backend, n: i64) -> Self {
        Self::from_ratio(backend, n, 1)
    }

    /// `n / d` in the given backend. Panics if `d == 0`.
    pub fn from_ratio(backend: Backend, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        match backend {
            Backend::Rational => Scalar::Rational(ratio(n, d)),
            Backend::Gaussian => Scalar::Gaussian(Complex::new(ratio(n, d), BigRational::zero())),
            Backend::Approx => Scalar::Approx(Complex64::new(n as f64 / d as f64, 0.0)),
        }
    }

    pub fn from_rational(backend: Backend, q: BigRational) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(q),
            Backend::Gaussian => Scalar::Gaussian(Complex::new(q, BigRational::zero())),
            Backend::Approx => Scalar::Approx(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx(Complex64::new(re, im))
    }

    /// `i` in the Gaussian or approximate backend.
    pub fn imaginary_unit(backend: Backend) -> Result<Self, ScalarError> {
        match backend {
            Backend::Rational => Err(ScalarError::NoImaginaryUnit(backend)),
            Backend::Gaussian => Ok(Scalar::Gaussian(Complex::new(BigRational::zero(), BigRational::one()))),
            Backend::Approx => Ok(Scalar::approx(0.0, 1.0)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Gaussian(_) => Backend::Gaussian,
            Scalar::Approx(_) => Backend::Approx,
        }
    }

    /// Exact zero test. Approximate values are zero only when both parts are `0.0`;
    /// use [`Scalar::is_negligible`] for tolerance-aware tests.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gaussian(z) => z.re.is_zero() && z.im.is_zero(),
            Scalar::Approx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Zero on exact backends, magnitude at most `tol` on the approximate one.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Approx(z) => z.norm() <= tol,
            _ => self.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.backend())
    }

    /// Modulus as a binary64 number.
    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Gaussian(z) => Complex64::new(
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            ),
            Scalar::Approx(z) => *z,
        }
    }

    /// The value as an exact rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Gaussian(z) if z.im.is_zero() => Some(z.re.clone()),
            _ => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Gaussian(z) => Scalar::Gaussian(z.conj()),
            Scalar::Approx(z) => Scalar::Approx(z.conj()),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Gaussian(z) => Scalar::Gaussian(z.inv()),
            Scalar::Approx(z) => Scalar::Approx(z.inv()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, ScalarError> {
        self.check_same(rhs)?;
        let inv = rhs.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn check_same(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.backend() == other.backend() {
            Ok(())
        } else {
            Err(ScalarError::Mixed(self.backend(), other.backend()))
        }
    }

    /// Lossless promotion into a wider backend (`Rational ⊂ Gaussian ⊂ Approx`).
    /// Returns `None` when `target` is narrower than the current backend.
    pub fn promote(&self, target: Backend) -> Option<Self> {
        match (self, target) {
            (_, t) if t == self.backend() => Some(self.clone()),
            (Scalar::Rational(q), Backend::Gaussian) => {
                Some(Scalar::Gaussian(Complex::new(q.clone(), BigRational::zero())))
            }
            (s, Backend::Approx) => Some(Scalar::Approx(s.to_complex())),
            _ => None,
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self * &Scalar::from_i64(self.backend(), k)
    }

    /// `(-1)^parity · self`.
    pub fn signed(self, negate: bool) -> Self {
        if negate {
            -self
        } else {
            self
        }
    }

    fn parse_real_part(s: &str) -> Result<RealLiteral, ScalarError> {
        let s = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        if s.contains(['.', 'e', 'E']) || s.eq_ignore_ascii_case("nan") || s.contains("inf") {
            return s.parse::<f64>().map(RealLiteral::Decimal).map_err(|_| err());
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(RealLiteral::Exact(BigRational::new(num, den)))
    }
}

enum RealLiteral {
    Exact(BigRational),
    Decimal(f64),
}

impl RealLiteral {
    fn to_f64(&self) -> f64 {
        match self {
            RealLiteral::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            RealLiteral::Decimal(x) => *x,
        }
    }
}

/// Literal grammar: `a`, `a/b` (rational), `a/b+c/d i` (Gaussian), decimals
/// such as `0.25` or `1e-3` (approximate), optionally with an imaginary part.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return Ok(match Scalar::parse_real_part(t)? {
                RealLiteral::Exact(q) => Scalar::Rational(q),
                RealLiteral::Decimal(x) => Scalar::approx(x, 0.0),
            });
        }
        let body = t[..t.len() - 1].trim_end();
        // Split at the last sign that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im_str = im_str.trim();
        let im = match im_str {
            "" | "+" => RealLiteral::Exact(BigRational::one()),
            "-" => RealLiteral::Exact(-BigRational::one()),
            other => Scalar::parse_real_part(other)?,
        };
        let re = Scalar::parse_real_part(re_str)?;
        match (re, im) {
            (RealLiteral::Exact(a), RealLiteral::Exact(b)) => Ok(Scalar::Gaussian(Complex::new(a, b))),
            (a, b) => {
                let (x, y) = (a.to_f64(), b.to_f64());
                if x.is_nan() || y.is_nan() {
                    return Err(err());
                }
                Ok(Scalar::approx(x, y))
            }
        }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&fmt_rational(q)),
            Scalar::Gaussian(z) => {
                if z.im.is_zero() {
                    f.write_str(&fmt_rational(&z.re))
                } else if z.re.is_zero() {
                    write!(f, "{} i", fmt_rational(&z.im))
                } else if z.im.is_negative() {
                    write!(f, "{}-{} i", fmt_rational(&z.re), fmt_rational(&-z.im.clone()))
                } else {
                    write!(f, "{}+{} i", fmt_rational(&z.re), fmt_rational(&z.im))
                }
            }
            Scalar::Approx(z) => {
                if z.im == 0.0 {
                    write!(f, "{:?}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "{:?}-{:?}i", z.re, -z.im)
                } else {
                    write!(f, "{:?}+{:?}i", z.re, z.im)
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[track_caller]
fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar backend mismatch: {} vs {}", a.backend(), b.backend())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a + b),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a + b),
            (a, b) => mismatch(a, b),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a - b),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a - b),
            (a, b) => mismatch(a, b),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a * b),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a * b),
            (a, b) => mismatch(a, b),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Gaussian(a) => Scalar::Gaussian(-a),
            Scalar::Approx(a) => Scalar::Approx(-a),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_gaussians() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), Scalar::from_ratio(Backend::Rational, 1, 2));
        assert_eq!("-4".parse::<Scalar>().unwrap(), Scalar::from_i64(Backend::Rational, -4));
        let z: Scalar = "1/2-3/4 i".parse().unwrap();
        assert_eq!(z.backend(), Backend::Gaussian);
        assert_eq!(z.to_string(), "1/2-3/4 i");
        let i: Scalar = "i".parse().unwrap();
        assert_eq!(i, Scalar::imaginary_unit(Backend::Gaussian).unwrap());
        assert_eq!("-2 i".parse::<Scalar>().unwrap().to_string(), "-2 i");
    }

    #[test]
    fn parses_decimals_as_approx() {
        let x: Scalar = "0.25".parse().unwrap();
        assert_eq!(x, Scalar::approx(0.25, 0.0));
        let z: Scalar = "1e-3+2.5i".parse().unwrap();
        assert_eq!(z, Scalar::approx(1e-3, 2.5));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for lit in ["0", "7", "-5/3", "2/3+1/5 i", "-1 i", "0.5", "0.5-0.25i"] {
            let s: Scalar = lit.parse().unwrap();
            assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s, "{lit}");
        }
    }

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let i = Scalar::imaginary_unit(Backend::Gaussian).unwrap();
        assert_eq!(&i * &i, Scalar::from_i64(Backend::Gaussian, -1));
        let z: Scalar = "1+1 i".parse().unwrap();
        let w = Scalar::one(Backend::Gaussian).checked_div(&z).unwrap();
        assert_eq!(w, "1/2-1/2 i".parse().unwrap());
    }

    #[test]
    fn mixing_is_reported() {
        let a = Scalar::one(Backend::Rational);
        let b = Scalar::one(Backend::Approx);
        assert_eq!(a.check_same(&b), Err(ScalarError::Mixed(Backend::Rational, Backend::Approx)));
        assert!(a.checked_div(&b).is_err());
    }

    #[test]
    #[should_panic(expected = "backend mismatch")]
    fn operator_mixing_panics() {
        let _ = Scalar::one(Backend::Rational) + Scalar::one(Backend::Gaussian);
    }

    #[test]
    fn promotion_is_one_way() {
        let q = Scalar::from_ratio(Backend::Rational, 1, 3);
        assert_eq!(q.promote(Backend::Gaussian).unwrap().backend(), Backend::Gaussian);
        assert!(Scalar::approx(1.0, 0.0).promote(Backend::Rational).is_none());
    }
}
