//! Coefficient rings.
//!
//! Polynomials are generic over a [`Coeff`] type. Floating point rings
//! (`f32`, `f64` and their complex forms) are used for Monte Carlo work and
//! large scans; rational and integer rings give exact norms. Every ring
//! carries a modulus type that accumulates `|c|^2` without loss.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary precision rational.
pub type Rational = BigRational;
/// Gaussian rational.
pub type ComplexRational = Complex<BigRational>;

/// Ring element usable as a polynomial coefficient.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Ring holding squared moduli.
    type Modulus: Clone
        + Debug
        + PartialOrd
        + Send
        + Sync
        + Zero
        + Add<Output = Self::Modulus>
        + Mul<Output = Self::Modulus>;

    /// True when arithmetic in this ring is exact.
    const EXACT: bool;

    fn modulus_sqr(&self) -> Self::Modulus;

    fn to_complex64(&self) -> Complex64;

    fn modulus_to_f64(m: &Self::Modulus) -> f64;

    /// Exact rational value of a squared modulus, `None` for float rings.
    fn modulus_to_rational(m: &Self::Modulus) -> Option<Rational>;

    /// Coefficient with the given real value, if representable.
    fn from_real(x: f64) -> Option<Self>;

    /// Coefficient with the given rational value; float rings round,
    /// integer rings need an integer.
    fn from_rational(r: &Rational) -> Option<Self>;

    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
}

macro_rules! impl_float_coeff {
    ($f:ty) => {
        impl Coeff for $f {
            type Modulus = $f;
            const EXACT: bool = false;

            fn modulus_sqr(&self) -> $f {
                self * self
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }
            fn modulus_to_f64(m: &$f) -> f64 {
                *m as f64
            }
            fn modulus_to_rational(_: &$f) -> Option<Rational> {
                None
            }
            fn from_real(x: f64) -> Option<Self> {
                Some(x as $f)
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                Some(rational_to_f64(r) as $f)
            }
        }

        impl Coeff for Complex<$f> {
            type Modulus = $f;
            const EXACT: bool = false;

            fn modulus_sqr(&self) -> $f {
                self.norm_sqr()
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
            fn modulus_to_f64(m: &$f) -> f64 {
                *m as f64
            }
            fn modulus_to_rational(_: &$f) -> Option<Rational> {
                None
            }
            fn from_real(x: f64) -> Option<Self> {
                Some(Complex::new(x as $f, 0.0))
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                Some(Complex::new(rational_to_f64(r) as $f, 0.0))
            }
        }
    };
}

impl_float_coeff!(f32);
impl_float_coeff!(f64);

macro_rules! impl_int_coeff {
    ($i:ty) => {
        impl Coeff for $i {
            type Modulus = $i;
            const EXACT: bool = true;

            fn modulus_sqr(&self) -> $i {
                self * self
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }
            fn modulus_to_f64(m: &$i) -> f64 {
                *m as f64
            }
            fn modulus_to_rational(m: &$i) -> Option<Rational> {
                Some(Rational::from_integer(BigInt::from(*m)))
            }
            fn from_real(x: f64) -> Option<Self> {
                (x.fract() == 0.0).then(|| x as $i)
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                r.is_integer().then(|| r.to_integer().to_i128()).flatten().and_then(|v| <$i>::try_from(v).ok())
            }
        }

        impl Coeff for Complex<$i> {
            type Modulus = $i;
            const EXACT: bool = true;

            fn modulus_sqr(&self) -> $i {
                self.re * self.re + self.im * self.im
            }
            fn to_complex64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
            fn modulus_to_f64(m: &$i) -> f64 {
                *m as f64
            }
            fn modulus_to_rational(m: &$i) -> Option<Rational> {
                Some(Rational::from_integer(BigInt::from(*m)))
            }
            fn from_real(x: f64) -> Option<Self> {
                (x.fract() == 0.0).then(|| Complex::new(x as $i, 0))
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                <$i as Coeff>::from_rational(r).map(|v| Complex::new(v, 0))
            }
        }
    };
}

impl_int_coeff!(i64);
impl_int_coeff!(i128);

impl Coeff for BigInt {
    type Modulus = BigInt;
    const EXACT: bool = true;

    fn modulus_sqr(&self) -> BigInt {
        self * self
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn modulus_to_f64(m: &BigInt) -> f64 {
        m.to_f64().unwrap_or(f64::INFINITY)
    }
    fn modulus_to_rational(m: &BigInt) -> Option<Rational> {
        Some(Rational::from_integer(m.clone()))
    }
    fn from_real(x: f64) -> Option<Self> {
        (x.fract() == 0.0).then(|| BigInt::from_f64(x)).flatten()
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        r.is_integer().then(|| r.to_integer())
    }
}

impl Coeff for Rational {
    type Modulus = Rational;
    const EXACT: bool = true;

    fn modulus_sqr(&self) -> Rational {
        self * self
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn modulus_to_f64(m: &Rational) -> f64 {
        rational_to_f64(m)
    }
    fn modulus_to_rational(m: &Rational) -> Option<Rational> {
        Some(m.clone())
    }
    fn from_real(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
}

impl Coeff for ComplexRational {
    type Modulus = Rational;
    const EXACT: bool = true;

    fn modulus_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn modulus_to_f64(m: &Rational) -> f64 {
        rational_to_f64(m)
    }
    fn modulus_to_rational(m: &Rational) -> Option<Rational> {
        Some(m.clone())
    }
    fn from_real(x: f64) -> Option<Self> {
        Rational::from_float(x).map(|r| Complex::new(r, Rational::zero()))
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(Complex::new(r.clone(), Rational::zero()))
    }
}

/// Nearest `f64` to a rational, robust to numerators and denominators
/// beyond the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both sides down to 64 significant bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (r.numer().abs() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    let v = n / d * 2f64.powi((ns - ds) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Parse `"p/q"`, `"p"` or a JSON number into an exact rational.
/// Numbers are converted through their exact binary value.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Rational::from_integer(BigInt::from(i)));
            }
            n.as_f64()
                .and_then(Rational::from_float)
                .ok_or_else(|| Error::Format(format!("not a finite number: {n}")))
        }
        _ => Err(Error::Format(format!("expected number or \"p/q\" string, got {v}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("malformed rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            if let Ok(i) = s.parse::<BigInt>() {
                return Ok(Rational::from_integer(i));
            }
            let f: f64 = s.parse().map_err(|_| bad())?;
            Rational::from_float(f).ok_or_else(bad)
        }
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Conversion between coefficients and the `re`/`im` fields of the JSON
/// polynomial format.
pub trait JsonCoeff: Coeff {
    fn to_json_parts(&self) -> (Value, Value);
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self>;
}

fn json_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("bad number {n}"))),
        Value::String(s) => parse_rational(s).map(|r| rational_to_f64(&r)),
        Value::Null => Ok(0.0),
        _ => Err(Error::Format(format!("expected number, got {v}"))),
    }
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl JsonCoeff for Complex64 {
    fn to_json_parts(&self) -> (Value, Value) {
        (json_number(self.re), json_number(self.im))
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        Ok(Complex64::new(json_f64(re)?, json_f64(im)?))
    }
}

impl JsonCoeff for f64 {
    fn to_json_parts(&self) -> (Value, Value) {
        (json_number(*self), json_number(0.0))
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        let i = json_f64(im)?;
        if i != 0.0 {
            return Err(Error::Format("imaginary part in real polynomial".into()));
        }
        json_f64(re)
    }
}

impl JsonCoeff for ComplexRational {
    fn to_json_parts(&self) -> (Value, Value) {
        (rational_to_json(&self.re), rational_to_json(&self.im))
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        let im = if im.is_null() { Rational::zero() } else { rational_from_json(im)? };
        Ok(Complex::new(rational_from_json(re)?, im))
    }
}

impl JsonCoeff for Complex<i128> {
    fn to_json_parts(&self) -> (Value, Value) {
        (Value::String(self.re.to_string()), Value::String(self.im.to_string()))
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        let int = |v: &Value| -> Result<i128> {
            let r = if v.is_null() { Rational::zero() } else { rational_from_json(v)? };
            if !r.is_integer() {
                return Err(Error::Format(format!("non-integer coefficient {v}")));
            }
            r.to_integer()
                .to_i128()
                .ok_or_else(|| Error::Format(format!("coefficient out of range {v}")))
        };
        Ok(Complex::new(int(re)?, int(im)?))
    }
}
