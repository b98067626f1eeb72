//! The coefficient domains polynomials and matrices are generic over.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, rational_to_f64, CycloScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "exact-rational")]
    Rational,
    #[serde(rename = "exact-cyclotomic")]
    Cyclotomic,
    #[serde(rename = "complex-float")]
    ComplexFloat,
}

impl Domain {
    pub fn is_exact(self) -> bool {
        !matches!(self, Domain::ComplexFloat)
    }
}

/// Serialized form of a scalar.
///
/// Rationals are the string `"p/q"`, cyclotomic elements a record with their
/// conductor and power-basis coefficients, complex floats a `{re, im}` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRecord {
    Rational(String),
    Cyclotomic { conductor: u32, coeffs: Vec<String> },
    Complex { re: f64, im: f64 },
}

/// A field element usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const DOMAIN: Domain;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact zero test; for floats this is `== 0.0`.
    fn is_zero(&self) -> bool;
    fn from_rational(q: &BigRational) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    fn to_record(&self) -> ScalarRecord;
    fn from_record(record: &ScalarRecord) -> Result<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Human-readable rendering used by the text output format.
    fn to_text(&self) -> String;
}

impl Scalar for BigRational {
    const DOMAIN: Domain = Domain::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn to_record(&self) -> ScalarRecord {
        ScalarRecord::Rational(format_rational(self))
    }
    fn from_record(record: &ScalarRecord) -> Result<Self> {
        match record {
            ScalarRecord::Rational(s) => parse_rational(s),
            ScalarRecord::Cyclotomic { .. } => CycloScalar::from_record(record)?
                .to_rational()
                .ok_or_else(|| Error::Parse("cyclotomic value is not rational".into())),
            ScalarRecord::Complex { .. } => {
                Err(Error::Parse("complex value where a rational was expected".into()))
            }
        }
    }
    fn to_text(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for CycloScalar {
    const DOMAIN: Domain = Domain::Cyclotomic;

    fn zero() -> Self {
        CycloScalar::zero()
    }
    fn one() -> Self {
        CycloScalar::one()
    }
    fn is_zero(&self) -> bool {
        CycloScalar::is_zero(self)
    }
    fn from_rational(q: &BigRational) -> Self {
        CycloScalar::from_rational(q.clone())
    }
    fn inv(&self) -> Option<Self> {
        CycloScalar::inv(self)
    }
    fn to_complex(&self) -> Complex64 {
        CycloScalar::to_complex(self)
    }
    fn to_record(&self) -> ScalarRecord {
        ScalarRecord::Cyclotomic {
            conductor: self.conductor(),
            coeffs: self.coeffs().iter().map(format_rational).collect(),
        }
    }
    fn from_record(record: &ScalarRecord) -> Result<Self> {
        match record {
            ScalarRecord::Rational(s) => Ok(CycloScalar::from_rational(parse_rational(s)?)),
            ScalarRecord::Cyclotomic { conductor, coeffs } => {
                if *conductor == 0 {
                    return Err(Error::Parse("conductor must be positive".into()));
                }
                let coeffs = coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
                Ok(CycloScalar::from_poly(*conductor, coeffs))
            }
            ScalarRecord::Complex { .. } => {
                Err(Error::Parse("complex value where an exact scalar was expected".into()))
            }
        }
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Complex64 {
    const DOMAIN: Domain = Domain::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn inv(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Complex64::new(1.0, 0.0) / self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_record(&self) -> ScalarRecord {
        ScalarRecord::Complex { re: self.re, im: self.im }
    }
    fn from_record(record: &ScalarRecord) -> Result<Self> {
        match record {
            ScalarRecord::Complex { re, im } => Ok(Complex64::new(*re, *im)),
            exact => Ok(CycloScalar::from_record(exact)?.to_complex()),
        }
    }
    fn to_text(&self) -> String {
        if self.im == 0.0 {
            float_text(self.re)
        } else {
            let sign = if self.im.is_sign_negative() { "-" } else { "+" };
            format!("({}{sign}{}i)", float_text(self.re), float_text(self.im.abs()))
        }
    }
}

/// Shortest round-trip decimal; exponent notation for very small or large values.
fn float_text(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e16 {
        format!("{v}")
    } else {
        format!("{v:?}")
    }
}
