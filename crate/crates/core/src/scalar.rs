//! The two scalar backends shared by every exact/numeric computation.
//!
//! Exact identities run over [`Rational`] (arbitrary precision); quadrature and
//! anything involving square roots runs over `f64`. Values of the two kinds are
//! never mixed implicitly: every container is generic over a single [`Scalar`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Double,
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// Equality used by contracts: exact for rationals, `|a - b| <= tol` for doubles.
    fn near(&self, other: &Self, tol: f64) -> bool;

    /// Text form: rationals as `num/den`, doubles in shortest round-trip notation.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Option<Self>;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Double;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_text(&self) -> String {
        format!("{self:?}")
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().ok()?;
                let d: f64 = d.trim().parse().ok()?;
                (d != 0.0).then(|| n / d)
            }
            None => s.parse().ok(),
        }
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // numer/denom can individually overflow f64 even when the ratio is tame
        match (ToPrimitive::to_f64(self.numer()), ToPrimitive::to_f64(self.denom())) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.numer().bits().max(self.denom().bits()) as i64 - 900;
                let scale = BigInt::one() << shift.max(0) as usize;
                let n = ToPrimitive::to_f64(&(self.numer() / &scale)).unwrap_or(0.0);
                let d = ToPrimitive::to_f64(&(self.denom() / &scale)).unwrap_or(1.0);
                n / d
            }
        }
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                (!d.is_zero()).then(|| Rational::new(n, d))
            }
            None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        }
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Absolute value through the `f64` image; adequate for pivoting decisions.
pub(crate) fn magnitude<T: Scalar>(x: &T) -> f64 {
    x.to_f64().abs()
}
