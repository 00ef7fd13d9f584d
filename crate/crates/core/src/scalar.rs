//! Number types the geometry and LP code is generic over.
//!
//! Two implementations exist: [`Rat`] (arbitrary precision rationals, every
//! comparison exact) and `f64` (every comparison relaxed by [`TAU`]). All
//! uniqueness verdicts on the rational path are exact; on the float path they
//! are evidence only.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Comparison tolerance of the float path.
pub const TAU: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// `true` when comparisons are exact.
    const EXACT: bool;

    fn from_frac(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    fn to_f64(&self) -> f64;

    /// Zero test; exact for rationals, `|x| <= TAU` for floats.
    fn is_negligible(&self) -> bool;

    fn abs_val(&self) -> Self;

    /// `self -= a * b`, the inner step of every elimination.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);

    fn div_ref(&self, other: &Self) -> Self;

    fn mul_ref(&self, other: &Self) -> Self;

    /// Canonical text form (`"p/q"`, `"p"`, or a shortest float literal).
    fn format(&self) -> String;

    fn parse(text: &str) -> Option<Self>;

    fn signum_tol(&self) -> Ordering {
        if self.is_negligible() {
            Ordering::Equal
        } else if *self > Self::zero() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn cmp_tol(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_tol()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    fn is_pos(&self) -> bool {
        self.signum_tol() == Ordering::Greater
    }

    fn is_neg(&self) -> bool {
        self.signum_tol() == Ordering::Less
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_frac(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn format(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse(text: &str) -> Option<Self> {
        parse_rat(text)
    }

    fn cmp_tol(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= TAU
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn format(&self) -> String {
        if *self == 0.0 {
            // avoid "-0"
            "0".to_string()
        } else {
            format!("{self}")
        }
    }

    fn parse(text: &str) -> Option<Self> {
        if let Some(r) = parse_rat(text) {
            return Some(Scalar::to_f64(&r));
        }
        f64::from_str(text.trim()).ok().filter(|v| v.is_finite())
    }
}

/// Serializes a scalar as its canonical text form.
pub fn serialize_text<S: Scalar, Ser: serde::Serializer>(x: &S, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
    serializer.serialize_str(&x.format())
}

pub fn serialize_indexed_text<S: Scalar, Ser: serde::Serializer>(
    items: &[(usize, S)],
    serializer: Ser,
) -> Result<Ser::Ok, Ser::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(items.len()))?;
    for (i, x) in items {
        seq.serialize_element(&(i, x.format()))?;
    }
    seq.end()
}

/// Parses `"p/q"` or `"p"` with integer `p`, nonzero integer `q`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => BigInt::from_str(text).ok().map(Rat::from_integer),
    }
}

/// Shorthand for building exact rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::from_frac(num, den)
}
