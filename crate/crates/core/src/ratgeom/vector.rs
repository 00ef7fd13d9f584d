use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{Rat, Scalar};

/// A point of `X` or a functional of `X*`, depending on context.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S = Rat> {
    coords: Vec<S>,
}

pub type RatVector = Vector<Rat>;

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[axis] = S::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| S::from_int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = S::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc + a.mul_ref(b);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::new(self.coords.iter().map(|a| a.mul_ref(factor)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a.clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(S::is_negligible)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Lexicographic order under the scalar's comparison.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.cmp_tol(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }

    /// Sum of absolute values.
    pub fn l1(&self) -> S {
        self.coords
            .iter()
            .fold(S::zero(), |acc, c| acc + c.abs_val())
    }

    /// Number of non-negligible coordinates.
    pub fn support_size(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_negligible()).count()
    }

    pub fn centroid(points: &[Self]) -> Self {
        let dim = points.first().map_or(0, Vector::dim);
        let sum = points.iter().fold(Self::zeros(dim), |acc, p| acc.add(p));
        sum.scale(&(S::one() / S::from_int(points.len() as i64)))
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector::new(self.coords.iter().map(Scalar::to_f64).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(Scalar::format).collect()
    }

    /// Parses a comma-separated list such as `"1,-1/2"`.
    pub fn parse_list(text: &str) -> Option<Self> {
        text.split(',')
            .map(|c| S::parse(c))
            .collect::<Option<Vec<_>>>()
            .filter(|c| !c.is_empty())
            .map(Self::new)
    }
}

impl<S> std::ops::Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl<S: Scalar> Serialize for Vector<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Vector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.iter()
            .map(|c| S::parse(c).ok_or_else(|| D::Error::custom(format!("bad number {c:?}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

/// Sorts lexicographically and removes duplicates.
pub fn sort_dedup<S: Scalar>(points: &mut Vec<Vector<S>>) {
    points.sort_by(|a, b| a.lex_cmp(b));
    points.dedup_by(|a, b| a.approx_eq(b));
}
