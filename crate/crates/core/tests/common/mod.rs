#![allow(dead_code)]

use proptest::prelude::*;
use uembed::space::PolyhedralSpace;
use uembed::{Rat, Scalar, Vector};

pub fn v(a: &[i64]) -> Vector<Rat> {
    Vector::from_ints(a)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::from_frac(n, d)
}

pub fn rational_point(dim: usize, span: i64) -> impl Strategy<Value = Vector<Rat>> {
    prop::collection::vec((-span..=span, 1i64..=4), dim)
        .prop_map(|c| Vector::new(c.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

/// Symmetric polytopes in dimension `dim` from `half` random integer points
/// and their negatives; inputs that do not span the space are filtered out.
pub fn symmetric_space(dim: usize, half: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PolyhedralSpace> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), half)
        .prop_filter_map("not a unit ball", move |pts| {
            let pts: Vec<Vector<Rat>> = pts.iter().map(|p| v(p)).filter(|p| !p.is_zero()).collect();
            if pts.is_empty() {
                return None;
            }
            PolyhedralSpace::new(&pts, "random", true).ok()
        })
}

/// Rational points on the unit circle, `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`, at
/// `m` parameters approximating equally spaced angles in `[0, π)`.
pub fn disk_polygon(m: usize) -> PolyhedralSpace {
    let pts: Vec<Vector<Rat>> = (0..m)
        .map(|j| {
            let angle = std::f64::consts::PI * j as f64 / m as f64;
            let t = rat(((angle / 2.0).tan() * 1000.0).round() as i64, 1000);
            let one = Rat::from_int(1);
            let den = &one + &t * &t;
            Vector::new(vec![(&one - &t * &t) / &den, (Rat::from_int(2) * &t) / &den])
        })
        .collect();
    PolyhedralSpace::new(&pts, format!("disk{}", 2 * m), true).unwrap()
}

pub fn exact_corpus() -> Vec<PolyhedralSpace> {
    ["linf2", "linf3", "l1_2", "l1_3", "hexagon"]
        .iter()
        .map(|n| uembed::corpus::exact(n).unwrap())
        .collect()
}
