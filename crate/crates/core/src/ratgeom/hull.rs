use crate::error::{check_dims, Error, Result};
use crate::scalar::Scalar;

use super::linalg::affine_dim;
use super::lp::{solve_lp, Bound, LpProblem, Sense};
use super::vector::sort_dedup;
use super::Vector;

/// `true` iff `target` is a convex combination of `points` (LP feasibility).
pub fn in_convex_hull<S: Scalar>(target: &Vector<S>, points: &[Vector<S>]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let d = target.dim();
    check_dims(d, points)?;
    let mut lp = LpProblem::feasibility(points.len());
    for axis in 0..d {
        let row = Vector::new(points.iter().map(|p| p[axis].clone()).collect());
        lp.add_row(row, target[axis].clone());
    }
    lp.add_row(Vector::new(vec![S::one(); points.len()]), S::one());
    Ok(solve_lp(&lp)?.is_optimal())
}

/// Keeps exactly the extreme points of the hull, in lexicographic order.
pub fn reduce_to_vertices<S: Scalar>(points: &[Vector<S>]) -> Result<Vec<Vector<S>>> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    check_dims(first.dim(), points)?;
    let mut pts = points.to_vec();
    sort_dedup(&mut pts);
    let mut kept = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<_> = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !in_convex_hull(p, &others)? {
            kept.push(p.clone());
        }
    }
    Ok(kept)
}

pub fn is_affinely_independent<S: Scalar>(points: &[Vector<S>]) -> Result<bool> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    check_dims(first.dim(), points)?;
    Ok(affine_dim(points) + 1 == points.len())
}

/// `true` iff the origin is a strictly positive convex combination of all
/// points, i.e. lies in the relative interior of their hull.
///
/// Solved as `max t` over `λ_v = t + s_v`, `s ≥ 0`, `Σλ_v v = 0`, `Σλ_v = 1`.
pub fn origin_in_relative_interior<S: Scalar>(points: &[Vector<S>]) -> Result<bool> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let d = first.dim();
    check_dims(d, points)?;
    let n = points.len();
    // variables: s_0..s_{n-1}, t
    let mut objective = vec![S::zero(); n + 1];
    objective[n] = S::one();
    let objective = Vector::new(objective);
    let mut bounds = vec![Bound::nonneg(); n];
    bounds.push(Bound::free());
    let mut lp = LpProblem::new(objective, Sense::Maximize).with_bounds(bounds);
    for axis in 0..d {
        let mut row: Vec<S> = points.iter().map(|p| p[axis].clone()).collect();
        let total = row.iter().fold(S::zero(), |acc, c| acc + c.clone());
        row.push(total);
        lp.add_row(Vector::new(row), S::zero());
    }
    let mut sum_row = vec![S::one(); n];
    sum_row.push(S::from_int(n as i64));
    lp.add_row(Vector::new(sum_row), S::one());
    let sol = solve_lp(&lp)?;
    Ok(sol.is_optimal() && sol.value.is_pos())
}
