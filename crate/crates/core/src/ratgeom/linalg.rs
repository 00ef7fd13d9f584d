//! Dense Gaussian elimination over a [`Scalar`].

use crate::scalar::Scalar;

use super::Vector;

/// Reduces `rows` to row echelon form in place and returns the pivot columns.
fn echelon<S: Scalar>(rows: &mut [Vec<S>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // exact: first nonzero; float: largest magnitude
        let pick = if S::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_negligible())
        } else {
            (r..rows.len())
                .filter(|&i| !rows[i][c].is_negligible())
                .max_by(|&a, &b| {
                    rows[a][c]
                        .abs_val()
                        .partial_cmp(&rows[b][c].abs_val())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_negligible() {
                continue;
            }
            let factor = rows[i][c].div_ref(&pivot);
            let (head, tail) = rows.split_at_mut(i);
            let src = &head[r];
            for (dst, s) in tail[0][c..].iter_mut().zip(&src[c..]) {
                dst.sub_mul_assign(&factor, s);
            }
            tail[0][c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(vectors: &[Vector<S>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let cols = first.dim();
    let mut rows: Vec<Vec<S>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    echelon(&mut rows, cols).len()
}

/// Solves `A x = b` for square or tall `A` given as rows. Returns `None` when
/// the solution is not unique or does not exist.
pub fn solve_unique<S: Scalar>(rows: &[Vector<S>], rhs: &[S]) -> Option<Vector<S>> {
    let n = rows.first()?.dim();
    let mut aug: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.coords().to_vec();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = echelon(&mut aug, n + 1);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    // back substitution
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = aug[r][n].clone();
        for c in r + 1..n {
            acc.sub_mul_assign(&aug[r][c], &x[c]);
        }
        x[r] = acc.div_ref(&aug[r][r]);
    }
    Some(Vector::new(x))
}

/// Affine rank of a point set: rank of the differences from the first point.
pub fn affine_dim<S: Scalar>(points: &[Vector<S>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<_> = points[1..].iter().map(|p| p.sub(first)).collect();
    rank(&diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn rank_of_dependent_rows() {
        let v = |a: &[i64]| Vector::<Rat>::from_ints(a);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(rank(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0])]), 2);
        assert_eq!(rank::<Rat>(&[]), 0);
    }

    #[test]
    fn solve_two_by_two() {
        let rows = vec![Vector::<Rat>::from_ints(&[1, 1]), Vector::from_ints(&[1, -1])];
        let x = solve_unique(&rows, &[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(x, Vector::new(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn solve_reports_singular_and_inconsistent() {
        let rows = vec![Vector::<Rat>::from_ints(&[1, 1]), Vector::from_ints(&[2, 2])];
        assert!(solve_unique(&rows, &[rat(1, 1), rat(2, 1)]).is_none());
        let tall = vec![
            Vector::<Rat>::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
            Vector::from_ints(&[1, 1]),
        ];
        assert!(solve_unique(&tall, &[rat(1, 1), rat(1, 1), rat(3, 1)]).is_none());
        assert!(solve_unique(&tall, &[rat(1, 1), rat(1, 1), rat(2, 1)]).is_some());
    }

    #[test]
    fn float_rank() {
        let rows = vec![Vector::new(vec![1.0, 2.0]), Vector::new(vec![2.0, 4.0 + 1e-12])];
        assert_eq!(rank(&rows), 1);
    }
}
