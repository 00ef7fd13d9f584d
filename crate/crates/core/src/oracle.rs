//! Brute-force reference computations for tests. Nothing here shares code
//! with the simplex solver: vertices of `{y ≥ 0 : M y = b}` are found by
//! solving every column subset exactly.

use itertools::Itertools;

use crate::ratgeom::Vector;
use crate::scalar::Rat;
use crate::space::PolyhedralSpace;
use num_traits::{One, Signed, Zero};

/// Unique solution of `M_B y = b` for the columns `cols`, if the columns are
/// independent and the system is consistent.
fn solve_columns(m: &[Vec<Rat>], b: &[Rat], cols: &[usize]) -> Option<Vec<Rat>> {
    let rows = m.len();
    let r = cols.len();
    let mut aug: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|&j| m[i][j].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..r {
        let found = (pivot_row..rows).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(pivot_row, found);
        let p = aug[pivot_row][col].clone();
        for v in aug[pivot_row].iter_mut() {
            *v = &*v / &p;
        }
        for i in 0..rows {
            if i != pivot_row && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=r {
                    let t = &f * &aug[pivot_row][j];
                    aug[i][j] = &aug[i][j] - t;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    Some((0..r).map(|i| aug[i][r].clone()).collect())
}

/// All vertices of the bounded polyhedron `{y ≥ 0 : M y = b}`, sorted.
pub fn vertices(m: &[Vec<Rat>], b: &[Rat], num_vars: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    if b.iter().all(Zero::is_zero) {
        out.push(vec![Rat::zero(); num_vars]);
    }
    for size in 1..=m.len().min(num_vars) {
        for cols in (0..num_vars).combinations(size) {
            let Some(y) = solve_columns(m, b, &cols) else {
                continue;
            };
            if y.iter().any(Signed::is_negative) {
                continue;
            }
            let mut full = vec![Rat::zero(); num_vars];
            for (&j, v) in cols.iter().zip(y) {
                full[j] = v;
            }
            out.push(full);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `min c·y` over `{y ≥ 0 : M y = b}`, assumed bounded and nonempty unless
/// no vertex exists. Returns the value and every optimal vertex.
pub fn brute_force_lp(m: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Option<(Rat, Vec<Vec<Rat>>)> {
    let verts = vertices(m, b, c.len());
    let value = |y: &Vec<Rat>| y.iter().zip(c).map(|(a, b)| a * b).sum::<Rat>();
    let best = verts.iter().map(value).min()?;
    let optimal = verts.into_iter().filter(|y| value(y) == best).collect();
    Some((best, optimal))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HbOracle {
    /// Dual norm of the functional, from the primal ball vertices.
    pub norm: Rat,
    /// Distinct extensions `μ = μ⁺ − μ⁻` at the vertices of the extension
    /// polytope, sorted.
    pub vertex_extensions: Vec<Vec<Rat>>,
}

impl HbOracle {
    pub fn unique(&self) -> bool {
        self.vertex_extensions.len() == 1
    }
}

/// Vertices of `{μ± ≥ 0 : Σ_k (μ⁺_k − μ⁻_k) k = x*, Σ (μ⁺_k + μ⁻_k) = ‖x*‖}`.
/// The extension set is a polytope, so it is a point iff it has one vertex.
pub fn hb_oracle(space: &PolyhedralSpace, index_points: &[Vector<Rat>], xstar: &Vector<Rat>) -> HbOracle {
    let norm = space
        .primal_vertices()
        .iter()
        .map(|x| x.dot(xstar))
        .max()
        .expect("nonempty ball");
    let k = index_points.len();
    let d = xstar.dim();
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|axis| {
            index_points
                .iter()
                .map(|p| p[axis].clone())
                .chain(index_points.iter().map(|p| -p[axis].clone()))
                .collect()
        })
        .collect();
    m.push(vec![Rat::one(); 2 * k]);
    let mut b: Vec<Rat> = xstar.coords().to_vec();
    b.push(norm.clone());
    let mut vertex_extensions: Vec<Vec<Rat>> = vertices(&m, &b, 2 * k)
        .into_iter()
        .map(|y| (0..k).map(|i| &y[i] - &y[k + i]).collect())
        .collect();
    vertex_extensions.sort();
    vertex_extensions.dedup();
    HbOracle {
        norm,
        vertex_extensions,
    }
}
