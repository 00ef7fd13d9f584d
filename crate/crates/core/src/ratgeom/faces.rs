//! Face enumeration for a full-dimensional polytope with the origin inside.
//!
//! Facets come from exact hyperplane solves through `d`-subsets of vertices;
//! every lower face is an intersection of facets, so the lattice is closed
//! under intersection starting from the facets. A face is reported with a
//! supporting vector `z` such that `max ⟨z, v⟩ = 1` and the vertices at level
//! one are exactly the face's vertices.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::scalar::Scalar;

use super::hull::origin_in_relative_interior;
use super::linalg::{affine_dim, solve_unique};
use super::Vector;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct FaceDescriptor<S: Scalar> {
    /// Primal vector with `⟨support, v⟩ = 1` exactly on the face.
    pub support: Vector<S>,
    /// Indices into the vertex list, ascending.
    pub vertices: Vec<usize>,
    pub affine_dim: usize,
}

/// Facets first (largest affine dimension), then lower faces; ties by vertex
/// index lists.
pub fn enumerate_faces<S: Scalar>(vertices: &[Vector<S>]) -> Result<Vec<FaceDescriptor<S>>> {
    let first = vertices.first().ok_or(Error::EmptyInput)?;
    let d = first.dim();
    check_dims(d, vertices)?;
    if affine_dim(vertices) < d {
        return Err(Error::Degenerate);
    }
    if !origin_in_relative_interior(vertices)? {
        return Err(Error::NotUnitBall);
    }

    let facets = facets(vertices, d);
    let facet_sets: Vec<BTreeSet<usize>> = facets
        .iter()
        .map(|(_, vs)| vs.iter().copied().collect())
        .collect();

    // close under intersection
    let mut seen: BTreeSet<Vec<usize>> = facets.iter().map(|(_, vs)| vs.clone()).collect();
    let mut frontier: Vec<BTreeSet<usize>> = facet_sets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for face in &frontier {
            for facet in &facet_sets {
                let meet: BTreeSet<usize> = face.intersection(facet).copied().collect();
                if meet.is_empty() || meet.len() == face.len() {
                    continue;
                }
                let key: Vec<usize> = meet.iter().copied().collect();
                if seen.insert(key) {
                    next.push(meet);
                }
            }
        }
        frontier = next;
    }

    let mut out = Vec::with_capacity(seen.len());
    for vs in seen {
        let containing: Vec<&Vector<S>> = facets
            .iter()
            .filter(|(_, fv)| vs.iter().all(|i| fv.binary_search(i).is_ok()))
            .map(|(z, _)| z)
            .collect();
        let sum = containing
            .iter()
            .fold(Vector::zeros(d), |acc, z| acc.add(z));
        let support = sum.scale(&(S::one() / S::from_int(containing.len() as i64)));
        let pts: Vec<_> = vs.iter().map(|&i| vertices[i].clone()).collect();
        out.push(FaceDescriptor {
            support,
            affine_dim: affine_dim(&pts),
            vertices: vs,
        });
    }
    out.sort_by(|a, b| {
        b.affine_dim
            .cmp(&a.affine_dim)
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(out)
}

/// Facet normals `z` (with `max ⟨z, v⟩ = 1`) and their vertex index lists.
fn facets<S: Scalar>(vertices: &[Vector<S>], d: usize) -> Vec<(Vector<S>, Vec<usize>)> {
    let ones = vec![S::one(); d];
    let mut found: BTreeMap<Vec<usize>, Vector<S>> = BTreeMap::new();
    let mut covered: Vec<BTreeSet<usize>> = Vec::new();
    for combo in (0..vertices.len()).combinations(d) {
        if covered
            .iter()
            .any(|f| combo.iter().all(|i| f.contains(i)))
        {
            continue;
        }
        let rows: Vec<_> = combo.iter().map(|&i| vertices[i].clone()).collect();
        let Some(z) = solve_unique(&rows, &ones) else {
            continue;
        };
        let mut on = Vec::new();
        let mut valid = true;
        for (i, v) in vertices.iter().enumerate() {
            match z.dot(v).cmp_tol(&S::one()) {
                std::cmp::Ordering::Greater => {
                    valid = false;
                    break;
                }
                std::cmp::Ordering::Equal => on.push(i),
                std::cmp::Ordering::Less => {}
            }
        }
        if valid {
            covered.push(on.iter().copied().collect());
            found.entry(on).or_insert(z);
        }
    }
    found.into_iter().map(|(vs, z)| (z, vs)).collect()
}
