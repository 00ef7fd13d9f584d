//! U-suitable sets: half-selections `E` of the dual extreme points.
//!
//! Conditions checked on an index set `E ⊆ Ext B_{X*}`:
//!
//! * (i)   `E ∩ (−E) = ∅` (every point here lies on the dual sphere);
//! * (ii)  `E ∪ (−E) = Ext B_{X*}`;
//! * (iii) for every proper face `F` of the dual ball, `E ∩ F = E ∩ Ext F`.
//!
//! Because `E` only contains extreme points of the ball and the extreme
//! points of a face are the ball's extreme points lying in it, (iii) holds
//! for every such `E`. It is still evaluated independently: `E ∩ F` by the
//! level-one test `⟨x, e⟩ = 1`, and `Ext F` by vertex reduction of the face.
//!
//! Construction uses a selector `z` with `⟨z, e⟩ ≠ 0` on all extremes and
//! takes `E = {e : ⟨z, e⟩ > 0}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratgeom::{reduce_to_vertices, Vector};
use crate::scalar::{Rat, Scalar};
use crate::space::{NormedSpace, PolyhedralSpace};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuitabilityChecks {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
}

impl SuitabilityChecks {
    pub fn suitable(&self) -> bool {
        self.cond_i && self.cond_ii
    }

    pub fn proper(&self) -> bool {
        self.suitable() && self.cond_iii
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct USuitableSet<S: Scalar = Rat> {
    /// Ascending indices into the space's dual extremes.
    pub indices: Vec<usize>,
    pub selector: Option<Vector<S>>,
    pub checks: SuitabilityChecks,
}

impl<S: Scalar> USuitableSet<S> {
    pub fn points(&self, space: &PolyhedralSpace<S>) -> Vec<Vector<S>> {
        self.indices
            .iter()
            .map(|&i| space.dual_extremes()[i].clone())
            .collect()
    }

    pub fn report(&self) -> SuitabilityReport<S> {
        SuitabilityReport {
            e: self.indices.clone(),
            z: self.selector.clone(),
            cond_i: self.checks.cond_i,
            cond_ii: self.checks.cond_ii,
            cond_iii: self.checks.cond_iii,
            proper: self.checks.proper(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SuitabilityReport<S: Scalar = Rat> {
    #[serde(rename = "E")]
    pub e: Vec<usize>,
    pub z: Option<Vector<S>>,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub proper: bool,
}

fn annihilates<S: Scalar>(space: &PolyhedralSpace<S>, z: &Vector<S>) -> bool {
    space.dual_extremes().iter().any(|e| z.dot(e).is_negligible())
}

/// Walks the moment curve `(1, q, q², …)` for `q = 1, 1/2, 1/3, …` until no
/// extreme point annihilates the candidate. Each hyperplane `⟨·, e⟩ = 0`
/// meets the curve in at most `dim − 1` points, so at most
/// `|Ext| · (dim − 1)` candidates fail.
pub fn find_selector<S: Scalar>(space: &PolyhedralSpace<S>) -> Vector<S> {
    let d = space.dim();
    let mut t: i64 = 1;
    loop {
        let q = S::from_frac(1, t);
        let mut coords = Vec::with_capacity(d);
        let mut power = S::one();
        for _ in 0..d {
            coords.push(power.clone());
            power = power.mul_ref(&q);
        }
        let z = Vector::new(coords);
        if !annihilates(space, &z) {
            return z;
        }
        t += 1;
    }
}

pub fn build_u_suitable<S: Scalar>(
    space: &PolyhedralSpace<S>,
    selector: Option<Vector<S>>,
) -> Result<USuitableSet<S>> {
    let z = match selector {
        Some(z) => {
            crate::error::check_dims(space.dim(), [&z])?;
            if annihilates(space, &z) {
                return Err(Error::Selector(z.to_string()));
            }
            z
        }
        None => find_selector(space),
    };
    let indices: Vec<usize> = space
        .dual_extremes()
        .iter()
        .enumerate()
        .filter(|(_, e)| z.dot(e).is_pos())
        .map(|(i, _)| i)
        .collect();
    let checks = verify_u_suitable(space, &indices)?;
    Ok(USuitableSet {
        indices,
        selector: Some(z),
        checks,
    })
}

/// Evaluates (i)–(iii) for an arbitrary index set.
pub fn verify_u_suitable<S: Scalar>(
    space: &PolyhedralSpace<S>,
    indices: &[usize],
) -> Result<SuitabilityChecks> {
    let n = space.dual_extremes().len();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    let mut in_e = vec![false; n];
    for &i in indices {
        in_e[i] = true;
    }
    let cond_i = (0..n).all(|i| !(in_e[i] && in_e[space.antipode(i)]));
    let cond_ii = (0..n).all(|i| in_e[i] || in_e[space.antipode(i)]);

    let extremes = space.dual_extremes();
    let mut cond_iii = true;
    for face in space.faces() {
        let x = &face.supporting_x;
        let e_cap_face: Vec<usize> = (0..n)
            .filter(|&i| in_e[i] && x.dot(&extremes[i]).approx_eq(&S::one()))
            .collect();
        let level_set: Vec<Vector<S>> = extremes
            .iter()
            .filter(|e| x.dot(e).approx_eq(&S::one()))
            .cloned()
            .collect();
        let face_ext = reduce_to_vertices(&level_set)?;
        let e_cap_ext: Vec<usize> = (0..n)
            .filter(|&i| in_e[i] && face_ext.iter().any(|v| v.approx_eq(&extremes[i])))
            .collect();
        if e_cap_face != e_cap_ext {
            cond_iii = false;
            break;
        }
    }
    Ok(SuitabilityChecks {
        cond_i,
        cond_ii,
        cond_iii,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub space: String,
    pub obstruction: String,
    pub gateaux_smooth: bool,
    pub extreme_sphere_connected: bool,
    pub u_embeddable: bool,
    pub reason: String,
}

/// For the smooth plane: the extreme set of the dual ball is the whole unit
/// circle, which is connected, so no closed `E` splits it as `E ⊔ (−E)`.
pub fn prove_no_u_suitable(space: &NormedSpace) -> Result<ObstructionReport> {
    match space {
        NormedSpace::Euclidean2D(s) => Ok(ObstructionReport {
            space: space.name().to_string(),
            obstruction: "connected extreme sphere".into(),
            gateaux_smooth: s.is_gateaux_smooth(),
            extreme_sphere_connected: s.extreme_sphere_connected(),
            u_embeddable: false,
            reason: "the norm is Gâteaux smooth, so every unit functional is extreme; \
                     the unit circle is connected and cannot be written as a disjoint \
                     union of two nonempty closed antipodal halves"
                .into(),
        }),
        other => Err(Error::WrongType(format!(
            "{} is polyhedral; no smoothness obstruction applies",
            other.name()
        ))),
    }
}
