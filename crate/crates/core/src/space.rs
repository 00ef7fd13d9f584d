//! Polyhedral normed spaces presented by the extreme points of their dual
//! unit ball, plus the Euclidean plane as the single smooth exemplar.
//!
//! A polyhedral space stores `Ext B_{X*}` exactly (deduplicated, reduced to
//! vertices, antipodally symmetric) together with its full face lattice. The
//! norm is `‖x‖ = max_e |⟨x, e⟩|`. Faces `𝔉(x)` of the dual ball are exposed
//! by primal unit vectors; every face of a polytope is exposed, so the
//! enumerated lattice covers every `𝔉(x)`.
//!
//! In finite dimension a face's extreme set is finite and therefore closed,
//! so "Bauer simplexoid" and "simplexoid" coincide and only the latter is
//! tested. Since a face of a simplex is a simplex, checking facets suffices.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{check_dims, Error, Result};
use crate::ratgeom::{self, enumerate_faces, linalg::affine_dim, Vector};
use crate::scalar::{parse_rat, Rat, Scalar};

/// A face `𝔉(x)` of the dual ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Face<S: Scalar = Rat> {
    pub supporting_x: Vector<S>,
    pub extreme_indices: Vec<usize>,
    pub affine_dim: usize,
}

#[derive(Clone, Debug)]
pub struct PolyhedralSpace<S: Scalar = Rat> {
    name: String,
    dim: usize,
    dual_extremes: Vec<Vector<S>>,
    antipodes: Vec<usize>,
    faces: Vec<Face<S>>,
}

impl<S: Scalar> PolyhedralSpace<S> {
    /// Validates and canonicalizes a dual extreme point set.
    pub fn new(points: &[Vector<S>], name: impl Into<String>, allow_symmetrize: bool) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::NotANorm("zero-dimensional".into()));
        }
        check_dims(dim, points)?;
        let mut pts = points.to_vec();
        ratgeom::sort_dedup(&mut pts);
        let missing: Vec<_> = pts
            .iter()
            .filter(|p| !pts.iter().any(|q| q.approx_eq(&p.neg())))
            .cloned()
            .collect();
        if let Some(p) = missing.first() {
            if !allow_symmetrize {
                return Err(Error::Asymmetric(p.to_string()));
            }
            pts.extend(missing.iter().map(Vector::neg));
        }
        let dual_extremes = ratgeom::reduce_to_vertices(&pts)?;
        let raw_faces = enumerate_faces(&dual_extremes).map_err(|e| match e {
            Error::Degenerate => Error::NotANorm("dual ball is not full-dimensional".into()),
            Error::NotUnitBall => Error::NotANorm("origin is not interior".into()),
            other => other,
        })?;
        let antipodes = dual_extremes
            .iter()
            .map(|p| {
                let minus = p.neg();
                dual_extremes
                    .iter()
                    .position(|q| q.approx_eq(&minus))
                    .ok_or_else(|| Error::Internal("antipode lost during reduction".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let faces = raw_faces
            .into_iter()
            .map(|f| Face {
                supporting_x: f.support,
                extreme_indices: f.vertices,
                affine_dim: f.affine_dim,
            })
            .collect();
        Ok(Self {
            name: name.into(),
            dim,
            dual_extremes,
            antipodes,
            faces,
        })
    }

    /// `ℓ∞^n`: dual extremes `±e_i`.
    pub fn linf(n: usize) -> Self {
        let mut pts = Vec::new();
        for i in 0..n {
            pts.push(Vector::unit(n, i));
            pts.push(Vector::unit(n, i).neg());
        }
        Self::new(&pts, format!("linf{n}"), false).expect("linf is a valid norm")
    }

    /// `ℓ1^n`: dual extremes are the `2^n` sign vectors.
    pub fn l1(n: usize) -> Self {
        let pts: Vec<_> = (0..1u32 << n)
            .map(|mask| {
                Vector::new(
                    (0..n)
                        .map(|i| if mask >> i & 1 == 1 { -S::one() } else { S::one() })
                        .collect(),
                )
            })
            .collect();
        Self::new(&pts, format!("l1_{n}"), false).expect("l1 is a valid norm")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dual_extremes(&self) -> &[Vector<S>] {
        &self.dual_extremes
    }

    /// Index of `-e` for the extreme point at `index`.
    pub fn antipode(&self, index: usize) -> usize {
        self.antipodes[index]
    }

    pub fn index_of(&self, point: &Vector<S>) -> Option<usize> {
        self.dual_extremes.iter().position(|e| e.approx_eq(point))
    }

    /// All proper nonempty faces of the dual ball, facets first.
    pub fn faces(&self) -> &[Face<S>] {
        &self.faces
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face<S>> {
        let top = self.dim - 1;
        self.faces.iter().filter(move |f| f.affine_dim == top)
    }

    /// Vertices of the primal unit ball (the facet normals of the dual ball).
    pub fn primal_vertices(&self) -> Vec<Vector<S>> {
        self.facets().map(|f| f.supporting_x.clone()).collect()
    }

    fn check_dim(&self, v: &Vector<S>) -> Result<()> {
        check_dims(self.dim, [v])
    }

    pub fn norm(&self, x: &Vector<S>) -> Result<S> {
        self.check_dim(x)?;
        Ok(self
            .dual_extremes
            .iter()
            .map(|e| x.dot(e).abs_val())
            .fold(S::zero(), |m, v| if v > m { v } else { m }))
    }

    /// Dual norm via the primal ball vertices: `‖f‖ = max_z ⟨z, f⟩`.
    pub fn dual_norm(&self, f: &Vector<S>) -> Result<S> {
        self.check_dim(f)?;
        Ok(self
            .facets()
            .map(|face| face.supporting_x.dot(f).abs_val())
            .fold(S::zero(), |m, v| if v > m { v } else { m }))
    }

    /// `𝔉(x)` for a unit vector `x`.
    pub fn face_of(&self, x: &Vector<S>) -> Result<Face<S>> {
        let n = self.norm(x)?;
        if !n.approx_eq(&S::one()) {
            return Err(Error::Precondition(format!(
                "face_of needs a unit vector, got norm {}",
                n.format()
            )));
        }
        let extreme_indices: Vec<usize> = self
            .dual_extremes
            .iter()
            .enumerate()
            .filter(|(_, e)| x.dot(e).approx_eq(&S::one()))
            .map(|(i, _)| i)
            .collect();
        let pts: Vec<_> = extreme_indices
            .iter()
            .map(|&i| self.dual_extremes[i].clone())
            .collect();
        Ok(Face {
            supporting_x: x.clone(),
            affine_dim: affine_dim(&pts),
            extreme_indices,
        })
    }

    /// Affine dimension of the subdifferential at `x`; 0 means Gâteaux smooth.
    pub fn almost_gateaux_order(&self, x: &Vector<S>) -> Result<usize> {
        Ok(self.face_of(x)?.affine_dim)
    }

    pub fn gateaux(&self) -> GateauxVerdict<S> {
        if self.dim == 1 {
            return GateauxVerdict {
                smooth: true,
                witness: None,
            };
        }
        // lexicographically largest facet normal
        let witness = self
            .facets()
            .map(|f| f.supporting_x.clone())
            .max_by(|a, b| a.lex_cmp(b));
        GateauxVerdict {
            smooth: false,
            witness,
        }
    }

    pub fn simplexoid(&self) -> Result<SimplexoidVerdict<S>> {
        for facet in self.facets() {
            let pts: Vec<_> = facet
                .extreme_indices
                .iter()
                .map(|&i| self.dual_extremes[i].clone())
                .collect();
            if !ratgeom::is_affinely_independent(&pts)? {
                return Ok(SimplexoidVerdict {
                    simplexoid: false,
                    offending: Some(facet.clone()),
                });
            }
        }
        Ok(SimplexoidVerdict {
            simplexoid: true,
            offending: None,
        })
    }

    /// A finite extreme set with at least two points is never connected.
    pub fn extreme_sphere_connected(&self) -> bool {
        self.dual_extremes.len() < 2
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct GateauxVerdict<S: Scalar = Rat> {
    pub smooth: bool,
    /// A unit vector where the norm is not Gâteaux differentiable.
    pub witness: Option<Vector<S>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SimplexoidVerdict<S: Scalar = Rat> {
    pub simplexoid: bool,
    pub offending: Option<Face<S>>,
}

/// The Euclidean plane, `‖(a, b)‖ = (a² + b²)^{1/2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SmoothSpace2D;

impl SmoothSpace2D {
    pub const DIM: usize = 2;

    pub fn norm(&self, x: [f64; 2]) -> f64 {
        x[0].hypot(x[1])
    }

    pub fn is_gateaux_smooth(&self) -> bool {
        true
    }

    /// Every unit functional is extreme: the extreme set is the whole circle.
    pub fn extreme_sphere_connected(&self) -> bool {
        true
    }
}

/// Any space the toolkit can load.
#[derive(Clone, Debug)]
pub enum NormedSpace {
    Exact(PolyhedralSpace<Rat>),
    /// Polyhedral data with irrational (float-approximated) coordinates.
    Float(PolyhedralSpace<f64>),
    Euclidean2D(SmoothSpace2D),
}

impl NormedSpace {
    pub fn name(&self) -> &str {
        match self {
            Self::Exact(s) => s.name(),
            Self::Float(s) => s.name(),
            Self::Euclidean2D(_) => "euclidean2d",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Exact(s) => s.dim(),
            Self::Float(s) => s.dim(),
            Self::Euclidean2D(_) => SmoothSpace2D::DIM,
        }
    }

    pub fn is_gateaux_smooth(&self) -> bool {
        match self {
            Self::Exact(s) => s.gateaux().smooth,
            Self::Float(s) => s.gateaux().smooth,
            Self::Euclidean2D(s) => s.is_gateaux_smooth(),
        }
    }

    pub fn extreme_sphere_connected(&self) -> bool {
        match self {
            Self::Exact(s) => s.extreme_sphere_connected(),
            Self::Float(s) => s.extreme_sphere_connected(),
            Self::Euclidean2D(s) => s.extreme_sphere_connected(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let def: SpaceDef =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        def.build()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Polyhedral,
    Euclidean2d,
}

/// On-disk space definition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceDef {
    pub name: String,
    pub dim: usize,
    pub representation: Representation,
    #[serde(default)]
    pub dual_extreme_points: Vec<Vec<Value>>,
    #[serde(default)]
    pub allow_symmetrize: bool,
}

fn coord_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("coordinate must be a string or number, got {other}"))),
    }
}

impl SpaceDef {
    pub fn build(&self) -> Result<NormedSpace> {
        match self.representation {
            Representation::Euclidean2d => {
                if self.dim != SmoothSpace2D::DIM {
                    return Err(Error::Validation("euclidean2d must have dim 2".into()));
                }
                Ok(NormedSpace::Euclidean2D(SmoothSpace2D))
            }
            Representation::Polyhedral => {
                let texts = self
                    .dual_extreme_points
                    .iter()
                    .map(|p| p.iter().map(coord_text).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                for p in &texts {
                    if p.len() != self.dim {
                        return Err(Error::DimensionMismatch {
                            expected: self.dim,
                            found: p.len(),
                        });
                    }
                }
                let exact: Option<Vec<Vector<Rat>>> = texts
                    .iter()
                    .map(|p| p.iter().map(|c| parse_rat(c)).collect::<Option<Vec<_>>>().map(Vector::new))
                    .collect();
                match exact {
                    Some(points) => Ok(NormedSpace::Exact(PolyhedralSpace::new(
                        &points,
                        &self.name,
                        self.allow_symmetrize,
                    )?)),
                    None => {
                        let points = texts
                            .iter()
                            .map(|p| {
                                p.iter()
                                    .map(|c| {
                                        <f64 as Scalar>::parse(c)
                                            .ok_or_else(|| Error::Parse(format!("bad coordinate {c:?}")))
                                    })
                                    .collect::<Result<Vec<_>>>()
                                    .map(Vector::new)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(NormedSpace::Float(PolyhedralSpace::new(
                            &points,
                            &self.name,
                            self.allow_symmetrize,
                        )?))
                    }
                }
            }
        }
    }
}
