//! Finite embeddings `T : X → C(K)` with `K` a finite subset of `B_{X*}`,
//! Hahn–Banach extension polytopes and uniqueness certificates.
//!
//! An embedding is stored as its index points: `(T x)(k) = ⟨x, k⟩`. Its
//! adjoint sends a signed weight vector `μ` on `K` to `Σ μ_k k ∈ X*`. The
//! norm-preserving extensions of `x*` are the minimizers of `Σ |μ_k|` subject
//! to `T* μ = x*`; that LP is solved with split variables `μ = μ⁺ − μ⁻`, which
//! also exposes the Jordan decomposition of each extension.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::ratgeom::{optimal_face_is_singleton, solve_lp, Bound, LpProblem, Sense, Vector};
use crate::scalar::{Rat, Scalar};
use crate::space::{Face, PolyhedralSpace};
use crate::usuit::{verify_u_suitable, USuitableSet};

/// Number of random sphere points used to spot-check isometry at build time.
pub const ISOMETRY_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingKind {
    /// `u_E` for a U-suitable set `E`.
    #[serde(rename = "canonical-uE")]
    CanonicalUe,
    /// Any other finite `T_F`.
    #[serde(rename = "general-TF")]
    GeneralTf,
}

#[derive(Clone, Debug)]
pub struct FiniteEmbedding<S: Scalar = Rat> {
    space: Arc<PolyhedralSpace<S>>,
    index_points: Vec<Vector<S>>,
    kind: EmbeddingKind,
    e_indices: Option<Vec<usize>>,
}

impl<S: Scalar> FiniteEmbedding<S> {
    /// `u_E : X → C(E)`; needs `E ∩ (−E) = ∅` and `E ∪ (−E) ⊇ Ext B_{X*}`.
    pub fn build_ue(space: &PolyhedralSpace<S>, e: &USuitableSet<S>) -> Result<Self> {
        let checks = verify_u_suitable(space, &e.indices)?;
        if !checks.cond_ii {
            return Err(Error::NotIsometric(
                "E ∪ (−E) does not cover the dual extreme points".into(),
            ));
        }
        if !checks.cond_i {
            return Err(Error::Precondition("E contains an antipodal pair".into()));
        }
        let emb = Self {
            space: Arc::new(space.clone()),
            index_points: e.points(space),
            kind: EmbeddingKind::CanonicalUe,
            e_indices: Some(e.indices.clone()),
        };
        emb.check_isometry(ISOMETRY_SAMPLES, 0)?;
        Ok(emb)
    }

    /// A general embedding from arbitrary index points in the dual ball.
    pub fn from_index_points(space: &PolyhedralSpace<S>, points: Vec<Vector<S>>) -> Result<Self> {
        check_dims(space.dim(), &points)?;
        for p in &points {
            let n = space.dual_norm(p)?;
            if n.cmp_tol(&S::one()).is_gt() {
                return Err(Error::NotIsometric(format!(
                    "index point {p} has dual norm {} > 1",
                    n.format()
                )));
            }
        }
        for e in space.dual_extremes() {
            let minus = e.neg();
            if !points.iter().any(|p| p.approx_eq(e) || p.approx_eq(&minus)) {
                return Err(Error::NotIsometric(format!(
                    "dual extreme point {e} is not attained up to sign"
                )));
            }
        }
        let emb = Self {
            space: Arc::new(space.clone()),
            index_points: points,
            kind: EmbeddingKind::GeneralTf,
            e_indices: None,
        };
        emb.check_isometry(ISOMETRY_SAMPLES, 0)?;
        Ok(emb)
    }

    /// Restriction to the whole symmetric extreme set `±Ext B_{X*}`; never
    /// has unique extensions.
    pub fn dual_ball(space: &PolyhedralSpace<S>) -> Self {
        Self {
            space: Arc::new(space.clone()),
            index_points: space.dual_extremes().to_vec(),
            kind: EmbeddingKind::GeneralTf,
            e_indices: None,
        }
    }

    pub fn space(&self) -> &PolyhedralSpace<S> {
        &self.space
    }

    pub fn index_points(&self) -> &[Vector<S>] {
        &self.index_points
    }

    /// Row `k` is index point `k`.
    pub fn matrix(&self) -> &[Vector<S>] {
        &self.index_points
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn e_indices(&self) -> Option<&[usize]> {
        self.e_indices.as_deref()
    }

    pub fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        check_dims(self.space.dim(), [x])?;
        Ok(Vector::new(self.index_points.iter().map(|k| x.dot(k)).collect()))
    }

    pub fn sup_norm_of_image(&self, x: &Vector<S>) -> Result<S> {
        Ok(self
            .apply(x)?
            .coords()
            .iter()
            .map(Scalar::abs_val)
            .fold(S::zero(), |m, v| if v > m { v } else { m }))
    }

    /// `T* μ = Σ_k μ_k · k`.
    pub fn adjoint_apply(&self, mu: &SignedWeightVector<S>) -> Result<Vector<S>> {
        if mu.weights.dim() != self.index_points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.index_points.len(),
                found: mu.weights.dim(),
            });
        }
        Ok(self
            .index_points
            .iter()
            .zip(mu.weights.coords())
            .fold(Vector::zeros(self.space.dim()), |acc, (k, w)| {
                acc.add(&k.scale(w))
            }))
    }

    /// Checks `‖T x‖∞ = ‖x‖` on every primal ball vertex and on `samples`
    /// random rational points.
    pub fn check_isometry(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.space.dim();
        let random = (0..samples).map(|_| {
            Vector::new(
                (0..d)
                    .map(|_| S::from_frac(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                    .collect(),
            )
        });
        for x in self.space.primal_vertices().into_iter().chain(random) {
            let lhs = self.sup_norm_of_image(&x)?;
            let rhs = self.space.norm(&x)?;
            if !lhs.approx_eq(&rhs) {
                return Err(Error::NotIsometric(format!(
                    "‖T{x}‖∞ = {} but ‖{x}‖ = {}",
                    lhs.format(),
                    rhs.format()
                )));
            }
        }
        Ok(())
    }
}

/// A discrete signed measure on the index points.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
#[serde(transparent)]
pub struct SignedWeightVector<S: Scalar = Rat> {
    pub weights: Vector<S>,
}

impl<S: Scalar> SignedWeightVector<S> {
    pub fn new(weights: Vector<S>) -> Self {
        Self { weights }
    }

    pub fn dirac(len: usize, at: usize, sign: S) -> Self {
        Self::new(Vector::unit(len, at).scale(&sign))
    }

    pub fn total_variation(&self) -> S {
        self.weights.l1()
    }

    pub fn positive_part(&self) -> Self {
        self.map(|w| if w.is_pos() { w.clone() } else { S::zero() })
    }

    pub fn negative_part(&self) -> Self {
        self.map(|w| if w.is_neg() { -w.clone() } else { S::zero() })
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_negligible())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.weights.approx_eq(&other.weights)
    }

    fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self::new(Vector::new(self.weights.coords().iter().map(f).collect()))
    }
}

/// The Hahn–Banach extension set of one functional through an embedding.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ExtensionPolytope<S: Scalar = Rat> {
    pub functional: Vector<S>,
    #[serde(serialize_with = "crate::scalar::serialize_text")]
    pub norm_value: S,
    #[serde(serialize_with = "crate::scalar::serialize_text")]
    pub lp_min_value: S,
    pub unique: bool,
    /// Basic optimal extension.
    pub point: SignedWeightVector<S>,
    /// An optimal extension different from `point`, if any.
    pub second_witness: Option<SignedWeightVector<S>>,
    /// Two distinct optimal extensions found by the singleton test.
    #[serde(skip)]
    pub witnesses: Option<(SignedWeightVector<S>, SignedWeightVector<S>)>,
}

/// Dual norm by LP over the primal ball: `max ⟨x, f⟩` s.t. `⟨x, e⟩ ≤ 1`.
pub fn dual_norm_lp<S: Scalar>(space: &PolyhedralSpace<S>, f: &Vector<S>) -> Result<S> {
    check_dims(space.dim(), [f])?;
    let d = space.dim();
    let ext = space.dual_extremes();
    let mut objective = f.coords().to_vec();
    objective.resize(d + ext.len(), S::zero());
    let mut bounds = vec![Bound::free(); d];
    bounds.extend(std::iter::repeat_with(Bound::nonneg).take(ext.len()));
    let mut lp = LpProblem::new(Vector::new(objective), Sense::Maximize).with_bounds(bounds);
    for (i, e) in ext.iter().enumerate() {
        let mut row = e.coords().to_vec();
        row.resize(d + ext.len(), S::zero());
        row[d + i] = S::one();
        lp.add_row(Vector::new(row), S::one());
    }
    let sol = solve_lp(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Internal("primal ball LP has no optimum".into()));
    }
    Ok(sol.value)
}

/// `min Σ (μ⁺_k + μ⁻_k)` s.t. `Σ_k (μ⁺_k − μ⁻_k) k = x*`, `μ± ≥ 0`.
pub fn extension_lp<S: Scalar>(emb: &FiniteEmbedding<S>, xstar: &Vector<S>) -> LpProblem<S> {
    let m = emb.index_points.len();
    let mut lp = LpProblem::new(Vector::new(vec![S::one(); 2 * m]), Sense::Minimize);
    for axis in 0..emb.space.dim() {
        let mut row = Vec::with_capacity(2 * m);
        row.extend(emb.index_points.iter().map(|k| k[axis].clone()));
        row.extend(emb.index_points.iter().map(|k| -k[axis].clone()));
        lp.add_row(Vector::new(row), xstar[axis].clone());
    }
    lp
}

fn unsplit<S: Scalar>(split: &Vector<S>, m: usize) -> SignedWeightVector<S> {
    SignedWeightVector::new(Vector::new(
        (0..m)
            .map(|k| split[k].clone() - split[m + k].clone())
            .collect(),
    ))
}

/// Computes the extension set of `xstar` and decides whether it is a point.
/// `xstar = 0` has the single extension `0`.
pub fn hb_extensions<S: Scalar>(
    emb: &FiniteEmbedding<S>,
    xstar: &Vector<S>,
) -> Result<ExtensionPolytope<S>> {
    check_dims(emb.space.dim(), [xstar])?;
    let m = emb.index_points.len();
    let check = match optimal_face_is_singleton(&extension_lp(emb, xstar)) {
        Ok(c) => c,
        Err(Error::NoOptimum(why)) => {
            return Err(Error::Internal(format!(
                "extension LP for {xstar} has no optimum ({why}): adjoint is not onto"
            )))
        }
        Err(e) => return Err(e),
    };
    let lp_min_value = check.optimum.value.clone();
    let norm_value = emb.space.dual_norm(xstar)?;
    if !lp_min_value.approx_eq(&norm_value) {
        return Err(Error::Internal(format!(
            "minimal extension norm {} differs from ‖{xstar}‖ = {}",
            lp_min_value.format(),
            norm_value.format()
        )));
    }
    let point = unsplit(&check.optimum.point, m);
    let witnesses = check
        .witnesses
        .map(|(a, b)| (unsplit(&a, m), unsplit(&b, m)));
    let second_witness = witnesses.as_ref().map(|(a, b)| {
        if a.approx_eq(&point) {
            b.clone()
        } else {
            a.clone()
        }
    });
    Ok(ExtensionPolytope {
        functional: xstar.clone(),
        norm_value,
        lp_min_value,
        unique: check.singleton,
        point,
        second_witness,
        witnesses,
    })
}

/// Support size of the basic optimal extension; never exceeds `dim X`.
/// Meaningful for unit functionals of a U-embedding.
pub fn phelps_support<S: Scalar>(emb: &FiniteEmbedding<S>, xstar: &Vector<S>) -> Result<usize> {
    let ext = hb_extensions(emb, xstar)?;
    let support = ext.point.support().len();
    if support > emb.space.dim() {
        return Err(Error::Internal(format!(
            "basic extension of {xstar} has support {support} > dim {}",
            emb.space.dim()
        )));
    }
    Ok(support)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct UCore<S: Scalar = Rat> {
    /// Index points that are dual extreme points.
    pub indices: Vec<usize>,
    /// `Ext⁺`: the dual extreme indices hit by the core, ascending.
    pub ext_plus: Vec<usize>,
    /// Dual norms of the index points outside the core.
    #[serde(serialize_with = "crate::scalar::serialize_indexed_text")]
    pub non_core_norms: Vec<(usize, S)>,
    /// Every non-core index point lies strictly inside the dual ball.
    pub non_core_strict: bool,
    /// `Ext = Ext⁺ ⊔ (−Ext⁺)`.
    pub ext_splits: bool,
}

pub fn u_core<S: Scalar>(emb: &FiniteEmbedding<S>) -> Result<UCore<S>> {
    let space = &emb.space;
    let mut indices = Vec::new();
    let mut ext_plus = Vec::new();
    let mut non_core_norms = Vec::new();
    for (k, p) in emb.index_points.iter().enumerate() {
        match space.index_of(p) {
            Some(e) => {
                indices.push(k);
                ext_plus.push(e);
            }
            None => non_core_norms.push((k, space.dual_norm(p)?)),
        }
    }
    ext_plus.sort_unstable();
    ext_plus.dedup();
    let non_core_strict = non_core_norms
        .iter()
        .all(|(_, n)| n.cmp_tol(&S::one()).is_lt());
    let n = space.dual_extremes().len();
    let mut owner = vec![0u8; n];
    for &e in &ext_plus {
        owner[e] += 1;
        owner[space.antipode(e)] += 1;
    }
    let ext_splits = owner.iter().all(|&c| c == 1);
    Ok(UCore {
        indices,
        ext_plus,
        non_core_norms,
        non_core_strict,
        ext_splits,
    })
}

/// `outer ∘ inner` where `outer` embeds `C(K₁) = ℓ∞^{|K₁|}` into `C(K₂)`.
pub fn compose<S: Scalar>(
    inner: &FiniteEmbedding<S>,
    outer: &FiniteEmbedding<S>,
) -> Result<FiniteEmbedding<S>> {
    let m = inner.index_points.len();
    if outer.space.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: outer.space.dim(),
        });
    }
    let linf = PolyhedralSpace::<S>::linf(m);
    let same = outer.space.dual_extremes().len() == linf.dual_extremes().len()
        && linf
            .dual_extremes()
            .iter()
            .all(|e| outer.space.index_of(e).is_some());
    if !same {
        return Err(Error::Precondition(format!(
            "outer embedding must start from ℓ∞^{m}, got {}",
            outer.space.name()
        )));
    }
    let rows: Vec<Vector<S>> = outer
        .index_points
        .iter()
        .map(|w| {
            inner
                .index_points
                .iter()
                .zip(w.coords())
                .fold(Vector::zeros(inner.space.dim()), |acc, (k, c)| {
                    acc.add(&k.scale(c))
                })
        })
        .collect();
    FiniteEmbedding::from_index_points(&inner.space, rows)
}

/// Seeded random unit functionals: random rational combinations of a random
/// subset of dual extremes, renormalized by the exact dual norm.
pub fn random_sphere_functionals<S: Scalar>(
    space: &PolyhedralSpace<S>,
    count: usize,
    seed: u64,
) -> Result<Vec<Vector<S>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ext = space.dual_extremes();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(1..=ext.len());
        let picks = sample(&mut rng, ext.len(), k);
        let mut f = Vector::zeros(space.dim());
        for i in picks.iter() {
            let c = S::from_frac(rng.gen_range(1..=6), rng.gen_range(1..=6));
            f = f.add(&ext[i].scale(&c));
        }
        if f.is_zero() {
            continue;
        }
        let n = space.dual_norm(&f)?;
        out.push(f.scale(&(S::one() / n)));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Extreme,
    Barycenter,
    Random,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SamplingFailure<S: Scalar = Rat> {
    pub probe: ProbeKind,
    pub functional: Vector<S>,
    pub witness1: SignedWeightVector<S>,
    pub witness2: SignedWeightVector<S>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SamplingReport<S: Scalar = Rat> {
    pub checked: usize,
    pub failures: Vec<SamplingFailure<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Exact arithmetic, theorem track and sampling track both pass.
    CertifiedU,
    /// Float path, both tracks pass.
    EvidenceU,
    /// Both tracks reject.
    NotU,
    /// The tracks disagree; an implementation bug.
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Certificate<S: Scalar = Rat> {
    pub space: String,
    pub kind: EmbeddingKind,
    pub exact: bool,
    #[serde(rename = "E")]
    pub e: Vec<Vector<S>>,
    pub simplexoid: bool,
    pub offending_face: Option<Face<S>>,
    pub proper_u_suitable: bool,
    pub theorem_track: bool,
    #[serde(rename = "certified_U")]
    pub certified_u: bool,
    pub verdict: Verdict,
    pub sampling: SamplingReport<S>,
    pub seed: u64,
}

impl<S: Scalar> Certificate<S> {
    pub fn tracks_agree(&self) -> bool {
        self.verdict != Verdict::Inconsistent
    }
}

/// All probe functionals: dual extremes, barycenters of positive-dimensional
/// faces, then `samples` seeded random unit functionals.
pub fn probe_functionals<S: Scalar>(
    space: &PolyhedralSpace<S>,
    samples: usize,
    seed: u64,
) -> Result<Vec<(ProbeKind, Vector<S>)>> {
    let mut probes: Vec<(ProbeKind, Vector<S>)> = space
        .dual_extremes()
        .iter()
        .map(|e| (ProbeKind::Extreme, e.clone()))
        .collect();
    for face in space.faces().iter().filter(|f| f.affine_dim > 0) {
        let pts: Vec<_> = face
            .extreme_indices
            .iter()
            .map(|&i| space.dual_extremes()[i].clone())
            .collect();
        probes.push((ProbeKind::Barycenter, Vector::centroid(&pts)));
    }
    probes.extend(
        random_sphere_functionals(space, samples, seed)?
            .into_iter()
            .map(|f| (ProbeKind::Random, f)),
    );
    Ok(probes)
}

/// Two-track verdict. The theorem track checks that the dual ball is a
/// simplexoid and that the core of the embedding is a proper U-suitable set
/// (with every other index point strictly inside the dual ball); the sampling
/// track solves the extension LP for every probe functional. Results are
/// merged in probe order, so the report does not depend on scheduling.
pub fn verify_u_embedding<S: Scalar>(
    emb: &FiniteEmbedding<S>,
    samples: usize,
    seed: u64,
) -> Result<Certificate<S>> {
    let space = &emb.space;
    let simplexoid = space.simplexoid()?;
    let core = u_core(emb)?;
    let (e_indices, extra_ok) = match &emb.e_indices {
        Some(e) => (e.clone(), true),
        None => (core.ext_plus.clone(), core.non_core_strict),
    };
    let e_ok = match emb.kind {
        EmbeddingKind::CanonicalUe => true,
        // a general embedding must not repeat an extreme point up to sign
        EmbeddingKind::GeneralTf => core.indices.len() == core.ext_plus.len(),
    };
    let checks = verify_u_suitable(space, &e_indices)?;
    let proper = checks.proper() && e_ok && extra_ok;
    let theorem_track = simplexoid.simplexoid && proper;

    let probes = probe_functionals(space, samples, seed)?;
    let results: Vec<Result<Option<SamplingFailure<S>>>> = probes
        .par_iter()
        .map(|(kind, f)| {
            let ext = hb_extensions(emb, f)?;
            Ok(ext.witnesses.map(|(a, b)| SamplingFailure {
                probe: *kind,
                functional: f.clone(),
                witness1: a,
                witness2: b,
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    let sampling_ok = failures.is_empty();
    let verdict = match (theorem_track, sampling_ok) {
        (true, true) if S::EXACT => Verdict::CertifiedU,
        (true, true) => Verdict::EvidenceU,
        (false, false) => Verdict::NotU,
        _ => Verdict::Inconsistent,
    };
    Ok(Certificate {
        space: space.name().to_string(),
        kind: emb.kind,
        exact: S::EXACT,
        e: e_indices
            .iter()
            .map(|&i| space.dual_extremes()[i].clone())
            .collect(),
        simplexoid: simplexoid.simplexoid,
        offending_face: simplexoid.offending,
        proper_u_suitable: proper,
        theorem_track,
        certified_u: verdict == Verdict::CertifiedU,
        verdict,
        sampling: SamplingReport {
            checked: probes.len(),
            failures,
        },
        seed,
    })
}
