//! Discretized operators `T_F : C(K) → C(S)` given by dual-valued fields
//! `F : S → M(K)`, `(T_F x)(s) = Σ_k F(s)_k x(k)`.
//!
//! Compacta are finite: a sorted grid in `[0, 1]` (topology = grid adjacency)
//! or a discrete label set. Weights are `f64`; comparisons use the field's
//! tolerance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::TAU;

/// Grid coordinates closer than this are the same point.
const SNAP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCompact {
    pub labels: Vec<String>,
    /// Present for grids of `[0, 1]`, ascending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
}

impl GridCompact {
    pub fn discrete<I: IntoIterator<Item = impl Into<String>>>(labels: I) -> Self {
        Self {
            labels: labels.into_iter().map(Into::into).collect(),
            coords: None,
        }
    }

    /// `{0, step, 2·step, …, 1}` merged with `breakpoints`; a breakpoint
    /// within `1e-12` of a grid point replaces it.
    pub fn interval(step: f64, breakpoints: &[f64]) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::Validation(format!("grid step {step} not in (0, 1]")));
        }
        let n = (1.0 / step).round() as usize;
        if ((n as f64) * step - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("grid step {step} does not divide [0, 1]")));
        }
        let mut coords: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        for &b in breakpoints {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::Validation(format!("breakpoint {b} outside [0, 1]")));
            }
            let at = coords.partition_point(|&c| c < b - SNAP);
            if at < coords.len() && (coords[at] - b).abs() <= SNAP {
                coords[at] = b;
            } else {
                coords.insert(at, b);
            }
        }
        Ok(Self::from_coords(coords))
    }

    pub fn from_coords(coords: Vec<f64>) -> Self {
        Self {
            labels: coords.iter().map(|c| c.to_string()).collect(),
            coords: Some(coords),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn coord(&self, i: usize) -> Option<f64> {
        self.coords.as_ref().map(|c| c[i])
    }

    pub fn is_grid(&self) -> bool {
        self.coords.is_some()
    }

    /// Index of the grid point nearest to `t`.
    pub fn nearest(&self, t: f64) -> Option<usize> {
        let c = self.coords.as_ref()?;
        let at = c.partition_point(|&x| x < t);
        match (at.checked_sub(1), (at < c.len()).then_some(at)) {
            (Some(a), Some(b)) => Some(if t - c[a] <= c[b] - t { a } else { b }),
            (Some(a), None) => Some(a),
            (None, b) => b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.labels {
            if !seen.insert(l) {
                return Err(Error::Validation(format!("duplicate label {l}")));
            }
        }
        if let Some(c) = &self.coords {
            if c.len() != self.labels.len() {
                return Err(Error::Validation("coords and labels differ in length".into()));
            }
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation("grid coordinates not strictly ascending".into()));
            }
        }
        Ok(())
    }

    /// Connected components of a subset (ascending indices): maximal runs of
    /// consecutive grid indices, or singletons on a discrete set.
    pub fn components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &i in subset {
            match out.last_mut() {
                Some(run) if self.is_grid() && *run.last().unwrap() + 1 == i => run.push(i),
                _ => out.push(vec![i]),
            }
        }
        out
    }
}

pub type Atoms = Vec<(usize, f64)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureField {
    #[serde(rename = "S")]
    pub domain: GridCompact,
    #[serde(rename = "K")]
    pub codomain: GridCompact,
    pub atoms: Vec<Atoms>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Largest total-variation jump between grid neighbours.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step_variation: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn default_tolerance() -> f64 {
    TAU
}

fn total_variation(atoms: &[(usize, f64)]) -> f64 {
    atoms.iter().map(|(_, w)| w.abs()).sum()
}

fn tv_distance(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let mut diff: BTreeMap<usize, f64> = BTreeMap::new();
    for &(k, w) in a {
        *diff.entry(k).or_default() += w;
    }
    for &(k, w) in b {
        *diff.entry(k).or_default() -= w;
    }
    diff.values().map(|w| w.abs()).sum()
}

impl MeasureField {
    pub fn new(domain: GridCompact, codomain: GridCompact, atoms: Vec<Atoms>) -> Result<Self> {
        let mut field = Self {
            domain,
            codomain,
            atoms,
            tolerance: TAU,
            max_step_variation: None,
            notes: Vec::new(),
        };
        field.validate()?;
        if field.domain.is_grid() {
            field.max_step_variation = Some(
                field
                    .atoms
                    .windows(2)
                    .map(|w| tv_distance(&w[0], &w[1]))
                    .fold(0.0, f64::max),
            );
        }
        Ok(field)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let field: Self = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        field.validate()?;
        Ok(field)
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.codomain.validate()?;
        if self.atoms.len() != self.domain.len() {
            return Err(Error::Validation(format!(
                "{} atom lists for {} domain points",
                self.atoms.len(),
                self.domain.len()
            )));
        }
        for (s, atoms) in self.atoms.iter().enumerate() {
            if let Some(&(k, _)) = atoms.iter().find(|(k, _)| *k >= self.codomain.len()) {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    len: self.codomain.len(),
                });
            }
            if atoms.iter().any(|(_, w)| !w.is_finite()) {
                return Err(Error::Validation(format!("non-finite weight at s={}", self.domain.labels[s])));
            }
            let norm = total_variation(atoms);
            if norm > 1.0 + self.tolerance {
                return Err(Error::Validation(format!(
                    "‖F(s)‖ = {norm} > 1 at s={}",
                    self.domain.labels[s]
                )));
            }
        }
        Ok(())
    }

    pub fn norm_at(&self, s: usize) -> f64 {
        total_variation(&self.atoms[s])
    }

    /// `(k, ±1)` if `F(s) = ±δ_k` within tolerance.
    pub fn dirac_at(&self, s: usize) -> Option<(usize, i8)> {
        let tol = self.tolerance;
        let mut significant = self.atoms[s].iter().filter(|(_, w)| w.abs() > tol);
        let &(k, w) = significant.next()?;
        if significant.next().is_some() || (w.abs() - 1.0).abs() > tol {
            return None;
        }
        Some((k, if w > 0.0 { 1 } else { -1 }))
    }
}

/// `F(s) = δ_{h(s)}`.
pub fn composition_field(domain: GridCompact, codomain: GridCompact, h: &[usize]) -> Result<MeasureField> {
    if h.len() != domain.len() {
        return Err(Error::Validation(format!(
            "h has {} values for {} points",
            h.len(),
            domain.len()
        )));
    }
    let atoms = h.iter().map(|&k| vec![(k, 1.0)]).collect();
    MeasureField::new(domain, codomain, atoms)
}

/// `F(s) = (1 − f(s))/(1 + f(s)) · δ_{r(s)}` for a retraction `r` of `S` onto
/// `K` (given as domain indices) and `f ∈ [0, 1]` vanishing exactly on `K`.
/// The codomain is `K` with the labels inherited from `S`.
pub fn retraction_field(domain: GridCompact, k: &[usize], r: &[usize], f: &[f64]) -> Result<MeasureField> {
    let n = domain.len();
    if r.len() != n || f.len() != n {
        return Err(Error::Validation("r and f must be defined on every point of S".into()));
    }
    let mut position = vec![None; n];
    for (j, &s) in k.iter().enumerate() {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, len: n });
        }
        position[s] = Some(j);
    }
    for s in 0..n {
        let label = &domain.labels[s];
        if position.get(r[s]).copied().flatten().is_none() {
            return Err(Error::Validation(format!("r(s) ∉ K at s={label}")));
        }
        if position[s].is_some() && r[s] != s {
            return Err(Error::Validation(format!("r is not the identity on K at s={label}")));
        }
        if !(0.0..=1.0).contains(&f[s]) {
            return Err(Error::Validation(format!("f(s) = {} outside [0, 1] at s={label}", f[s])));
        }
        if (f[s] == 0.0) != position[s].is_some() {
            return Err(Error::Validation(format!("f⁻¹(0) differs from K at s={label}")));
        }
    }
    let codomain = GridCompact {
        labels: k.iter().map(|&s| domain.labels[s].clone()).collect(),
        coords: domain
            .coords
            .as_ref()
            .map(|c| k.iter().map(|&s| c[s]).collect()),
    };
    let atoms = (0..n)
        .map(|s| {
            let w = (1.0 - f[s]) / (1.0 + f[s]);
            let j = position[r[s]].expect("checked above");
            if w == 0.0 {
                Vec::new()
            } else {
                vec![(j, w)]
            }
        })
        .collect();
    MeasureField::new(domain, codomain, atoms)
}

/// `S = [0, 1]` at the given step, `K = {0}`, `r ≡ 0`, `f(s) = s`.
pub fn retraction_demo(step: f64) -> Result<MeasureField> {
    let domain = GridCompact::interval(step, &[])?;
    let f = domain.coords.clone().expect("interval grid");
    let r = vec![0; domain.len()];
    retraction_field(domain, &[0], &r, &f)
}

/// Codomain of the Bézier field: `{1, …, N, ∞}`; label `∞` has index `N`.
pub fn bezier_codomain(n: usize) -> GridCompact {
    GridCompact::discrete((1..=n).map(|i| i.to_string()).chain(["∞".to_string()]))
}

/// `F(t)` for the Bézier field truncated at `N`. On `[1/(n+1), 1/n]` with
/// `u` the affine parameter, `F(t) = (1−u)² δ_{n+1} + u² δ_n`; the tail
/// `[0, 1/N]` is a single segment from `δ_∞` to `δ_N`.
pub fn bezier_atoms(n_max: usize, t: f64) -> Atoms {
    let infinity = n_max;
    let (lo_k, hi_k, lo, hi) = if t <= 1.0 / n_max as f64 {
        (infinity, n_max - 1, 0.0, 1.0 / n_max as f64)
    } else {
        let n = (1..n_max)
            .find(|&n| t >= 1.0 / (n + 1) as f64)
            .unwrap_or(n_max - 1);
        (n, n - 1, 1.0 / (n + 1) as f64, 1.0 / n as f64)
    };
    let u = ((t - lo) / (hi - lo)).clamp(0.0, 1.0);
    [(lo_k, (1.0 - u) * (1.0 - u)), (hi_k, u * u)]
        .into_iter()
        .filter(|(_, w)| *w != 0.0)
        .collect()
}

pub fn bezier_field(n_max: usize, step: f64) -> Result<MeasureField> {
    if n_max < 2 {
        return Err(Error::Validation(format!("N = {n_max} < 2")));
    }
    let breakpoints: Vec<f64> = (1..=n_max).map(|n| 1.0 / n as f64).collect();
    let domain = GridCompact::interval(step, &breakpoints)?;
    let atoms = domain
        .coords
        .as_ref()
        .expect("interval grid")
        .iter()
        .map(|&t| bezier_atoms(n_max, t))
        .collect();
    let mut field = MeasureField::new(domain, bezier_codomain(n_max), atoms)?;
    field
        .notes
        .push(format!("segments beyond n = {n_max} collapsed into one segment from δ_∞ to δ_{n_max}"));
    Ok(field)
}

/// Un-normalized weight `Σ_{n ≤ n_max} 2⁻ⁿ g_n(t)` near target `p`, with tent
/// functions `g_n` of radius `base · 2^{-(n-1)}`.
pub fn gdelta_raw_weight(t: f64, p: f64, base: f64, n_max: u32) -> f64 {
    let d = (t - p).abs();
    (1..=n_max)
        .map(|n| {
            let r = base / f64::powi(2.0, n as i32 - 1);
            let g = if d < r { 1.0 - d / r } else { 0.0 };
            g / f64::powi(2.0, n as i32)
        })
        .sum()
}

/// Field from `[0, 1]` into the discrete set of targets with `F(p_i) = δ_i`.
/// The geometric sum is truncated at `n_max` and renormalized so that the
/// targets carry weight exactly one.
pub fn gdelta_field(step: f64, targets: &[f64], base: f64, n_max: u32) -> Result<MeasureField> {
    if targets.is_empty() || n_max == 0 || base <= 0.0 {
        return Err(Error::Validation("need targets, n_max ≥ 1 and a positive radius".into()));
    }
    for (i, &p) in targets.iter().enumerate() {
        for &q in &targets[i + 1..] {
            if (p - q).abs() < 2.0 * base {
                return Err(Error::Validation(format!(
                    "neighbourhoods of {p} and {q} with radius {base} overlap"
                )));
            }
        }
    }
    let domain = GridCompact::interval(step, targets)?;
    let raw_peak = 1.0 - f64::powi(2.0, -(n_max as i32));
    let atoms = domain
        .coords
        .as_ref()
        .expect("interval grid")
        .iter()
        .map(|&t| {
            targets
                .iter()
                .enumerate()
                .filter(|(_, &p)| (t - p).abs() < base)
                .map(|(i, &p)| (i, gdelta_raw_weight(t, p, base, n_max) / raw_peak))
                .filter(|(_, w)| *w != 0.0)
                .collect()
        })
        .collect();
    let codomain = GridCompact::discrete(targets.iter().map(|p| format!("p={p}")));
    let mut field = MeasureField::new(domain, codomain, atoms)?;
    field.notes.push(format!(
        "weights renormalized by 1/(1 − 2^-{n_max}) = {}",
        1.0 / raw_peak
    ));
    Ok(field)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CksStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CksVerdict {
    /// Indices into `S` where `F(s) = ±δ_k`.
    pub s0: Vec<usize>,
    pub s0_labels: Vec<String>,
    /// `h(k)` as an index into `S`, when `s0 → K` is a bijection.
    pub h: Option<Vec<usize>>,
    /// `ε(k) ∈ {±1}`; `0` where `k` has no preimage.
    pub epsilon: Vec<i8>,
    pub margin: f64,
    pub max_off_norm: f64,
    pub argmax_off: Option<String>,
    pub status: CksStatus,
    pub pass: bool,
    pub reasons: Vec<String>,
    pub max_step_variation: Option<f64>,
}

pub fn verify_cks(field: &MeasureField) -> CksVerdict {
    let tol = field.tolerance;
    let s_labels = &field.domain.labels;
    let k_labels = &field.codomain.labels;
    let scan: Vec<(f64, Option<(usize, i8)>)> = (0..field.domain.len())
        .into_par_iter()
        .map(|s| (field.norm_at(s), field.dirac_at(s)))
        .collect();

    let mut s0 = Vec::new();
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); field.codomain.len()];
    let mut signs = vec![0i8; field.codomain.len()];
    let mut sign_at = vec![0i8; field.domain.len()];
    let mut max_off_norm = 0.0;
    let mut argmax_off = None;
    for (s, (norm, dirac)) in scan.iter().enumerate() {
        match dirac {
            Some((k, sign)) => {
                s0.push(s);
                preimages[*k].push(s);
                signs[*k] = *sign;
                sign_at[s] = *sign;
            }
            None if *norm > max_off_norm || argmax_off.is_none() => {
                max_off_norm = *norm;
                argmax_off = Some(s);
            }
            None => {}
        }
    }

    let mut reasons = Vec::new();
    for (k, pre) in preimages.iter().enumerate() {
        match pre.as_slice() {
            [] => reasons.push(format!("h not surjective: k={} has no preimage", k_labels[k])),
            [_] => {}
            [a, b, ..] => reasons.push(format!(
                "h not injective: s={}, s={} collide",
                s_labels[*a], s_labels[*b]
            )),
        }
    }
    let bijective = reasons.is_empty();
    let h = bijective.then(|| preimages.iter().map(|p| p[0]).collect());

    for run in field.domain.components(&s0) {
        if run.iter().any(|&s| sign_at[s] != sign_at[run[0]]) {
            reasons.push(format!(
                "ε not locally constant on the component starting at s={}",
                s_labels[run[0]]
            ));
        }
    }

    let margin = 1.0 - max_off_norm;
    let status = if !reasons.is_empty() {
        CksStatus::Fail
    } else if margin > tol {
        CksStatus::Pass
    } else {
        let at = argmax_off.map_or(String::new(), |s| s_labels[s].clone());
        reasons.push(format!("margin {margin:e} below tolerance at s={at}: inconclusive at this resolution"));
        CksStatus::Inconclusive
    };
    CksVerdict {
        s0_labels: s0.iter().map(|&s| s_labels[s].clone()).collect(),
        s0,
        h,
        epsilon: signs,
        margin,
        max_off_norm,
        argmax_off: argmax_off.map(|s| s_labels[s].clone()),
        pass: status == CksStatus::Pass,
        status,
        reasons,
        max_step_variation: field.max_step_variation,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSet {
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    pub note: String,
}

/// `Z = F⁻¹(0)`; the range of `T_F` lies in the ideal of functions vanishing on `Z`.
pub fn minimal_ideal_zeroset(field: &MeasureField) -> ZeroSet {
    let indices: Vec<usize> = (0..field.domain.len())
        .filter(|&s| field.norm_at(s) <= field.tolerance)
        .collect();
    ZeroSet {
        labels: indices.iter().map(|&s| field.domain.labels[s].clone()).collect(),
        note: if indices.is_empty() {
            "Z is empty; T_F(C(K)) ⊆ C(S)".into()
        } else {
            format!("T_F(C(K)) ⊆ I_Z, the functions vanishing on {} points", indices.len())
        },
        indices,
    }
}

/// `(T_F x)(s) = Σ_k F(s)_k x(k)`.
pub fn apply_field(field: &MeasureField, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != field.codomain.len() {
        return Err(Error::DimensionMismatch {
            expected: field.codomain.len(),
            found: x.len(),
        });
    }
    Ok(field
        .atoms
        .iter()
        .map(|atoms| atoms.iter().map(|&(k, w)| w * x[k]).sum())
        .collect())
}

pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}
