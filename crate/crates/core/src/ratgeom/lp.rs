//! Two-phase dense tableau simplex with Bland's rule.
//!
//! Over [`Rat`] every pivot is exact, so optimal values, optimal points and
//! the singleton test below carry no rounding at all. Over `f64` the same code
//! runs with the [`TAU`](crate::scalar::TAU) tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

use super::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound<S = Rat> {
    pub lower: Option<S>,
    pub upper: Option<S>,
}

impl<S: Scalar> Bound<S> {
    pub fn nonneg() -> Self {
        Self {
            lower: Some(S::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }

    pub fn between(lower: S, upper: S) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// `optimize objective·x  s.t.  rows·x = rhs,  bounds`.
#[derive(Clone, Debug)]
pub struct LpProblem<S = Rat> {
    pub objective: Vector<S>,
    pub rows: Vec<Vector<S>>,
    pub rhs: Vec<S>,
    pub bounds: Vec<Bound<S>>,
    pub sense: Sense,
}

impl<S: Scalar> LpProblem<S> {
    /// All variables nonnegative, no rows yet.
    pub fn new(objective: Vector<S>, sense: Sense) -> Self {
        let n = objective.dim();
        Self {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![Bound::nonneg(); n],
            sense,
        }
    }

    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(Vector::zeros(num_vars), Sense::Minimize)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    pub fn add_row(&mut self, coeffs: Vector<S>, rhs: S) -> &mut Self {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        self
    }

    pub fn with_bounds(mut self, bounds: Vec<Bound<S>>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        crate::error::check_dims(n, &self.rows)?;
        if self.rhs.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: self.rhs.len(),
            });
        }
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.bounds.len(),
            });
        }
        Ok(())
    }

    fn with_objective(&self, objective: Vector<S>, sense: Sense) -> Self {
        Self {
            objective,
            sense,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution<S = Rat> {
    pub status: LpStatus,
    /// Objective value; zero unless optimal.
    pub value: S,
    /// Optimal basic point; empty unless optimal.
    pub point: Vector<S>,
    /// Original variables whose column is basic at the optimum.
    pub basis: Vec<usize>,
}

impl<S: Scalar> LpSolution<S> {
    fn non_optimal(status: LpStatus) -> Self {
        Self {
            status,
            value: S::zero(),
            point: Vector::new(Vec::new()),
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is expressed in nonnegative standard-form columns.
#[derive(Clone, Debug)]
enum VarMap<S> {
    /// x = offset + y
    Shift { col: usize, offset: S },
    /// x = offset - y
    Reflect { col: usize, offset: S },
    /// x = y⁺ - y⁻
    Split { pos: usize, neg: usize },
}

struct StandardForm<S> {
    maps: Vec<VarMap<S>>,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    cost: Vec<S>,
    ncols: usize,
}

fn standardize<S: Scalar>(p: &LpProblem<S>) -> Option<StandardForm<S>> {
    let mut maps = Vec::with_capacity(p.num_vars());
    let mut ncols = 0;
    let mut upper_rows = Vec::new();
    for b in &p.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = upper {
                    if u.cmp_tol(l).is_lt() {
                        return None;
                    }
                    upper_rows.push((col, u.clone() - l.clone()));
                }
                VarMap::Shift {
                    col,
                    offset: l.clone(),
                }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                VarMap::Reflect {
                    col,
                    offset: u.clone(),
                }
            }
            (None, None) => {
                ncols += 2;
                VarMap::Split {
                    pos: ncols - 2,
                    neg: ncols - 1,
                }
            }
        };
        maps.push(map);
    }
    let slack0 = ncols;
    ncols += upper_rows.len();

    let sign = match p.sense {
        Sense::Minimize => S::one(),
        Sense::Maximize => -S::one(),
    };
    let mut cost = vec![S::zero(); ncols];
    let mut rows = Vec::with_capacity(p.rows.len() + upper_rows.len());
    let mut rhs = Vec::with_capacity(rows.capacity());

    for (row, b) in p.rows.iter().zip(&p.rhs) {
        let mut dense = vec![S::zero(); ncols];
        let mut r = b.clone();
        for (a, map) in row.coords().iter().zip(&maps) {
            if a.is_negligible() {
                continue;
            }
            match map {
                VarMap::Shift { col, offset } => {
                    dense[*col] = a.clone();
                    r.sub_mul_assign(a, offset);
                }
                VarMap::Reflect { col, offset } => {
                    dense[*col] = -a.clone();
                    r.sub_mul_assign(a, offset);
                }
                VarMap::Split { pos, neg } => {
                    dense[*pos] = a.clone();
                    dense[*neg] = -a.clone();
                }
            }
        }
        rows.push(dense);
        rhs.push(r);
    }
    for (k, (col, width)) in upper_rows.into_iter().enumerate() {
        let mut dense = vec![S::zero(); ncols];
        dense[col] = S::one();
        dense[slack0 + k] = S::one();
        rows.push(dense);
        rhs.push(width);
    }
    for (c, map) in p.objective.coords().iter().zip(&maps) {
        let c = c.mul_ref(&sign);
        match map {
            VarMap::Shift { col, .. } => cost[*col] = c,
            VarMap::Reflect { col, .. } => cost[*col] = -c,
            VarMap::Split { pos, neg } => {
                cost[*neg] = -c.clone();
                cost[*pos] = c;
            }
        }
    }
    Some(StandardForm {
        maps,
        rows,
        rhs,
        cost,
        ncols,
    })
}

struct Tableau<S> {
    /// m rows of width `width + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<S>>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<S>,
    basis: Vec<usize>,
    width: usize,
    /// Columns that may not enter the basis.
    frozen: Vec<bool>,
}

enum Outcome {
    Optimal,
    /// Carries the entering column that has no ratio-test row.
    Unbounded(usize),
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = S::one().div_ref(&self.rows[r][c]);
        for v in self.rows[r].iter_mut() {
            *v = v.mul_ref(&inv);
        }
        self.rows[r][c] = S::one();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<S>| {
            let factor = row[c].clone();
            if factor.is_negligible() {
                row[c] = S::zero();
                return;
            }
            for (dst, src) in row.iter_mut().zip(&pivot_row) {
                if !src.is_negligible() {
                    dst.sub_mul_assign(&factor, src);
                    if !S::EXACT && dst.is_negligible() {
                        *dst = S::zero();
                    }
                }
            }
            row[c] = S::zero();
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// broken by lowest basic index.
    fn run(&mut self, active: usize) -> Outcome {
        let rhs = self.width;
        loop {
            let Some(enter) = (0..active).find(|&j| self.obj[j].is_neg() && !self.frozen.get(j).copied().unwrap_or(false)) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rows[i][rhs].div_ref(a);
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => match ratio.cmp_tol(&best_ratio) {
                        std::cmp::Ordering::Less => Some((i, ratio)),
                        std::cmp::Ordering::Equal if self.basis[i] < self.basis[best] => {
                            Some((i, ratio))
                        }
                        _ => Some((best, best_ratio)),
                    },
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Outcome::Unbounded(enter),
            }
        }
    }

    fn point(&self) -> Vec<S> {
        let mut y = vec![S::zero(); self.width];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            y[b] = row[self.width].clone();
        }
        y
    }

    fn price_out(&mut self, cost: &[S]) {
        let width = self.width;
        let mut obj = cost.to_vec();
        obj.resize(width + 1, S::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = obj[b].clone();
            if cb.is_negligible() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                o.sub_mul_assign(&cb, v);
            }
        }
        self.obj = obj;
    }
}

enum StdOutcome<S> {
    Infeasible,
    Unbounded,
    /// Basic optimal point in standard-form columns, and its basis.
    Optimal(Vec<S>, Vec<usize>),
}

/// Two-phase simplex on `rows · y = rhs`, `y ≥ 0`, minimizing `cost · y`.
fn solve_standard<S: Scalar>(sf: &StandardForm<S>) -> StdOutcome<S> {
    match optimal_tableau(sf) {
        Err(outcome) => outcome,
        Ok(tab) => {
            let y = tab.point();
            StdOutcome::Optimal(y, tab.basis)
        }
    }
}

/// Final phase-2 tableau, or the reason there is none.
fn optimal_tableau<S: Scalar>(sf: &StandardForm<S>) -> std::result::Result<Tableau<S>, StdOutcome<S>> {
    let n = sf.ncols;
    let m = sf.rows.len();

    // phase 1: artificial per row, rhs made nonnegative
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, b)) in sf.rows.iter().zip(&sf.rhs).enumerate() {
        let flip = b.is_neg();
        let mut dense: Vec<S> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        dense.resize(width + 1, S::zero());
        dense[n + i] = S::one();
        dense[width] = if flip { -b.clone() } else { b.clone() };
        rows.push(dense);
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: (n..n + m).collect(),
        width,
        frozen: Vec::new(),
    };
    let mut phase1_cost = vec![S::zero(); width];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = S::one();
    }
    tab.price_out(&phase1_cost);
    tab.run(width);
    if (-tab.obj[width].clone()).is_pos() {
        return Err(StdOutcome::Infeasible);
    }

    // drive zero-valued artificials out of the basis; drop redundant rows
    let mut keep = vec![true; m];
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        match (0..n).find(|&j| !tab.rows[r][j].is_negligible()) {
            Some(j) => tab.pivot(r, j),
            None => keep[r] = false,
        }
    }
    let mut rows = Vec::new();
    let mut basis = Vec::new();
    for (r, row) in tab.rows.into_iter().enumerate() {
        if keep[r] {
            let mut trimmed: Vec<S> = row[..n].to_vec();
            trimmed.push(row[width].clone());
            rows.push(trimmed);
            basis.push(tab.basis[r]);
        }
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        width: n,
        frozen: Vec::new(),
    };

    // phase 2
    tab.price_out(&sf.cost);
    if let Outcome::Unbounded(_) = tab.run(n) {
        return Err(StdOutcome::Unbounded);
    }
    Ok(tab)
}

/// Maps a standard-form point back to the original variables.
fn recover<S: Scalar>(sf: &StandardForm<S>, y: &[S]) -> Vector<S> {
    Vector::new(
        sf.maps
            .iter()
            .map(|map| match map {
                VarMap::Shift { col, offset } => offset.clone() + y[*col].clone(),
                VarMap::Reflect { col, offset } => offset.clone() - y[*col].clone(),
                VarMap::Split { pos, neg } => y[*pos].clone() - y[*neg].clone(),
            })
            .collect(),
    )
}

fn to_solution<S: Scalar>(problem: &LpProblem<S>, sf: &StandardForm<S>, y: &[S], std_basis: &[usize]) -> LpSolution<S> {
    let is_basic = |col: &usize| std_basis.contains(col);
    let basis = sf
        .maps
        .iter()
        .enumerate()
        .filter(|(_, map)| match map {
            VarMap::Shift { col, .. } | VarMap::Reflect { col, .. } => is_basic(col),
            VarMap::Split { pos, neg } => is_basic(pos) || is_basic(neg),
        })
        .map(|(j, _)| j)
        .collect();
    let point = recover(sf, y);
    LpSolution {
        status: LpStatus::Optimal,
        value: problem.objective.dot(&point),
        point,
        basis,
    }
}

/// Solves an LP exactly (for [`Rat`]). Infeasibility and unboundedness are
/// reported in the status, never as errors; errors mean a malformed problem.
pub fn solve_lp<S: Scalar>(problem: &LpProblem<S>) -> Result<LpSolution<S>> {
    problem.validate()?;
    let Some(sf) = standardize(problem) else {
        return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
    };
    Ok(match solve_standard(&sf) {
        StdOutcome::Infeasible => LpSolution::non_optimal(LpStatus::Infeasible),
        StdOutcome::Unbounded => LpSolution::non_optimal(LpStatus::Unbounded),
        StdOutcome::Optimal(y, basis) => to_solution(problem, &sf, &y, &basis),
    })
}

/// Result of testing whether the optimal face of an LP is a single point.
#[derive(Clone, Debug)]
pub struct SingletonCheck<S = Rat> {
    pub singleton: bool,
    pub optimum: LpSolution<S>,
    /// Two distinct optimal points when the face is not a singleton.
    pub witnesses: Option<(Vector<S>, Vector<S>)>,
}

/// Decides whether the optimal face is a single point.
///
/// Without free variables the standard form maps one-to-one onto the
/// original variables. The basic optimum `y*` has linearly independent
/// support columns, so the face is `{y*}` iff no optimal point is positive
/// off `supp(y*)`. Maximizing that mass, warm-started from the optimal
/// tableau with positive-reduced-cost columns frozen, decides it; the vertex
/// it reaches (or a point on the ray) is the second witness. Problems with
/// free variables minimize and maximize every coordinate over the face instead.
pub fn optimal_face_is_singleton<S: Scalar>(problem: &LpProblem<S>) -> Result<SingletonCheck<S>> {
    problem.validate()?;
    let Some(sf) = standardize(problem) else {
        return Err(Error::NoOptimum("infeasible"));
    };
    if sf.maps.iter().any(|m| matches!(m, VarMap::Split { .. })) {
        return singleton_by_coordinates(problem);
    }
    let mut tab = match optimal_tableau(&sf) {
        Err(StdOutcome::Unbounded) => return Err(Error::NoOptimum("unbounded")),
        Err(_) => return Err(Error::NoOptimum("infeasible")),
        Ok(tab) => tab,
    };
    let y = tab.point();
    let optimum = to_solution(problem, &sf, &y, &tab.basis);
    let n = sf.ncols;
    let off: Vec<usize> = (0..n).filter(|&j| y[j].is_negligible()).collect();

    // Optimal points are exactly the feasible points vanishing on columns
    // with positive reduced cost, so the final basis already spans the face.
    tab.frozen = (0..n).map(|j| tab.obj[j].is_pos()).collect();
    let mut mass = vec![S::zero(); n];
    for &j in &off {
        if !tab.frozen[j] {
            mass[j] = -S::one();
        }
    }
    if mass.iter().all(|v| v.is_negligible()) {
        return Ok(SingletonCheck {
            singleton: true,
            optimum,
            witnesses: None,
        });
    }
    tab.price_out(&mass);
    let other = match tab.run(n) {
        Outcome::Optimal => {
            let z = tab.point();
            let gained = off.iter().fold(S::zero(), |acc, &j| acc + z[j].clone());
            if !gained.is_pos() {
                return Ok(SingletonCheck {
                    singleton: true,
                    optimum,
                    witnesses: None,
                });
            }
            z
        }
        Outcome::Unbounded(enter) => {
            // step one unit along the ray
            let mut z = tab.point();
            z[enter] = z[enter].clone() + S::one();
            for (row, &b) in tab.rows.iter().zip(&tab.basis) {
                z[b] = z[b].clone() - row[enter].clone();
            }
            z
        }
    };
    let second = recover(&sf, &other);
    Ok(SingletonCheck {
        singleton: false,
        witnesses: Some((optimum.point.clone(), second)),
        optimum,
    })
}

fn singleton_by_coordinates<S: Scalar>(problem: &LpProblem<S>) -> Result<SingletonCheck<S>> {
    let optimum = solve_lp(problem)?;
    match optimum.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::NoOptimum("infeasible")),
        LpStatus::Unbounded => return Err(Error::NoOptimum("unbounded")),
    }
    let n = problem.num_vars();
    let mut face = problem.clone();
    face.add_row(problem.objective.clone(), optimum.value.clone());

    for i in 0..n {
        let axis = Vector::unit(n, i);
        let lo = solve_lp(&face.with_objective(axis.clone(), Sense::Minimize))?;
        let hi = solve_lp(&face.with_objective(axis, Sense::Maximize))?;
        let witnesses = match (lo.status, hi.status) {
            (LpStatus::Optimal, LpStatus::Optimal) => {
                if lo.value.approx_eq(&hi.value) {
                    continue;
                }
                (lo.point, hi.point)
            }
            (LpStatus::Infeasible, _) | (_, LpStatus::Infeasible) => {
                return Err(Error::Internal(
                    "optimal face became infeasible after pinning".into(),
                ))
            }
            (lo_status, _) => {
                // the face is unbounded along coordinate i; step one unit off
                let step = if lo_status == LpStatus::Unbounded {
                    -S::one()
                } else {
                    S::one()
                };
                let anchor = optimum.point.clone();
                let target = anchor[i].clone() + step;
                let mut probe = face.with_objective(Vector::zeros(n), Sense::Minimize);
                probe.add_row(Vector::unit(n, i), target);
                let other = solve_lp(&probe)?;
                if !other.is_optimal() {
                    return Err(Error::Internal("unbounded face probe failed".into()));
                }
                (anchor, other.point)
            }
        };
        return Ok(SingletonCheck {
            singleton: false,
            optimum,
            witnesses: Some(witnesses),
        });
    }
    Ok(SingletonCheck {
        singleton: true,
        optimum,
        witnesses: None,
    })
}
