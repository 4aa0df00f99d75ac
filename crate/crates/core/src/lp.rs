//! Dense linear programs `max c·x  s.t.  A x <= b` over free variables.
//!
//! The programs built by this crate have few variables (polynomial
//! coefficients) and very many rows (one per sample point and phase), and the
//! origin is always feasible. They are solved through the dual
//!
//! ```text
//! min b·y   s.t.  Aᵀ y = c,  y >= 0
//! ```
//!
//! with a revised simplex whose basis is only `d × d`. The simplex multipliers
//! of the dual are the primal point, so a reduced-cost scan is exactly a
//! feasibility scan of the primal rows, and appending rows to the primal only
//! appends nonbasic columns to the dual: the previous basis stays feasible and
//! can be resumed.
//!
//! Entering columns are priced by [`PivotRule`] (normalized Dantzig by
//! default, Bland on request). Leaving rows use the minimum ratio, with ties
//! broken lexicographically and then by lowest index. The dual right-hand
//! side carries a tiny deterministic perturbation so that the massively
//! degenerate vertices of Chebyshev programs cannot stall the iteration.

use nalgebra::DMatrix;
use thiserror::Error;

/// Threshold below which reduced costs and pivot entries count as zero.
pub const PIVOT_TOL: f64 = 1e-9;
/// Largest row violation tolerated in an optimal point.
pub const FEAS_TOL: f64 = 1e-8;

const ZERO_TOL: f64 = 1e-11;
const PERTURBATION: f64 = 1e-7;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program needs at least one variable")]
    NoVariables,
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("row {0} has a non-finite coefficient or bound")]
    NonFinite(usize),
    #[error("objective has a non-finite coefficient")]
    NonFiniteObjective,
    #[error("the origin violates row {0} (bound must be >= 0)")]
    OriginInfeasible(usize),
    #[error("warm start does not belong to this program")]
    ForeignWarmStart,
}

/// Entering-column choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotRule {
    /// Lowest index with a negative reduced cost.
    Bland,
    /// Most negative reduced cost per unit row norm, lowest index on ties.
    #[default]
    Dantzig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// `objective·x → max/min` subject to `row_i·x <= bound_i`, `x` free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    sense: Sense,
    coeffs: Vec<f64>,
    bounds: Vec<f64>,
    /// Per-row `(max |a_ij|, |a_i|₂)`, cached for pricing.
    scales: Vec<(f64, f64)>,
    pivot_rule: PivotRule,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, sense: Sense) -> Result<Self, LpError> {
        if objective.is_empty() {
            return Err(LpError::NoVariables);
        }
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFiniteObjective);
        }
        Ok(Self {
            objective,
            sense,
            coeffs: Vec::new(),
            bounds: Vec::new(),
            scales: Vec::new(),
            pivot_rule: PivotRule::default(),
        })
    }

    pub fn with_pivot_rule(mut self, rule: PivotRule) -> Self {
        self.pivot_rule = rule;
        self
    }

    pub fn pivot_rule(&self) -> PivotRule {
        self.pivot_rule
    }

    pub fn maximize(objective: Vec<f64>) -> Result<Self, LpError> {
        Self::new(objective, Sense::Maximize)
    }

    /// Appends `row·x <= bound` and returns its index.
    pub fn add_row(&mut self, row: &[f64], bound: f64) -> Result<usize, LpError> {
        let index = self.bounds.len();
        if row.len() != self.dim() {
            return Err(LpError::RowLength {
                row: index,
                got: row.len(),
                expected: self.dim(),
            });
        }
        if !bound.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite(index));
        }
        if bound < 0.0 {
            return Err(LpError::OriginInfeasible(index));
        }
        self.coeffs.extend_from_slice(row);
        self.bounds.push(bound);
        let max = row.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        self.scales.push((max, dot(row, row).sqrt()));
        Ok(index)
    }

    pub fn with_rows<'a, I>(mut self, rows: I) -> Result<Self, LpError>
    where
        I: IntoIterator<Item = (&'a [f64], f64)>,
    {
        for (row, bound) in rows {
            self.add_row(row, bound)?;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.bounds.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coeffs[i * d..(i + 1) * d]
    }

    pub fn bound(&self, i: usize) -> f64 {
        self.bounds[i]
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Largest `row·x - bound` over all rows (`-inf` without rows).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        (0..self.num_rows())
            .map(|i| dot(self.row(i), x) - self.bounds[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
    IterationLimit,
}

/// Basis of a finished solve, reusable after rows are appended.
#[derive(Clone, Debug)]
pub struct WarmStart {
    basis: Vec<Var>,
    rows: usize,
    dim: usize,
    perturbed: bool,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// Improving direction when `status == Unbounded`: `A ray <= 0`, `c·ray > 0`.
    pub ray: Option<Vec<f64>>,
    warm: Option<WarmStart>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn warm_start(&self) -> Option<&WarmStart> {
        self.warm.as_ref()
    }
}

pub fn solve(lp: &LinearProgram, iteration_limit: usize) -> LpSolution {
    let sol = Simplex::cold(lp, iteration_limit, true).run();
    if sol.status != LpStatus::Unbounded {
        return sol;
    }
    // The perturbation can push an objective lying on a face of the row cone
    // outside it; unboundedness is only reported for the exact objective.
    let mut exact = Simplex::cold(lp, iteration_limit.saturating_sub(sol.iterations), false).run();
    exact.iterations += sol.iterations;
    exact
}

/// Deterministic relative perturbation of the dual right-hand side.
///
/// Degenerate vertices are the rule here (real sample sets, real evaluation
/// points), and under rounding they let even anti-cycling rules stall. A
/// generic perturbation of size `PERTURBATION·|c|` makes every basic value
/// distinct. The primal point `B⁻ᵀ b_B` does not depend on the right-hand
/// side, so the reported vertex is exact and its objective is within
/// `2·PERTURBATION·|c|·|x|_1` of the optimum.
fn perturb(c: &[f64]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    c.iter()
        .enumerate()
        .map(|(i, v)| {
            let xi = 1.0 + (i as f64 * 0.618_033_988_749_894_9).fract();
            v + PERTURBATION * scale * xi
        })
        .collect()
}

/// Appends `new_rows` to `lp` and re-solves, resuming from `previous` when it
/// holds an optimal basis of the program before the append.
pub fn resolve_with_added_constraints<I, R>(
    previous: &LpSolution,
    lp: &mut LinearProgram,
    new_rows: I,
    iteration_limit: usize,
) -> Result<LpSolution, LpError>
where
    I: IntoIterator<Item = (R, f64)>,
    R: AsRef<[f64]>,
{
    let before = lp.num_rows();
    for (row, bound) in new_rows {
        if let Err(e) = lp.add_row(row.as_ref(), bound) {
            lp.coeffs.truncate(before * lp.dim());
            lp.bounds.truncate(before);
            lp.scales.truncate(before);
            return Err(e);
        }
    }
    match previous.warm.as_ref() {
        Some(warm) if previous.is_optimal() => {
            if warm.dim != lp.dim() || warm.rows > before {
                return Err(LpError::ForeignWarmStart);
            }
            Ok(resume(lp, warm, iteration_limit))
        }
        _ => Ok(solve(lp, iteration_limit)),
    }
}

/// Solves `lp` starting from `warm`, falling back to a cold start if the
/// stored basis is no longer usable.
pub fn resume(lp: &LinearProgram, warm: &WarmStart, iteration_limit: usize) -> LpSolution {
    match Simplex::from_warm(lp, warm, iteration_limit) {
        Some(mut s) => s.run_phase_two(),
        None => solve(lp, iteration_limit),
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Row(usize),
    Art(usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    /// Right-hand side of the dual equations: the objective in maximize
    /// sense, possibly perturbed.
    rhs: Vec<f64>,
    perturbed: bool,
    d: usize,
    m: usize,
    art_sign: Vec<f64>,
    basis: Vec<Var>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    yb: Vec<f64>,
    iterations: usize,
    limit: usize,
    since_refactor: usize,
    pi: Vec<f64>,
}

impl<'a> Simplex<'a> {
    fn cold(lp: &'a LinearProgram, limit: usize, perturbed: bool) -> Self {
        let d = lp.dim();
        let m = lp.num_rows();
        let c: Vec<f64> = match lp.sense {
            Sense::Maximize => lp.objective.clone(),
            Sense::Minimize => lp.objective.iter().map(|v| -v).collect(),
        };
        let rhs = if perturbed { perturb(&c) } else { c.clone() };
        let art_sign: Vec<f64> = rhs.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut binv = vec![0.0; d * d];
        for i in 0..d {
            binv[i * d + i] = art_sign[i];
        }
        let yb = rhs.iter().map(|v| v.abs()).collect();
        Self {
            lp,
            rhs,
            perturbed,
            d,
            m,
            art_sign,
            basis: (0..d).map(Var::Art).collect(),
            in_basis: vec![false; m],
            binv,
            yb,
            iterations: 0,
            limit,
            since_refactor: 0,
            pi: vec![0.0; d],
        }
    }

    fn from_warm(lp: &'a LinearProgram, warm: &WarmStart, limit: usize) -> Option<Self> {
        let mut s = Self::cold(lp, limit, warm.perturbed);
        if warm.dim != s.d || warm.basis.len() != s.d {
            return None;
        }
        s.basis = warm.basis.clone();
        for v in &s.basis {
            if let Var::Row(j) = *v {
                if j >= s.m {
                    return None;
                }
                s.in_basis[j] = true;
            }
        }
        if !s.refactor() {
            return None;
        }
        if s.yb.iter().any(|&y| y < -FEAS_TOL) {
            return None;
        }
        Some(s)
    }

    fn column(&self, v: Var) -> Vec<f64> {
        match v {
            Var::Row(j) => self.lp.row(j).to_vec(),
            Var::Art(i) => {
                let mut col = vec![0.0; self.d];
                col[i] = self.art_sign[i];
                col
            }
        }
    }

    fn order(&self, v: Var) -> usize {
        match v {
            Var::Row(j) => j,
            Var::Art(i) => self.m + i,
        }
    }

    fn cost(&self, v: Var, phase: Phase) -> f64 {
        match (v, phase) {
            (Var::Row(_), Phase::One) => 0.0,
            (Var::Art(_), Phase::One) => 1.0,
            (Var::Row(j), Phase::Two) => self.lp.bounds[j],
            (Var::Art(_), Phase::Two) => 0.0,
        }
    }

    /// Rebuilds `B⁻¹` and the basic values from scratch.
    fn refactor(&mut self) -> bool {
        let d = self.d;
        let mut b = DMatrix::<f64>::zeros(d, d);
        for (k, &v) in self.basis.iter().enumerate() {
            let col = self.column(v);
            for i in 0..d {
                b[(i, k)] = col[i];
            }
        }
        let Some(inv) = b.try_inverse() else {
            return false;
        };
        for i in 0..d {
            for k in 0..d {
                self.binv[i * d + k] = inv[(i, k)];
            }
        }
        for i in 0..d {
            let y = dot(&self.binv[i * d..(i + 1) * d], &self.rhs);
            self.yb[i] = y;
        }
        self.snap();
        self.since_refactor = 0;
        true
    }

    /// Rounds basic values within `ZERO_TOL` of zero to exactly zero, so that
    /// degenerate ties are recognized as ties and the anti-cycling rule holds.
    fn snap(&mut self) {
        let scale = 1.0 + self.yb.iter().fold(0.0f64, |a, y| a.max(y.abs()));
        for y in &mut self.yb {
            if y.abs() <= ZERO_TOL * scale || (*y < 0.0 && *y > -FEAS_TOL) {
                *y = 0.0;
            }
        }
    }

    fn update_multipliers(&mut self, phase: Phase) {
        let d = self.d;
        self.pi.iter_mut().for_each(|p| *p = 0.0);
        for i in 0..d {
            let cb = self.cost(self.basis[i], phase);
            if cb != 0.0 {
                let row = &self.binv[i * d..(i + 1) * d];
                for (p, r) in self.pi.iter_mut().zip(row) {
                    *p += cb * r;
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize, phase: Phase) -> f64 {
        self.cost(Var::Row(j), phase) - dot(self.lp.row(j), &self.pi)
    }

    /// Entering column among those with a reduced cost below `-PIVOT_TOL`,
    /// measured relative to the magnitudes entering it.
    fn entering(&self, phase: Phase, skip: &[usize]) -> Option<usize> {
        let pi_max = self.pi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.m {
            if self.in_basis[j] || skip.contains(&j) {
                continue;
            }
            let (row_max, row_norm) = self.lp.scales[j];
            let tol = PIVOT_TOL * (1.0 + self.cost(Var::Row(j), phase).abs()).max(pi_max * row_max);
            let rc = self.reduced_cost(j, phase);
            if rc >= -tol {
                continue;
            }
            match self.lp.pivot_rule {
                PivotRule::Bland => return Some(j),
                PivotRule::Dantzig => {
                    let score = rc / row_norm;
                    if best.is_none_or(|(_, b)| score < b) {
                        best = Some((j, score));
                    }
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn direction(&self, col: &[f64]) -> Vec<f64> {
        let d = self.d;
        (0..d)
            .map(|i| dot(&self.binv[i * d..(i + 1) * d], col))
            .collect()
    }

    /// Minimum-ratio row, ties broken lexicographically on the scaled rows of
    /// `[y_B | B⁻¹]` and then by lowest variable index. The lexicographic
    /// rule keeps degenerate pivoting from cycling even when rounding blurs
    /// reduced-cost signs.
    fn ratio_test(&self, u: &[f64]) -> Option<usize> {
        let d = self.d;
        let mut best: Option<(usize, f64)> = None;
        for (i, &ui) in u.iter().enumerate() {
            if ui <= PIVOT_TOL {
                continue;
            }
            let ratio = self.yb[i].max(0.0) / ui;
            let Some((bi, br)) = best else {
                best = Some((i, ratio));
                continue;
            };
            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
            if !tie {
                if ratio < br {
                    best = Some((i, ratio));
                }
                continue;
            }
            let mut decided = false;
            for k in 0..d {
                let a = self.binv[i * d + k] / ui;
                let b = self.binv[bi * d + k] / u[bi];
                if (a - b).abs() > 1e-11 * (1.0 + a.abs().max(b.abs())) {
                    if a < b {
                        best = Some((i, ratio.min(br)));
                    }
                    decided = true;
                    break;
                }
            }
            if !decided && self.order(self.basis[i]) < self.order(self.basis[bi]) {
                best = Some((i, ratio.min(br)));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, entering: Var, u: &[f64]) {
        let d = self.d;
        let ur = u[r];
        let theta = self.yb[r].max(0.0) / ur;
        for k in 0..d {
            self.binv[r * d + k] /= ur;
        }
        let (before, rest) = self.binv.split_at_mut(r * d);
        let (pivot_row, after) = rest.split_at_mut(d);
        for (i, row) in before
            .chunks_exact_mut(d)
            .enumerate()
            .chain(after.chunks_exact_mut(d).enumerate().map(|(i, row)| (i + r + 1, row)))
        {
            let ui = u[i];
            if ui != 0.0 {
                for k in 0..d {
                    row[k] -= ui * pivot_row[k];
                }
            }
        }
        for (i, (y, ui)) in self.yb.iter_mut().zip(u.iter()).enumerate() {
            if i != r {
                *y -= ui * theta;
            }
        }
        self.yb[r] = theta;
        self.snap();
        if let Var::Row(j) = self.basis[r] {
            self.in_basis[j] = false;
        }
        if let Var::Row(j) = entering {
            self.in_basis[j] = true;
        }
        self.basis[r] = entering;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    fn iterate(&mut self, phase: Phase) -> Step {
        // Columns whose apparent improvement vanished under a fresh
        // factorization; cleared after every successful pivot.
        let mut skip: Vec<usize> = Vec::new();
        loop {
            if self.iterations >= self.limit {
                return Step::Limit;
            }
            self.update_multipliers(phase);
            let Some(j) = self.entering(phase, &skip) else {
                // Confirm against a fresh factorization before declaring optimality.
                if self.since_refactor > 0 && self.refactor() {
                    skip.clear();
                    self.update_multipliers(phase);
                    if self.entering(phase, &skip).is_some() {
                        continue;
                    }
                }
                return Step::Optimal;
            };
            let u = self.direction(self.lp.row(j));
            let Some(r) = self.ratio_test(&u) else {
                if self.since_refactor > 0 && self.refactor() {
                    continue;
                }
                if phase == Phase::One || self.max_abs(&u) <= PIVOT_TOL {
                    // Phase one is bounded below, and a negligible direction
                    // cannot be a ray: the improvement was rounding noise.
                    skip.push(j);
                    continue;
                }
                return Step::Unbounded;
            };
            self.pivot(r, Var::Row(j), &u);
            skip.clear();
        }
    }

    fn max_abs(&self, u: &[f64]) -> f64 {
        u.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Swaps zero-valued artificials out of the basis where a row column can
    /// replace them; the ones left behind sit on redundant equations.
    fn expel_artificials(&mut self) {
        let d = self.d;
        for r in 0..d {
            if !matches!(self.basis[r], Var::Art(_)) {
                continue;
            }
            let binv_r = self.binv[r * d..(r + 1) * d].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.m {
                if self.in_basis[j] {
                    continue;
                }
                let v = dot(&binv_r, self.lp.row(j)).abs();
                if v > 1e-7 && best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((j, v));
                }
            }
            if let Some((j, _)) = best {
                let u = self.direction(self.lp.row(j));
                self.yb[r] = 0.0;
                self.pivot(r, Var::Row(j), &u);
            }
        }
    }

    fn run(&mut self) -> LpSolution {
        match self.iterate(Phase::One) {
            Step::Limit => return self.finish(LpStatus::IterationLimit, None),
            Step::Unbounded => unreachable!("phase one never reports a ray"),
            Step::Optimal => {}
        }
        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.yb)
            .filter(|(v, _)| matches!(v, Var::Art(_)))
            .map(|(_, y)| y.max(0.0))
            .sum();
        let scale = 1.0 + self.rhs.iter().map(|v| v.abs()).sum::<f64>();
        if infeasibility > FEAS_TOL * scale {
            // Phase-one multipliers certify `A π <= 0`, `c·π > 0`.
            self.update_multipliers(Phase::One);
            let ray = self.pi.clone();
            return self.finish(LpStatus::Unbounded, Some(ray));
        }
        self.expel_artificials();
        self.run_phase_two()
    }

    fn run_phase_two(&mut self) -> LpSolution {
        match self.iterate(Phase::Two) {
            Step::Optimal => self.finish(LpStatus::Optimal, None),
            Step::Unbounded => self.finish(LpStatus::Infeasible, None),
            Step::Limit => self.finish(LpStatus::IterationLimit, None),
        }
    }

    fn finish(&mut self, status: LpStatus, ray: Option<Vec<f64>>) -> LpSolution {
        let point = match status {
            LpStatus::Optimal | LpStatus::IterationLimit => {
                self.update_multipliers(Phase::Two);
                self.pi.clone()
            }
            _ => vec![0.0; self.d],
        };
        let objective_value = self.lp.objective_at(&point);
        let warm = (status == LpStatus::Optimal).then(|| WarmStart {
            basis: self.basis.clone(),
            rows: self.m,
            dim: self.d,
            perturbed: self.perturbed,
        });
        LpSolution {
            status,
            point,
            objective_value,
            iterations: self.iterations,
            ray,
            warm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(obj: &[f64], rows: &[(&[f64], f64)]) -> LinearProgram {
        LinearProgram::maximize(obj.to_vec())
            .unwrap()
            .with_rows(rows.iter().copied())
            .unwrap()
    }

    #[test]
    fn single_bound() {
        let sol = solve(&lp(&[1.0], &[(&[1.0], 1.0)]), 100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.point[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_polytope() {
        // Vertices of {x<=1, y<=2, x+y<=2.5} in the positive direction:
        // (1,1.5) and (0.5,2), both with x+y = 2.5.
        let p = lp(
            &[1.0, 1.0],
            &[(&[1.0, 0.0], 1.0), (&[0.0, 1.0], 2.0), (&[1.0, 1.0], 2.5)],
        );
        let sol = solve(&p, 100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 2.5).abs() < 1e-10);
        assert!(p.max_violation(&sol.point) <= FEAS_TOL);
    }

    #[test]
    fn no_rows_is_unbounded_with_ray() {
        let sol = solve(&lp(&[1.0], &[]), 100);
        assert_eq!(sol.status, LpStatus::Unbounded);
        let ray = sol.ray.unwrap();
        assert!(ray[0] > 0.0);
    }

    #[test]
    fn unbounded_ray_is_improving() {
        // x <= 1 leaves y free.
        let p = lp(&[1.0, 1.0], &[(&[1.0, 0.0], 1.0)]);
        let sol = solve(&p, 100);
        assert_eq!(sol.status, LpStatus::Unbounded);
        let ray = sol.ray.unwrap();
        assert!(dot(&ray, p.objective()) > 0.0);
        assert!(dot(p.row(0), &ray) <= 1e-12);
    }

    #[test]
    fn minimize_sense() {
        let p = LinearProgram::new(vec![1.0], Sense::Minimize)
            .unwrap()
            .with_rows([(&[-1.0][..], 3.0)])
            .unwrap();
        let sol = solve(&p, 100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value + 3.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_row_rejected() {
        let mut p = LinearProgram::maximize(vec![1.0, 2.0]).unwrap();
        assert_eq!(
            p.add_row(&[1.0], 1.0),
            Err(LpError::RowLength {
                row: 0,
                got: 1,
                expected: 2
            })
        );
        assert_eq!(p.add_row(&[1.0, 0.0], -1.0), Err(LpError::OriginInfeasible(0)));
        assert_eq!(p.add_row(&[f64::NAN, 0.0], 1.0), Err(LpError::NonFinite(0)));
        assert!(LinearProgram::maximize(vec![]).is_err());
    }

    #[test]
    fn iteration_limit_flags() {
        let p = lp(
            &[1.0, 1.0],
            &[(&[1.0, 0.0], 1.0), (&[0.0, 1.0], 2.0), (&[1.0, 1.0], 2.5)],
        );
        let sol = solve(&p, 1);
        assert_eq!(sol.status, LpStatus::IterationLimit);
        assert_eq!(sol.point.len(), 2);
    }

    #[test]
    fn redundant_row_keeps_optimum() {
        let mut p = lp(&[1.0], &[(&[1.0], 1.0)]);
        let first = solve(&p, 100);
        let again = resolve_with_added_constraints(&first, &mut p, [(vec![1.0], 5.0)], 100).unwrap();
        assert_eq!(again.status, LpStatus::Optimal);
        assert!((again.objective_value - 1.0).abs() < 1e-12);
        assert_eq!(p.num_rows(), 2);
    }

    #[test]
    fn tightening_row() {
        let mut p = lp(&[1.0], &[(&[1.0], 1.0)]);
        let first = solve(&p, 100);
        let again = resolve_with_added_constraints(&first, &mut p, [(vec![1.0], 0.5)], 100).unwrap();
        assert!((again.objective_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn failed_append_leaves_program_untouched() {
        let mut p = lp(&[1.0], &[(&[1.0], 1.0)]);
        let first = solve(&p, 100);
        let err = resolve_with_added_constraints(
            &first,
            &mut p,
            [(vec![1.0], 2.0), (vec![1.0, 1.0], 1.0)],
            100,
        );
        assert!(err.is_err());
        assert_eq!(p.num_rows(), 1);
    }

    #[test]
    fn rank_deficient_rows() {
        // Only x+y is constrained; the objective lies in the row space.
        let p = lp(&[1.0, 1.0], &[(&[1.0, 1.0], 1.0), (&[2.0, 2.0], 3.0)]);
        let sol = solve(&p, 100);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 1.0).abs() < 1e-10);
    }

    /// Box constraints `|Re P|, |Im P| <= 1` for a quartic on real nodes,
    /// maximized at a real point: a highly degenerate dual.
    fn degenerate_chebyshev(rule: PivotRule) -> LinearProgram {
        let m = 5;
        let z0: f64 = 1.5;
        let obj: Vec<f64> = (0..m).map(|a| z0.powi(a as i32)).chain(std::iter::repeat_n(0.0, m)).collect();
        let mut p = LinearProgram::maximize(obj).unwrap().with_pivot_rule(rule);
        for k in 0..60 {
            let x = -(std::f64::consts::PI * k as f64 / 59.0).cos();
            for (c, s) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
                let row: Vec<f64> = (0..m)
                    .map(|a| c * x.powi(a as i32))
                    .chain((0..m).map(|a| -s * x.powi(a as i32)))
                    .collect();
                p.add_row(&row, 1.0).unwrap();
            }
        }
        p
    }

    #[test]
    fn degenerate_program_under_both_rules() {
        // T_4 is feasible, so the optimum is at least T_4(1.5) = 23.5; the
        // bound only holds on the nodes, which lets the optimum exceed it a little.
        let values: Vec<f64> = [PivotRule::Bland, PivotRule::Dantzig]
            .into_iter()
            .map(|rule| {
                let p = degenerate_chebyshev(rule);
                let sol = solve(&p, 1_000_000);
                assert_eq!(sol.status, LpStatus::Optimal, "{rule:?}");
                assert!(p.max_violation(&sol.point) <= FEAS_TOL);
                sol.objective_value
            })
            .collect();
        assert!(values[0] >= 23.5 - 1e-9 && values[0] < 24.0);
        assert!((values[0] - values[1]).abs() < 1e-8);
    }
}
