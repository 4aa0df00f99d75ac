//! Degree-limited extremal values `V_{E,n}(z0)` by linear programming.
//!
//! The Chebyshev problem `sup |P(z0)|` over `deg P <= n`, `|P| <= 1` on the
//! samples is linearized by replacing each modulus bound with the `K` tangent
//! half-planes `Re(e^{2πik/K} P(p)) <= 1`. Those rows are generated lazily:
//! the LP starts from four phases per sample and only the most violated
//! tangent at each offending sample is appended before a warm re-solve.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpSolution, LpStatus};
use crate::point::Point;
use crate::regions::SampledRegion;

pub const DEFAULT_PHASES: usize = 64;
pub const DEFAULT_ITERATION_LIMIT: usize = 500_000;
const MAX_ROUNDS: usize = 200;
const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("{samples} samples cannot pin down {monomials} monomials; need at least {required}")]
    TooFewSamples {
        samples: usize,
        monomials: usize,
        required: usize,
    },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("phase count must be a positive multiple of 4, got {0}")]
    Phases(usize),
    #[error("point of dimension {got} does not match region dimension {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("basis scaling radius must be positive and finite")]
    BasisRadius,
    #[error("evaluation point is not finite")]
    NonFinitePoint,
    #[error("samples do not determine polynomials of degree {0}: the Chebyshev LP is unbounded")]
    Unbounded(usize),
    #[error("trend degree {0} must be a positive multiple of 4")]
    TrendDegree(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Monomials `u^α`, `|α| <= n`, in the coordinates
/// `u_k = (z_k − center_k)/radii_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    degree: usize,
    center: Point,
    radii: [f64; 2],
    exponents: Vec<[u32; 2]>,
}

impl BasisSpec {
    pub fn new(degree: usize, center: Point, radius: f64) -> Result<Self, ExtremalError> {
        Self::with_radii(degree, center, [radius, radius])
    }

    /// Separate scaling radius per coordinate.
    pub fn with_radii(degree: usize, center: Point, radii: [f64; 2]) -> Result<Self, ExtremalError> {
        if degree == 0 {
            return Err(ExtremalError::ZeroDegree);
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(ExtremalError::BasisRadius);
        }
        let n = degree as u32;
        let exponents = if center.dim() == 1 {
            (0..=n).map(|a| [a, 0]).collect()
        } else {
            (0..=n).flat_map(|t| (0..=t).rev().map(move |a| [a, t - a])).collect()
        };
        Ok(Self {
            degree,
            center,
            radii,
            exponents,
        })
    }

    /// Centered at the sample centroid; each coordinate is scaled by the
    /// largest deviation of the samples in that coordinate, so that thin
    /// directions (a slab of width 4 inside a ball of radius 16) are not
    /// crushed into ill-conditioned high powers.
    pub fn for_region(region: &SampledRegion, degree: usize) -> Result<Self, ExtremalError> {
        let center = region.centroid();
        let mut radii = [0.0f64; 2];
        for p in region.points() {
            for (k, (z, c)) in p.coords().iter().zip(center.coords()).enumerate() {
                radii[k] = radii[k].max((z - c).norm());
            }
        }
        let fallback = radii.iter().copied().fold(0.0, f64::max);
        let fallback = if fallback > 0.0 { fallback } else { 1.0 };
        for r in &mut radii {
            if *r <= 1e-12 * fallback {
                *r = fallback;
            }
        }
        Self::with_radii(degree, center, radii)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radii(&self) -> [f64; 2] {
        self.radii
    }

    /// The same basis for the region scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self, ExtremalError> {
        Self::with_radii(self.degree, self.center.scale_real(s), [self.radii[0] * s, self.radii[1] * s])
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn exponents(&self) -> &[[u32; 2]] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `n + 1` for `m = 1`, `(n + 1)(n + 2)/2` for `m = 2`.
    pub fn monomial_count(dim: usize, degree: usize) -> usize {
        if dim == 1 {
            degree + 1
        } else {
            (degree + 1) * (degree + 2) / 2
        }
    }

    /// Values of every monomial at `z`.
    pub fn eval(&self, z: &Point) -> Vec<Complex64> {
        let d = z.sub(&self.center);
        let u: Vec<Complex64> = d.coords().iter().zip(self.radii).map(|(w, r)| w / r).collect();
        let powers = |w: Complex64| {
            let mut out = Vec::with_capacity(self.degree + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=self.degree {
                out.push(acc);
                acc *= w;
            }
            out
        };
        let p1 = powers(u[0]);
        let p2 = if self.dim() == 2 { powers(u[1]) } else { vec![Complex64::new(1.0, 0.0)] };
        self.exponents
            .iter()
            .map(|[a, b]| p1[*a as usize] * p2[*b as usize])
            .collect()
    }

    /// `Σ c_α u^α` at `z`.
    pub fn eval_poly(&self, coeffs: &[Complex64], z: &Point) -> Complex64 {
        self.eval(z).iter().zip(coeffs).map(|(m, c)| m * c).sum()
    }
}

/// One degree-`n` extremal value with its certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GreenEstimate {
    pub z0: Point,
    pub degree: usize,
    /// `max(0, raw_value)`, natural-log units.
    pub value: f64,
    /// `(1/n) log` of the LP optimum, unclamped.
    pub raw_value: f64,
    /// Coefficients of the optimal polynomial in `basis`.
    pub certificate: Vec<Complex64>,
    pub basis: BasisSpec,
    pub phases: usize,
    /// `log(1/cos(π/K))/n`.
    pub slack: f64,
    pub iterations: usize,
    /// Tangent rows in the final LP.
    pub rows: usize,
    pub converged: bool,
}

impl GreenEstimate {
    pub fn eval_certificate(&self, z: &Point) -> Complex64 {
        self.basis.eval_poly(&self.certificate, z)
    }
}

pub fn phase_slack(phases: usize, degree: usize) -> f64 {
    (1.0 / (PI / phases as f64).cos()).ln() / degree as f64
}

/// `V_{E,n}(z0)` on the region's own basis with `K` phases.
pub fn extremal_value(
    region: &SampledRegion,
    z0: &Point,
    degree: usize,
    phases: usize,
) -> Result<GreenEstimate, ExtremalError> {
    let basis = BasisSpec::for_region(region, degree)?;
    extremal_value_with(region, z0, &basis, phases, DEFAULT_ITERATION_LIMIT)
}

pub fn extremal_value_with(
    region: &SampledRegion,
    z0: &Point,
    basis: &BasisSpec,
    phases: usize,
    iteration_limit: usize,
) -> Result<GreenEstimate, ExtremalError> {
    let degree = basis.degree();
    if phases == 0 || !phases.is_multiple_of(4) {
        return Err(ExtremalError::Phases(phases));
    }
    for dim in [z0.dim(), basis.dim()] {
        if dim != region.dim() {
            return Err(ExtremalError::Dimension {
                got: dim,
                expected: region.dim(),
            });
        }
    }
    if !z0.is_finite() {
        return Err(ExtremalError::NonFinitePoint);
    }
    let monomials = basis.len();
    let required = 2 * monomials;
    if region.len() < required {
        return Err(ExtremalError::TooFewSamples {
            samples: region.len(),
            monomials,
            required,
        });
    }
    let slack = phase_slack(phases, degree);
    let at_sample = region
        .points()
        .iter()
        .any(|p| p.dist(z0) <= 1e-12 * z0.norm().max(1.0));
    if at_sample {
        let mut certificate = vec![Complex64::new(0.0, 0.0); monomials];
        certificate[0] = Complex64::new(1.0, 0.0);
        return Ok(GreenEstimate {
            z0: *z0,
            degree,
            value: 0.0,
            raw_value: 0.0,
            certificate,
            basis: basis.clone(),
            phases,
            slack,
            iterations: 0,
            rows: 0,
            converged: true,
        });
    }

    let values: Vec<Vec<Complex64>> = region.points().iter().map(|p| basis.eval(p)).collect();
    let target = basis.eval(z0);
    // Re(Σ c m) with c = x + iy is Σ Re(m) x − Im(m) y.
    let mut objective: Vec<f64> = target.iter().map(|m| m.re).chain(target.iter().map(|m| -m.im)).collect();
    let scale = objective.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    for c in &mut objective {
        *c /= scale;
    }
    let row = |s: usize, k: usize| -> Vec<f64> {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / phases as f64);
        let m: Vec<Complex64> = values[s].iter().map(|m| m * w).collect();
        m.iter().map(|m| m.re).chain(m.iter().map(|m| -m.im)).collect()
    };

    let mut lp = LinearProgram::maximize(objective)?;
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for s in 0..values.len() {
        for q in 0..4 {
            let k = q * phases / 4;
            used.insert((s, k));
            lp.add_row(&row(s, k), 1.0)?;
        }
    }
    let mut sol = lp::solve(&lp, iteration_limit);
    let mut iterations = sol.iterations;
    let mut rounds = 0;
    while sol.status == LpStatus::Optimal && rounds < MAX_ROUNDS {
        rounds += 1;
        let coeffs = to_complex(&sol.point, monomials);
        let mut new_rows = Vec::new();
        for (s, vals) in values.iter().enumerate() {
            let p: Complex64 = vals.iter().zip(&coeffs).map(|(m, c)| m * c).sum();
            let k = nearest_phase(p, phases);
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / phases as f64);
            if (w * p).re > 1.0 + VIOLATION_TOL && used.insert((s, k)) {
                new_rows.push((row(s, k), 1.0));
            }
        }
        if new_rows.is_empty() {
            break;
        }
        let remaining = iteration_limit.saturating_sub(iterations);
        sol = lp::resolve_with_added_constraints(&sol, &mut lp, new_rows, remaining)?;
        iterations += sol.iterations;
    }
    finish(sol, &lp, basis, z0, phases, slack, scale, iterations, rounds < MAX_ROUNDS)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    sol: LpSolution,
    lp: &LinearProgram,
    basis: &BasisSpec,
    z0: &Point,
    phases: usize,
    slack: f64,
    scale: f64,
    iterations: usize,
    settled: bool,
) -> Result<GreenEstimate, ExtremalError> {
    let degree = basis.degree();
    if sol.status == LpStatus::Unbounded {
        return Err(ExtremalError::Unbounded(degree));
    }
    let optimum = sol.objective_value * scale;
    // The zero polynomial is feasible, so a degenerate optimum is at worst 0.
    let raw_value = if optimum > 0.0 { optimum.ln() / degree as f64 } else { f64::NEG_INFINITY };
    Ok(GreenEstimate {
        z0: *z0,
        degree,
        value: raw_value.max(0.0),
        raw_value,
        certificate: to_complex(&sol.point, basis.len()),
        basis: basis.clone(),
        phases,
        slack,
        iterations,
        rows: lp.num_rows(),
        converged: sol.status == LpStatus::Optimal && settled,
    })
}

fn to_complex(x: &[f64], m: usize) -> Vec<Complex64> {
    (0..m).map(|j| Complex64::new(x[j], x[m + j])).collect()
}

/// The phase index maximizing `Re(e^{2πik/K} p)`.
fn nearest_phase(p: Complex64, phases: usize) -> usize {
    let k = (-p.arg() * phases as f64 / (2.0 * PI)).round() as i64;
    k.rem_euclid(phases as i64) as usize
}

/// Element-wise [`extremal_value`], in parallel, preserving order.
pub fn green_grid(
    region: &SampledRegion,
    grid: &[Point],
    degree: usize,
    phases: usize,
) -> Vec<Result<GreenEstimate, ExtremalError>> {
    grid.par_iter()
        .map(|z| extremal_value(region, z, degree, phases))
        .collect()
}

/// Doubles `K` until the slack is at most `target_slack`.
pub fn refine_phases(
    estimate: &GreenEstimate,
    region: &SampledRegion,
    target_slack: f64,
) -> Result<GreenEstimate, ExtremalError> {
    if estimate.slack <= target_slack {
        return Ok(estimate.clone());
    }
    let mut phases = estimate.phases;
    while phase_slack(phases, estimate.degree) > target_slack {
        phases *= 2;
    }
    extremal_value_with(region, &estimate.z0, &estimate.basis, phases, DEFAULT_ITERATION_LIMIT)
}

/// Richardson trend over degrees `n/4, n/2, n`.
///
/// Finite-degree values typically sit `O(1/n)` below the limit (for a
/// segment, `(1/n) log T_n` is low by about `log 2/n`); the first-order
/// extrapolation `2 v_n − v_{n/2}` removes that term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GreenTrend {
    pub estimates: Vec<GreenEstimate>,
    /// `max(0, 2 v_n − v_{n/2})`.
    pub value: f64,
    /// Disagreement between the two available extrapolations.
    pub spread: f64,
    pub converged: bool,
}

impl GreenTrend {
    pub fn finest(&self) -> &GreenEstimate {
        self.estimates.last().expect("trend holds three estimates")
    }

    /// Largest phase slack among the estimates.
    pub fn slack(&self) -> f64 {
        self.estimates.iter().map(|e| e.slack).fold(0.0, f64::max)
    }
}

pub fn green_trend(
    region: &SampledRegion,
    z0: &Point,
    degree: usize,
    phases: usize,
) -> Result<GreenTrend, ExtremalError> {
    if degree == 0 || !degree.is_multiple_of(4) {
        return Err(ExtremalError::TrendDegree(degree));
    }
    let estimates = [degree / 4, degree / 2, degree]
        .into_iter()
        .map(|n| extremal_value(region, z0, n, phases))
        .collect::<Result<Vec<_>, _>>()?;
    let v: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let fine = 2.0 * v[2] - v[1];
    let coarse = 2.0 * v[1] - v[0];
    let converged = estimates.iter().all(|e| e.converged);
    Ok(GreenTrend {
        estimates,
        value: fine.max(0.0),
        spread: (fine - coarse).abs(),
        converged,
    })
}
