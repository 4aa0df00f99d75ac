//! Sequences of genus-zero entire functions built from slice zero data.
//!
//! Every family has the form `P_n(z) = f_n(ℓ(z))` for a linear form `ℓ`, with
//!
//! ```text
//! f_n(u) = A_n u^α ∏_j (1 − u/c_{n,j})
//! ```
//!
//! so the slice `P_{n,λ}(w) = P_n(wλ)` has zeros `w_{n,λ,j} = c_{n,j}/ℓ(λ)`,
//! leading coefficient `a_{n,λ} = A_n ℓ(λ)^α` and vanishing order `α`.
//! Products are summed as logarithms throughout; `n = 10⁴` factors of
//! modulus 10³ would overflow otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{LinearForm, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Genus0Error {
    #[error("invalid family: {0}")]
    Invalid(String),
    #[error("no table entry for index n = {0}")]
    MissingIndex(usize),
    #[error("zeros beyond the declared table start at |w| = {tail_radius}; counting up to t = {t} is uncertain")]
    UncertainCount { t: f64, tail_radius: f64 },
    #[error("zeros beyond the declared table start at |w| = {tail_radius}; the tail from R = {radius} is uncertain")]
    UncertainTail { radius: f64, tail_radius: f64 },
    #[error("P_n vanishes identically on the slice through {0:?}")]
    DegenerateSlice(Point),
    #[error("point has dimension {got}, family has {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("1 − C_m(1 − β) = {0} must be positive")]
    Exponent(f64),
    #[error("invalid argument: {0}")]
    Argument(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Genus0Error> {
    Err(Genus0Error::Invalid(msg.into()))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zeros `c_{n,j}` of a linear-form product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ZeroRule {
    /// `c_{n,j} = scale·j` for `j = 1..n`.
    Arithmetic { scale: f64 },
    /// The same list for every `n`.
    Fixed { values: Vec<Complex64> },
}

/// Undeclared zeros all satisfy `|c| >= radius` and `Σ 1/|c| <= sum_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub radius: f64,
    pub sum_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: usize,
    #[serde(default = "one")]
    pub leading: Complex64,
    #[serde(default)]
    pub order: u32,
    #[serde(default)]
    pub zeros: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailBound>,
}

fn one() -> Complex64 {
    c(1.0, 0.0)
}

fn default_scale() -> f64 {
    1.0
}

fn default_half_width() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `∏_j (1 − ℓ(z)/c_{n,j})`.
    LinearFormProduct { form: LinearForm, zeros: ZeroRule },
    /// `(1 − ℓ(z)/n)^n`.
    ExponentialApproximant { form: LinearForm },
    /// `scale^n · T_n(ℓ(z)/half_width)`; the defaults give sup 1 on
    /// `ℓ ∈ [−2, 2]`.
    ChebyshevSlab {
        form: LinearForm,
        #[serde(default = "default_scale")]
        scale: f64,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    /// Explicit `A_n, α_n, c_{n,j}` per index, with an optional declared tail.
    CustomZeroTable { form: LinearForm, entries: Vec<TableEntry> },
    /// `P_n ≡ value`.
    Constant {
        dimension: usize,
        #[serde(default = "one")]
        value: Complex64,
    },
}

/// `k_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WeightRule {
    /// `k_n = scale·n`.
    Linear { scale: f64 },
    /// `k_n = value`.
    Constant { value: f64 },
}

impl Default for WeightRule {
    fn default() -> Self {
        WeightRule::Linear { scale: 1.0 }
    }
}

impl WeightRule {
    pub fn weight(&self, n: usize) -> f64 {
        match *self {
            WeightRule::Linear { scale } => scale * n as f64,
            WeightRule::Constant { value } => value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenusZeroFamily {
    #[serde(flatten)]
    pub kind: FamilyKind,
    #[serde(default)]
    pub weights: WeightRule,
}

/// `f_n(u) = A u^α ∏ (1 − u/c_j)^{m_j}`, zeros sorted by modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub log_abs_leading: f64,
    pub leading_arg: f64,
    pub order: u32,
    pub zeros: Vec<(Complex64, u32)>,
    pub tail: Option<TailBound>,
}

/// The slice `w ↦ P_n(wλ) = a w^α ∏ (1 − w/w_j)^{m_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceData {
    pub log_abs_a: f64,
    pub arg_a: f64,
    pub alpha: u32,
    /// `(w_j, multiplicity)` sorted by `|w_j|`.
    pub zeros: Vec<(Complex64, u32)>,
    /// Declared tail, rescaled to `w`.
    pub tail: Option<TailBound>,
}

impl SliceData {
    /// `η(t, λ)`: zeros with `|w| <= t`, with multiplicity, plus `α`.
    pub fn counting(&self, t: f64) -> Result<u64, Genus0Error> {
        if let Some(tail) = self.tail {
            if t >= tail.radius {
                return Err(Genus0Error::UncertainCount {
                    t,
                    tail_radius: tail.radius,
                });
            }
        }
        let k = self.zeros.partition_point(|(w, _)| w.norm() <= t);
        Ok(self.alpha as u64 + self.zeros[..k].iter().map(|(_, m)| *m as u64).sum::<u64>())
    }

    /// `Σ_{|w_j| >= R} 1/w_j`, with the declared tail's bound on the error.
    pub fn tail_sum(&self, radius: f64) -> Result<TailSum, Genus0Error> {
        let mut bound = 0.0;
        if let Some(tail) = self.tail {
            if radius > tail.radius {
                return Err(Genus0Error::UncertainTail {
                    radius,
                    tail_radius: tail.radius,
                });
            }
            bound = tail.sum_bound;
        }
        let k = self.zeros.partition_point(|(w, _)| w.norm() < radius);
        let value = self.zeros[k..].iter().map(|(w, m)| *m as f64 / w).sum();
        Ok(TailSum { value, bound })
    }

    /// `Σ_{|w_j| >= R} 1/|w_j|`, ignoring any undeclared tail.
    pub fn abs_tail_sum(&self, radius: f64) -> f64 {
        let k = self.zeros.partition_point(|(w, _)| w.norm() < radius);
        self.zeros[k..].iter().map(|(w, m)| *m as f64 / w.norm()).sum()
    }

    /// `log|P_{n,λ}(w)|`; `−∞` at a zero.
    pub fn log_abs(&self, w: Complex64) -> f64 {
        if w.norm() == 0.0 {
            return if self.alpha > 0 { f64::NEG_INFINITY } else { self.log_abs_a };
        }
        self.log_abs_a
            + self.alpha as f64 * w.norm().ln()
            + self
                .zeros
                .iter()
                .map(|(z, m)| *m as f64 * (1.0 - w / z).norm().ln())
                .sum::<f64>()
    }

    /// Jensen's formula: the mean of `log|P_{n,λ}|` on the unit circle.
    pub fn jensen_mean(&self) -> f64 {
        self.log_abs_a
            + self
                .zeros
                .iter()
                .filter(|(w, _)| w.norm() < 1.0)
                .map(|(w, m)| -(*m as f64) * w.norm().ln())
                .sum::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    pub value: Complex64,
    /// `|true − value| <= bound`; zero for finite lists.
    pub bound: f64,
}

/// `P_n(z)` in polar log form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub log_abs: f64,
    pub arg: f64,
    /// Bound on `|P/P̃ − 1|` from the omitted factors; infinite when an
    /// omitted zero may be closer to the origin than `ℓ(z)`.
    pub relative_error: f64,
    pub factors_used: usize,
}

impl Evaluation {
    pub fn value(&self) -> Complex64 {
        if self.log_abs == f64::NEG_INFINITY {
            return c(0.0, 0.0);
        }
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }
}

impl GenusZeroFamily {
    pub fn new(kind: FamilyKind, weights: WeightRule) -> Result<Self, Genus0Error> {
        let f = Self { kind, weights };
        f.validate()?;
        Ok(f)
    }

    /// `∏_{j=1}^{n} (1 − ℓ(z)/(scale·j))`.
    pub fn arithmetic_product(form: LinearForm, scale: f64) -> Self {
        Self {
            kind: FamilyKind::LinearFormProduct {
                form,
                zeros: ZeroRule::Arithmetic { scale },
            },
            weights: WeightRule::default(),
        }
    }

    pub fn exponential_approximant(form: LinearForm) -> Self {
        Self {
            kind: FamilyKind::ExponentialApproximant { form },
            weights: WeightRule::default(),
        }
    }

    pub fn chebyshev_slab(form: LinearForm) -> Self {
        Self {
            kind: FamilyKind::ChebyshevSlab {
                form,
                scale: default_scale(),
                half_width: default_half_width(),
            },
            weights: WeightRule::default(),
        }
    }

    pub fn constant(dimension: usize) -> Self {
        Self {
            kind: FamilyKind::Constant {
                dimension,
                value: one(),
            },
            weights: WeightRule::default(),
        }
    }

    /// A single one-variable function `A w^α ∏ (1 − w/w_j)` with `k_n = 1`.
    pub fn single(leading: Complex64, order: u32, zeros: Vec<Complex64>) -> Self {
        Self {
            kind: FamilyKind::CustomZeroTable {
                form: LinearForm::coordinate(1, 0),
                entries: vec![TableEntry {
                    n: 1,
                    leading,
                    order,
                    zeros,
                    tail: None,
                }],
            },
            weights: WeightRule::Constant { value: 1.0 },
        }
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            FamilyKind::Constant { dimension, .. } => *dimension,
            FamilyKind::LinearFormProduct { form, .. }
            | FamilyKind::ExponentialApproximant { form }
            | FamilyKind::ChebyshevSlab { form, .. }
            | FamilyKind::CustomZeroTable { form, .. } => form.dim(),
        }
    }

    fn form(&self) -> Option<&LinearForm> {
        match &self.kind {
            FamilyKind::Constant { .. } => None,
            FamilyKind::LinearFormProduct { form, .. }
            | FamilyKind::ExponentialApproximant { form }
            | FamilyKind::ChebyshevSlab { form, .. }
            | FamilyKind::CustomZeroTable { form, .. } => Some(form),
        }
    }

    pub fn validate(&self) -> Result<(), Genus0Error> {
        if !(1..=2).contains(&self.dimension()) {
            return invalid(format!("dimension must be 1 or 2, got {}", self.dimension()));
        }
        if let Some(form) = self.form() {
            if form.is_zero() || form.coeffs().iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
                return invalid("linear form must be finite and nonzero");
            }
        }
        let nonzero = |z: &Complex64| z.norm() > 0.0 && z.re.is_finite() && z.im.is_finite();
        match &self.kind {
            FamilyKind::LinearFormProduct { zeros, .. } => match zeros {
                ZeroRule::Arithmetic { scale } => {
                    if !(scale.is_finite() && *scale != 0.0) {
                        return invalid("zero scale must be finite and nonzero");
                    }
                }
                ZeroRule::Fixed { values } => {
                    if !values.iter().all(nonzero) {
                        return invalid("zeros must be finite and nonzero");
                    }
                }
            },
            FamilyKind::ExponentialApproximant { .. } => {}
            FamilyKind::ChebyshevSlab { scale, half_width, .. } => {
                if !(scale.is_finite() && *scale > 0.0 && half_width.is_finite() && *half_width > 0.0) {
                    return invalid("chebyshev scale and half-width must be positive");
                }
            }
            FamilyKind::CustomZeroTable { entries, .. } => {
                if entries.is_empty() {
                    return invalid("zero table is empty");
                }
                for e in entries {
                    if e.n == 0 {
                        return invalid("table indices start at 1");
                    }
                    if !nonzero(&e.leading) {
                        return invalid(format!("leading coefficient of entry {} must be finite and nonzero", e.n));
                    }
                    if !e.zeros.iter().all(nonzero) {
                        return invalid(format!("zeros of entry {} must be finite and nonzero", e.n));
                    }
                    if let Some(t) = e.tail {
                        if !(t.radius.is_finite() && t.radius > 0.0 && t.sum_bound.is_finite() && t.sum_bound >= 0.0) {
                            return invalid(format!(
                                "tail of entry {} must have a positive radius and a finite sum bound",
                                e.n
                            ));
                        }
                    }
                }
                let mut ns: Vec<usize> = entries.iter().map(|e| e.n).collect();
                ns.sort_unstable();
                if ns.windows(2).any(|w| w[0] == w[1]) {
                    return invalid("duplicate table index");
                }
            }
            FamilyKind::Constant { value, .. } => {
                if !(value.re.is_finite() && value.im.is_finite()) {
                    return invalid("constant must be finite");
                }
            }
        }
        match self.weights {
            WeightRule::Linear { scale } if !(scale.is_finite() && scale >= 1.0) => {
                invalid("linear weight scale must be at least 1 so that k_n >= 1")
            }
            WeightRule::Constant { value } if !(value.is_finite() && value >= 1.0) => {
                invalid("constant weight must be at least 1")
            }
            _ => Ok(()),
        }
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.weights.weight(n)
    }

    /// The one-variable profile `f_n`.
    pub fn factorization(&self, n: usize) -> Result<Factorization, Genus0Error> {
        if n == 0 {
            return Err(Genus0Error::Argument("family index n starts at 1".into()));
        }
        let mut f = match &self.kind {
            FamilyKind::LinearFormProduct { zeros, .. } => Factorization {
                log_abs_leading: 0.0,
                leading_arg: 0.0,
                order: 0,
                zeros: match zeros {
                    ZeroRule::Arithmetic { scale } => (1..=n).map(|j| (c(scale * j as f64, 0.0), 1)).collect(),
                    ZeroRule::Fixed { values } => values.iter().map(|z| (*z, 1)).collect(),
                },
                tail: None,
            },
            FamilyKind::ExponentialApproximant { .. } => Factorization {
                log_abs_leading: 0.0,
                leading_arg: 0.0,
                order: 0,
                zeros: vec![(c(n as f64, 0.0), n as u32)],
                tail: None,
            },
            FamilyKind::ChebyshevSlab { scale, half_width, .. } => chebyshev(n, *scale, *half_width),
            FamilyKind::CustomZeroTable { entries, .. } => {
                let e = entries.iter().find(|e| e.n == n).ok_or(Genus0Error::MissingIndex(n))?;
                Factorization {
                    log_abs_leading: e.leading.norm().ln(),
                    leading_arg: e.leading.arg(),
                    order: e.order,
                    zeros: e.zeros.iter().map(|z| (*z, 1)).collect(),
                    tail: e.tail,
                }
            }
            FamilyKind::Constant { value, .. } => Factorization {
                log_abs_leading: value.norm().ln(),
                leading_arg: value.arg(),
                order: 0,
                zeros: Vec::new(),
                tail: None,
            },
        };
        f.zeros.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()));
        Ok(f)
    }

    fn ell(&self, z: &Point) -> Complex64 {
        self.form().map_or(c(0.0, 0.0), |f| f.eval(z))
    }

    fn check_dim(&self, z: &Point) -> Result<(), Genus0Error> {
        if z.dim() != self.dimension() {
            return Err(Genus0Error::Dimension {
                got: z.dim(),
                expected: self.dimension(),
            });
        }
        Ok(())
    }

    /// Slice data of `P_n` along the direction `λ`.
    pub fn slice(&self, n: usize, lambda: &Point) -> Result<SliceData, Genus0Error> {
        self.check_dim(lambda)?;
        let f = self.factorization(n)?;
        let l = self.ell(lambda);
        if l.norm() == 0.0 {
            if f.order > 0 {
                return Err(Genus0Error::DegenerateSlice(*lambda));
            }
            // Constant along the slice: no zeros.
            return Ok(SliceData {
                log_abs_a: f.log_abs_leading,
                arg_a: f.leading_arg,
                alpha: 0,
                zeros: Vec::new(),
                tail: None,
            });
        }
        let ln = l.norm();
        Ok(SliceData {
            log_abs_a: f.log_abs_leading + f.order as f64 * ln.ln(),
            arg_a: f.leading_arg + f.order as f64 * l.arg(),
            alpha: f.order,
            // Division by a common scalar keeps the modulus order.
            zeros: f.zeros.iter().map(|(z, m)| (z / l, *m)).collect(),
            tail: f.tail.map(|t| TailBound {
                radius: t.radius / ln,
                sum_bound: t.sum_bound * ln,
            }),
        })
    }

    pub fn counting(&self, n: usize, t: f64, lambda: &Point) -> Result<u64, Genus0Error> {
        if !(t > 0.0) {
            return Err(Genus0Error::Argument(format!("counting radius must be positive, got {t}")));
        }
        self.slice(n, lambda)?.counting(t)
    }

    /// `η(t) = ∫ η(t, λ) dλ` against the grid's normalized weights.
    pub fn counting_integrated(&self, n: usize, t: f64, grid: &DirectionGrid) -> Result<f64, Genus0Error> {
        grid.directions
            .par_iter()
            .zip(&grid.weights)
            .map(|(lambda, w)| Ok(w * self.counting(n, t, lambda)? as f64))
            .sum()
    }

    pub fn tail_sum(&self, n: usize, lambda: &Point, radius: f64) -> Result<TailSum, Genus0Error> {
        if !(radius > 0.0) {
            return Err(Genus0Error::Argument(format!("tail radius must be positive, got {radius}")));
        }
        self.slice(n, lambda)?.tail_sum(radius)
    }

    /// `P_n(z)` from the first `truncation` zero factors (all when `None`).
    pub fn evaluate(&self, n: usize, z: &Point, truncation: Option<usize>) -> Result<Evaluation, Genus0Error> {
        self.check_dim(z)?;
        let f = self.factorization(n)?;
        let u = self.ell(z);
        let total = f.zeros.len();
        let used = truncation.unwrap_or(total).min(total);
        let mut log_abs = f.log_abs_leading;
        let mut arg = f.leading_arg;
        if f.order > 0 {
            if u.norm() == 0.0 {
                log_abs = f64::NEG_INFINITY;
            } else {
                log_abs += f.order as f64 * u.norm().ln();
                arg += f.order as f64 * u.arg();
            }
        }
        for (zero, m) in &f.zeros[..used] {
            let factor = 1.0 - u / zero;
            if factor.norm() == 0.0 {
                log_abs = f64::NEG_INFINITY;
            } else {
                log_abs += *m as f64 * factor.norm().ln();
                arg += *m as f64 * factor.arg();
            }
        }
        // |log(1 − x)| <= |x|/(1 − |x|) bounds each omitted factor.
        let un = u.norm();
        let mut s = 0.0;
        for (zero, m) in &f.zeros[used..] {
            let zn = zero.norm();
            s += if un < zn { *m as f64 * un / (zn - un) } else { f64::INFINITY };
        }
        if let Some(t) = f.tail {
            s += if un < t.radius {
                un * t.sum_bound * t.radius / (t.radius - un)
            } else {
                f64::INFINITY
            };
        }
        Ok(Evaluation {
            log_abs,
            arg: arg.rem_euclid(2.0 * PI),
            relative_error: s.exp_m1(),
            factors_used: used,
        })
    }

    /// `log|P_n(z)|/k_n`.
    pub fn log_growth(&self, n: usize, z: &Point) -> Result<f64, Genus0Error> {
        Ok(self.evaluate(n, z, None)?.log_abs / self.weight(n))
    }

    /// `(1/2π k_n) ∫ log|P_n(e^{iθ}λ)| dθ` by the trapezoid rule.
    pub fn circle_average(&self, n: usize, lambda: &Point, points: usize) -> Result<CircleAverage, Genus0Error> {
        if points == 0 {
            return Err(Genus0Error::Argument("circle average needs quadrature points".into()));
        }
        let slice = self.slice(n, lambda)?;
        let mut perturbed = 0;
        let mut sum = 0.0;
        for k in 0..points {
            let theta = 2.0 * PI * k as f64 / points as f64;
            let mut v = slice.log_abs(Complex64::from_polar(1.0, theta));
            if !v.is_finite() {
                perturbed += 1;
                v = slice.log_abs(Complex64::from_polar(1.0, theta + 1e-9));
            }
            sum += v;
        }
        Ok(CircleAverage {
            value: sum / points as f64 / self.weight(n),
            perturbed_nodes: perturbed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleAverage {
    pub value: f64,
    /// Quadrature nodes that hit a zero and were moved by 1e-9.
    pub perturbed_nodes: usize,
}

/// `s^n T_n(u/h)`: zeros `h cos((2j − 1)π/2n)`; for odd `n` the middle zero
/// is the origin and is carried by `α = 1`.
fn chebyshev(n: usize, s: f64, h: f64) -> Factorization {
    let nf = n as f64;
    let odd = n % 2 == 1;
    let zeros = (1..=n)
        .filter(|&j| !(odd && 2 * j - 1 == n))
        .map(|j| (c(h * ((2 * j - 1) as f64 * PI / (2.0 * nf)).cos(), 0.0), 1))
        .collect();
    // T_n(0) = (−1)^{n/2} for even n; T_n'(0) = n(−1)^{(n−1)/2} for odd n.
    let (log_abs, sign_exp, order) = if odd {
        (nf * s.ln() + nf.ln() - h.ln(), (n - 1) / 2, 1)
    } else {
        (nf * s.ln(), n / 2, 0)
    };
    Factorization {
        log_abs_leading: log_abs,
        leading_arg: if sign_exp % 2 == 1 { PI } else { 0.0 },
        order,
        zeros,
        tail: None,
    }
}

/// Splits `z ≠ 0` as `w·λ` with `|λ| = 1` and the first nonzero coordinate
/// of `λ` real positive.
pub fn resolve(z: &Point) -> Option<(Complex64, Point)> {
    let r = z.norm();
    if r == 0.0 {
        return None;
    }
    let lead = z.coords().iter().find(|w| w.norm() > 0.0)?;
    let phase = Complex64::from_polar(1.0, lead.arg());
    let lambda = z.scale(phase.conj() / r);
    Some((phase * r, lambda))
}

/// Directions in `P^{m−1}` with normalized Fubini–Study weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionGrid {
    pub directions: Vec<Point>,
    pub weights: Vec<f64>,
}

impl DirectionGrid {
    pub const DEFAULT_SIZE: usize = 2048;

    /// The single direction of `P^0`.
    pub fn line() -> Self {
        Self {
            directions: vec![Point::real1(1.0)],
            weights: vec![1.0],
        }
    }

    /// Equal-area Fibonacci lattice on `P^1 ≅ S^2`, pulled back through
    /// `λ = (cos(θ/2), sin(θ/2) e^{iφ})`. The Fubini–Study measure is the
    /// round measure on the sphere, so equal weights `1/N` are exact for
    /// the equal-area cells.
    pub fn projective_line(size: usize) -> Result<Self, Genus0Error> {
        if size == 0 {
            return Err(Genus0Error::Argument("direction grid needs at least one point".into()));
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let directions = (0..size)
            .map(|k| {
                let cos_theta = 1.0 - (2 * k + 1) as f64 / size as f64;
                let phi = golden * k as f64;
                let a = ((1.0 + cos_theta) / 2.0).sqrt();
                let b = ((1.0 - cos_theta) / 2.0).sqrt();
                Point::two(c(a, 0.0), Complex64::from_polar(b, phi))
            })
            .collect();
        Ok(Self {
            directions,
            weights: vec![1.0 / size as f64; size],
        })
    }

    pub fn for_dimension(dim: usize, size: usize) -> Result<Self, Genus0Error> {
        match dim {
            1 => Ok(Self::line()),
            2 => Self::projective_line(size),
            _ => Err(Genus0Error::Argument(format!("dimension must be 1 or 2, got {dim}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.directions.iter().zip(&self.weights).map(|(d, w)| w * f(d)).sum()
    }
}

/// Indices `start, start + step, …, <= end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
    #[serde(default = "one_usize")]
    pub step: usize,
}

fn one_usize() -> usize {
    1
}

impl IndexRange {
    pub fn new(start: usize, end: usize, step: usize) -> Result<Self, Genus0Error> {
        let r = Self { start, end, step };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), Genus0Error> {
        if self.start == 0 || self.step == 0 || self.end < self.start {
            return Err(Genus0Error::Argument(format!(
                "index range needs 1 <= start <= end and step >= 1, got {}..={} step {}",
                self.start, self.end, self.step
            )));
        }
        Ok(())
    }

    pub fn indices(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }

    /// The second half of the indices: the limsup proxy is the running
    /// maximum over it.
    pub fn tail(&self) -> Vec<usize> {
        let all = self.indices();
        let skip = all.len() / 2;
        all[skip..].to_vec()
    }
}

/// `R_{n,λ}` schedule of condition (4.3): `scale·n^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRule {
    pub scale: f64,
    pub exponent: f64,
}

impl Default for RadiusRule {
    fn default() -> Self {
        Self {
            scale: 1.0,
            exponent: 0.5,
        }
    }
}

impl RadiusRule {
    pub fn radius(&self, n: usize) -> f64 {
        self.scale * (n as f64).powf(self.exponent)
    }
}

/// One tabulated sequence `n ↦ q_n` and its tail maximum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceProxy {
    pub lambda_index: usize,
    /// Radius for the double-limit table; absent for single sequences.
    pub radius: Option<f64>,
    pub indices: Vec<usize>,
    /// `None` where an uncertain tail prevented the computation.
    pub values: Vec<Option<f64>>,
    /// Running maximum over the tail half of the range.
    pub proxy: f64,
}

impl SequenceProxy {
    fn build(
        lambda_index: usize,
        radius: Option<f64>,
        range: &IndexRange,
        mut f: impl FnMut(usize) -> Result<f64, Genus0Error>,
        warnings: &mut Vec<String>,
        label: &str,
    ) -> Self {
        let indices = range.indices();
        let tail_start = range.tail()[0];
        let mut proxy = f64::NEG_INFINITY;
        let values = indices
            .iter()
            .map(|&n| match f(n) {
                Ok(v) => {
                    if n >= tail_start {
                        proxy = proxy.max(v);
                    }
                    Some(v)
                }
                Err(e) => {
                    warnings.push(format!("{label}, n = {n}, direction {lambda_index}: {e}"));
                    None
                }
            })
            .collect();
        Self {
            lambda_index,
            radius,
            indices,
            values,
            proxy,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub range: IndexRange,
    pub tail_start: usize,
    pub lambdas: Vec<Point>,
    /// Sup over the compact witness set of `|P_n|^{1/k_n}`, per index.
    pub compact_bound: Option<SequenceProxy>,
    pub theo41: Vec<SequenceProxy>,
    pub theo42: Vec<SequenceProxy>,
    pub theo43: Vec<SequenceProxy>,
    pub radius_rule: RadiusRule,
    /// Max over directions of the (4.3) proxies.
    pub kappa: f64,
    pub warnings: Vec<String>,
}

/// A CSV row `(condition, n, λ-index, R, value)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionRow {
    pub condition: String,
    pub n: usize,
    pub lambda: Option<usize>,
    pub radius: Option<f64>,
    pub value: Option<f64>,
}

impl ConditionReport {
    pub fn rows(&self) -> Vec<ConditionRow> {
        let mut out = Vec::new();
        let mut push = |name: &str, s: &SequenceProxy, lambda: Option<usize>| {
            for (n, v) in s.indices.iter().zip(&s.values) {
                out.push(ConditionRow {
                    condition: name.to_string(),
                    n: *n,
                    lambda,
                    radius: s.radius,
                    value: *v,
                });
            }
        };
        if let Some(s) = &self.compact_bound {
            push("theo4.0", s, None);
        }
        for s in &self.theo41 {
            push("theo4.1", s, Some(s.lambda_index));
        }
        for s in &self.theo42 {
            push("theo4.2", s, Some(s.lambda_index));
        }
        for s in &self.theo43 {
            push("theo4.3", s, Some(s.lambda_index));
        }
        out
    }
}

/// Tabulates conditions (4.0)–(4.3) over `range`.
pub fn condition_checks(
    family: &GenusZeroFamily,
    lambdas: &[Point],
    range: &IndexRange,
    radius_rule: RadiusRule,
    theo42_radii: &[f64],
    compact: &[Point],
) -> Result<ConditionReport, Genus0Error> {
    range.validate()?;
    for l in lambdas.iter().chain(compact) {
        family.check_dim(l)?;
    }
    let mut warnings = Vec::new();
    let compact_bound = (!compact.is_empty()).then(|| {
        SequenceProxy::build(
            0,
            None,
            range,
            |n| {
                let mut sup = f64::NEG_INFINITY;
                for z in compact {
                    sup = sup.max(family.log_growth(n, z)?);
                }
                Ok(sup.exp())
            },
            &mut warnings,
            "theo4.0",
        )
    });
    let per_lambda: Vec<(Vec<SequenceProxy>, Vec<String>)> = lambdas
        .par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let mut w = Vec::new();
            let k = |n: usize| family.weight(n);
            let theo41 = SequenceProxy::build(
                i,
                None,
                range,
                |n| {
                    let s = family.slice(n, lambda)?;
                    Ok((s.counting(1.0)? as f64 + s.abs_tail_sum(1.0)) / k(n))
                },
                &mut w,
                "theo4.1",
            );
            let theo43 = SequenceProxy::build(
                i,
                None,
                range,
                |n| Ok(family.counting(n, radius_rule.radius(n), lambda)? as f64 / k(n)),
                &mut w,
                "theo4.3",
            );
            let mut out = vec![theo41, theo43];
            for &r in theo42_radii {
                out.push(SequenceProxy::build(
                    i,
                    Some(r),
                    range,
                    |n| Ok(family.tail_sum(n, lambda, r)?.value.norm() / k(n)),
                    &mut w,
                    "theo4.2",
                ));
            }
            (out, w)
        })
        .collect();
    let mut theo41 = Vec::new();
    let mut theo42 = Vec::new();
    let mut theo43 = Vec::new();
    for (mut seqs, w) in per_lambda {
        warnings.extend(w);
        let rest = seqs.split_off(2);
        theo43.push(seqs.pop().expect("two sequences"));
        theo41.push(seqs.pop().expect("two sequences"));
        theo42.extend(rest);
    }
    let kappa = theo43.iter().map(|s| s.proxy).fold(0.0, f64::max);
    Ok(ConditionReport {
        range: *range,
        tail_start: range.tail()[0],
        lambdas: lambdas.to_vec(),
        compact_bound,
        theo41,
        theo42,
        theo43,
        radius_rule,
        kappa,
        warnings,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    /// Max over `E` of the tail maximum of `|P_n(z)|^{1/k_n}`.
    pub hypothesis_margin: f64,
    /// The same over the conclusion grid.
    pub conclusion_margin: f64,
    pub tolerance: f64,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// The implication "hypothesis ⇒ conclusion" on this data.
    pub verified: bool,
    /// Points where `log|P_n|` was not finite and positive growth was infinite.
    pub flagged: Vec<Point>,
    pub range: IndexRange,
}

fn tail_max_growth(family: &GenusZeroFamily, z: &Point, tail: &[usize]) -> Result<f64, Genus0Error> {
    let mut best = f64::NEG_INFINITY;
    for &n in tail {
        best = best.max(family.log_growth(n, z)?);
    }
    Ok(best.exp())
}

/// Theorem-4 style harness: tail-max growth on `E` versus on a grid.
pub fn growth_verify(
    family: &GenusZeroFamily,
    e_points: &[Point],
    grid: &[Point],
    range: &IndexRange,
    tolerance: f64,
) -> Result<GrowthReport, Genus0Error> {
    range.validate()?;
    let tail = range.tail();
    let margins = |pts: &[Point]| -> Result<(f64, Vec<Point>), Genus0Error> {
        let values = pts
            .par_iter()
            .map(|z| {
                family.check_dim(z)?;
                tail_max_growth(family, z, &tail)
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let flagged = pts
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_nan() || v.is_infinite())
            .map(|(p, _)| *p)
            .collect();
        Ok((values.iter().copied().filter(|v| !v.is_nan()).fold(0.0, f64::max), flagged))
    };
    let (hypothesis_margin, mut flagged) = margins(e_points)?;
    let (conclusion_margin, more) = margins(grid)?;
    flagged.extend(more);
    let hypothesis_holds = hypothesis_margin <= 1.0 + tolerance;
    let conclusion_holds = conclusion_margin <= 1.0 + tolerance;
    Ok(GrowthReport {
        hypothesis_margin,
        conclusion_margin,
        tolerance,
        hypothesis_holds,
        conclusion_holds,
        verified: !hypothesis_holds || conclusion_holds,
        flagged,
        range: *range,
    })
}

/// Growth envelope `h` with its declared exponent `τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Envelope {
    /// `h(R) = coefficient·(1 + R)^tau`.
    PowerLaw { coefficient: f64, tau: f64 },
    /// Piecewise-linear interpolation of `(R, h)` pairs, constant beyond
    /// the ends, with a declared `tau`.
    Table { points: Vec<[f64; 2]>, tau: f64 },
}

impl Envelope {
    pub fn tau(&self) -> f64 {
        match self {
            Envelope::PowerLaw { tau, .. } | Envelope::Table { tau, .. } => *tau,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Envelope::PowerLaw { coefficient, tau } => coefficient * (1.0 + r).powf(*tau),
            Envelope::Table { points, .. } => {
                let Some(first) = points.first() else {
                    return f64::INFINITY;
                };
                if r <= first[0] {
                    return first[1];
                }
                for w in points.windows(2) {
                    if r <= w[1][0] {
                        let s = (r - w[0][0]) / (w[1][0] - w[0][0]);
                        return w[0][1] + s * (w[1][1] - w[0][1]);
                    }
                }
                points.last().expect("nonempty")[1]
            }
        }
    }

    fn validate(&self) -> Result<(), Genus0Error> {
        let ok = match self {
            Envelope::PowerLaw { coefficient, tau } => *coefficient > 0.0 && tau.is_finite(),
            Envelope::Table { points, tau } => {
                !points.is_empty()
                    && tau.is_finite()
                    && points.iter().all(|p| p[1] > 0.0 && p[0].is_finite())
                    && points.windows(2).all(|w| w[0][0] < w[1][0])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Genus0Error::Argument("envelope must be positive with increasing radii and finite tau".into()))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem5Parameters {
    pub beta: f64,
    pub c_m: f64,
    pub envelope: Envelope,
    pub quadrature_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem5Report {
    pub tau: f64,
    pub beta: f64,
    pub c_m: f64,
    /// `τ/(1 − C_m(1 − β))`.
    pub exponent: f64,
    /// `C_λ`: exp of the tail maximum of circle averages, per direction.
    pub c_lambda: Vec<f64>,
    /// Max over `E` of tail-max `|P_n(z)|^{1/k_n}/h(|z|)`; absent without `E`.
    pub hypothesis_ratio: Option<f64>,
    /// Max over `(w, λ)` of tail-max `|P_n(wλ)|^{1/k_n}/[C_λ(1 + |w|)^exponent]`.
    pub conclusion_ratio: f64,
    pub perturbed_nodes: usize,
    pub range: IndexRange,
}

pub fn theorem5_check(
    family: &GenusZeroFamily,
    lambdas: &[Point],
    ws: &[Complex64],
    e_points: &[Point],
    range: &IndexRange,
    params: &Theorem5Parameters,
) -> Result<Theorem5Report, Genus0Error> {
    range.validate()?;
    params.envelope.validate()?;
    if !(params.c_m.is_finite() && params.c_m > 0.0) {
        return Err(Genus0Error::Argument(format!("C_m must be positive, got {}", params.c_m)));
    }
    let denom = 1.0 - params.c_m * (1.0 - params.beta);
    if !(denom > 0.0) {
        return Err(Genus0Error::Exponent(denom));
    }
    let tau = params.envelope.tau();
    let exponent = tau / denom;
    let tail = range.tail();
    let mut perturbed_nodes = 0;
    let mut c_lambda = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        let mut best = f64::NEG_INFINITY;
        for &n in &tail {
            let avg = family.circle_average(n, lambda, params.quadrature_points)?;
            perturbed_nodes += avg.perturbed_nodes;
            best = best.max(avg.value);
        }
        c_lambda.push(best.exp());
    }
    let hypothesis_ratio = if e_points.is_empty() {
        None
    } else {
        let mut worst = 0.0f64;
        for z in e_points {
            family.check_dim(z)?;
            worst = worst.max(tail_max_growth(family, z, &tail)? / params.envelope.eval(z.norm()));
        }
        Some(worst)
    };
    let mut conclusion_ratio = 0.0f64;
    for (lambda, cl) in lambdas.iter().zip(&c_lambda) {
        for w in ws {
            let z = lambda.scale(*w);
            let g = tail_max_growth(family, &z, &tail)?;
            conclusion_ratio = conclusion_ratio.max(g / (cl * (1.0 + w.norm()).powf(exponent)));
        }
    }
    Ok(Theorem5Report {
        tau,
        beta: params.beta,
        c_m: params.c_m,
        exponent,
        c_lambda,
        hypothesis_ratio,
        conclusion_ratio,
        perturbed_nodes,
        range: *range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell1() -> LinearForm {
        LinearForm::coordinate(1, 0)
    }

    fn harmonic(a: usize, b: usize) -> f64 {
        (a..=b).map(|j| 1.0 / j as f64).sum()
    }

    #[test]
    fn counting_examples() {
        let p = GenusZeroFamily::arithmetic_product(ell1(), 1.0);
        let one = Point::real1(1.0);
        assert_eq!(p.counting(10, 5.5, &one).unwrap(), 5);
        assert_eq!(p.counting(10, 0.5, &one).unwrap(), 0);
        let e = GenusZeroFamily::exponential_approximant(ell1());
        assert_eq!(e.counting(100, 10.0, &one).unwrap(), 0);
        assert_eq!(e.counting(100, 100.0, &one).unwrap(), 100);
    }

    #[test]
    fn tail_sum_examples() {
        let one = Point::real1(1.0);
        let p = GenusZeroFamily::arithmetic_product(ell1(), 1.0);
        let t = p.tail_sum(10, &one, 5.5).unwrap();
        assert!((t.value.re - harmonic(6, 10)).abs() < 1e-15);
        assert!((t.value.re - 0.645_634_920_634_920_6).abs() < 1e-12);
        assert_eq!(p.tail_sum(10, &one, 11.0).unwrap().value, c(0.0, 0.0));
        let e = GenusZeroFamily::exponential_approximant(ell1());
        assert!((e.tail_sum(50, &one, 10.0).unwrap().value.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_examples() {
        let cheb = GenusZeroFamily::new(
            FamilyKind::ChebyshevSlab {
                form: ell1(),
                scale: 0.5,
                half_width: 1.0,
            },
            WeightRule::default(),
        )
        .unwrap();
        let v = cheb.evaluate(3, &Point::real1(2.0), None).unwrap().value();
        assert!((v - c(3.25, 0.0)).norm() < 1e-12, "{v}");
        let e = GenusZeroFamily::exponential_approximant(ell1());
        let v = e.evaluate(4, &Point::real1(1.0), None).unwrap().value();
        assert!((v - c(0.316_406_25, 0.0)).norm() < 1e-14);
        let p = GenusZeroFamily::arithmetic_product(ell1(), 1.0);
        assert!(p.evaluate(10, &Point::real1(3.0), None).unwrap().is_zero());
    }

    #[test]
    fn chebyshev_matches_recurrence() {
        let cheb = GenusZeroFamily::chebyshev_slab(ell1());
        for n in 1..12 {
            for x in [-1.7, 0.3, 2.9] {
                let (mut t0, mut t1) = (1.0, x / 2.0);
                for _ in 1..n {
                    (t0, t1) = (t1, 2.0 * (x / 2.0) * t1 - t0);
                }
                let v = cheb.evaluate(n, &Point::real1(x), None).unwrap().value();
                assert!((v.re - t1).abs() < 1e-9 * (1.0 + t1.abs()), "n={n} x={x}: {v} vs {t1}");
            }
        }
    }

    #[test]
    fn truncated_evaluation_bounds_error() {
        let p = GenusZeroFamily::arithmetic_product(ell1(), 1.0);
        let z = Point::one(c(0.3, 0.4));
        let full = p.evaluate(200, &z, None).unwrap();
        let cut = p.evaluate(200, &z, Some(150)).unwrap();
        assert_eq!(full.relative_error, 0.0);
        let rel = (full.value() / cut.value() - 1.0).norm();
        assert!(rel <= cut.relative_error && cut.relative_error < 0.2);
    }

    #[test]
    fn custom_tail_is_reported() {
        let fam = GenusZeroFamily::new(
            FamilyKind::CustomZeroTable {
                form: ell1(),
                entries: vec![TableEntry {
                    n: 1,
                    leading: one(),
                    order: 0,
                    zeros: vec![c(2.0, 0.0), c(3.0, 0.0)],
                    tail: Some(TailBound {
                        radius: 10.0,
                        sum_bound: 0.05,
                    }),
                }],
            },
            WeightRule::Constant { value: 1.0 },
        )
        .unwrap();
        let one = Point::real1(1.0);
        assert_eq!(fam.counting(1, 5.0, &one).unwrap(), 2);
        assert!(matches!(fam.counting(1, 10.0, &one), Err(Genus0Error::UncertainCount { .. })));
        let t = fam.tail_sum(1, &one, 2.5).unwrap();
        assert!((t.value.re - 1.0 / 3.0).abs() < 1e-15 && t.bound == 0.05);
        assert!(matches!(fam.tail_sum(1, &one, 20.0), Err(Genus0Error::UncertainTail { .. })));
        assert!(matches!(fam.counting(2, 1.0, &one), Err(Genus0Error::MissingIndex(2))));
    }

    #[test]
    fn slice_zeros_rescale() {
        let form = LinearForm::new(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let fam = GenusZeroFamily::arithmetic_product(form.clone(), 1.0);
        let lambda = Point::two(c(0.6, 0.0), c(0.0, 0.8));
        let l = form.eval(&lambda);
        let s = fam.slice(7, &lambda).unwrap();
        for (j, (w, _)) in s.zeros.iter().enumerate() {
            assert_eq!(*w, c((j + 1) as f64, 0.0) / l);
        }
        let w = c(0.7, -1.1);
        let direct = fam.evaluate(7, &lambda.scale(w), None).unwrap().log_abs;
        assert!((direct - s.log_abs(w)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_slice_rejected() {
        let cheb = GenusZeroFamily::chebyshev_slab(LinearForm::coordinate(2, 0));
        let lambda = Point::two(c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(cheb.slice(3, &lambda), Err(Genus0Error::DegenerateSlice(_))));
        // Even degree: constant T_n(0) along the slice, no zeros.
        let s = cheb.slice(4, &lambda).unwrap();
        assert!(s.zeros.is_empty() && s.log_abs_a == 0.0);
    }

    #[test]
    fn direction_grid_normalized() {
        let g = DirectionGrid::projective_line(2048).unwrap();
        let total: f64 = g.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for d in &g.directions {
            assert!((d.norm() - 1.0).abs() < 1e-12);
            assert!(d.coords()[0].im == 0.0 && d.coords()[0].re >= 0.0);
        }
        // ∫ |λ1|² dλ = 1/2 for the normalized Fubini–Study measure.
        let m = g.integrate(|d| d.coords()[0].norm_sqr());
        assert!((m - 0.5).abs() < 1e-9);
    }

    #[test]
    fn resolve_round_trip() {
        let z = Point::two(c(-1.0, 1.0), c(0.5, 2.0));
        let (w, lambda) = resolve(&z).unwrap();
        assert!((lambda.norm() - 1.0).abs() < 1e-15);
        assert!(lambda.coords()[0].im.abs() < 1e-15 && lambda.coords()[0].re > 0.0);
        assert!(lambda.scale(w).dist(&z) < 1e-14);
        assert!(resolve(&Point::real2(0.0, 0.0)).is_none());
    }

    #[test]
    fn circle_average_examples() {
        let one = Point::real1(1.0);
        let cases = [
            (GenusZeroFamily::single(one_c(), 1, vec![]), 0.0),
            (GenusZeroFamily::single(one_c(), 0, vec![c(2.0, 0.0)]), 0.0),
            (GenusZeroFamily::single(one_c(), 0, vec![c(0.5, 0.0)]), 2f64.ln()),
        ];
        for (fam, expected) in cases {
            let avg = fam.circle_average(1, &one, 4096).unwrap();
            assert!((avg.value - expected).abs() < 1e-6, "{} vs {expected}", avg.value);
        }
        // A zero on the circle lands on node 0 and is perturbed.
        let on = GenusZeroFamily::single(one_c(), 0, vec![c(1.0, 0.0)]);
        let avg = on.circle_average(1, &one, 64).unwrap();
        assert_eq!(avg.perturbed_nodes, 1);
        assert!(avg.value.is_finite());
    }

    fn one_c() -> Complex64 {
        c(1.0, 0.0)
    }

    #[test]
    fn harmonic_condition_table() {
        let p = GenusZeroFamily::arithmetic_product(ell1(), 1.0);
        let range = IndexRange::new(10, 40, 1).unwrap();
        let lambda = Point::real1(1.0);
        let r = condition_checks(&p, &[lambda], &range, RadiusRule::default(), &[3.5, 7.0], &[]).unwrap();
        for s in &r.theo42 {
            let radius = s.radius.unwrap();
            for (n, v) in s.indices.iter().zip(&s.values) {
                let lo = radius.ceil() as usize;
                let expected = if lo > *n { 0.0 } else { harmonic(lo, *n) } / *n as f64;
                assert!((v.unwrap() - expected).abs() < 1e-12);
            }
        }
        assert!(r.warnings.is_empty());
        assert_eq!(r.rows().len(), 4 * 31);
    }

    #[test]
    fn exponential_conditions() {
        let e = GenusZeroFamily::exponential_approximant(ell1());
        let range = IndexRange::new(10, 100, 1).unwrap();
        let lambda = Point::one(c(0.6, 0.0));
        let r = condition_checks(&e, &[lambda], &range, RadiusRule::default(), &[2.0], &[Point::real1(0.5)]).unwrap();
        assert_eq!(r.kappa, 0.0);
        // (4.1): |ℓ(λ)|/n, largest at the start of the tail.
        assert!((r.theo41[0].proxy - 0.6 / r.tail_start as f64).abs() < 1e-15);
    }

    #[test]
    fn growth_harness_cases() {
        let range = IndexRange::new(100, 200, 10).unwrap();
        let constant = GenusZeroFamily::constant(1);
        let pts = vec![Point::real1(0.0), Point::one(c(2.0, 3.0))];
        let g = growth_verify(&constant, &pts, &pts, &range, 0.0).unwrap();
        assert_eq!(g.hypothesis_margin, 1.0);
        assert_eq!(g.conclusion_margin, 1.0);
        assert!(g.verified);
    }

    #[test]
    fn theorem5_requires_finite_exponent() {
        let fam = GenusZeroFamily::exponential_approximant(ell1());
        let range = IndexRange::new(10, 20, 1).unwrap();
        let params = Theorem5Parameters {
            beta: 0.2,
            c_m: 2.0,
            envelope: Envelope::PowerLaw {
                coefficient: 1.0,
                tau: 1.0,
            },
            quadrature_points: 256,
        };
        assert!(matches!(
            theorem5_check(&fam, &[Point::real1(1.0)], &[c(1.0, 0.0)], &[], &range, &params),
            Err(Genus0Error::Exponent(_))
        ));
        let ok = Theorem5Parameters { beta: 0.9, ..params };
        let r = theorem5_check(&fam, &[Point::real1(1.0)], &[c(2.0, 0.0), c(-5.0, 1.0)], &[], &range, &ok).unwrap();
        assert!((r.exponent - 1.0 / 0.8).abs() < 1e-12);
        assert!(r.conclusion_ratio.is_finite());
    }

    #[test]
    fn family_json() {
        let fam = GenusZeroFamily::chebyshev_slab(LinearForm::coordinate(2, 0));
        let s = serde_json::to_string(&fam).unwrap();
        let back: GenusZeroFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fam);
        let parsed: GenusZeroFamily =
            serde_json::from_str(r#"{"type":"exponential_approximant","form":[[1,0]]}"#).unwrap();
        assert_eq!(parsed, GenusZeroFamily::exponential_approximant(ell1()));
    }
}
