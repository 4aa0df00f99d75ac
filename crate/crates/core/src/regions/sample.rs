//! Deterministic point clouds for truncations `E_R`.
//!
//! Points are laid on low-discrepancy lattices (Lobatto nodes, equispaced
//! circles, sunflower spirals, Kronecker sequences on `S^3`) with no
//! randomness. Each constructor contributes boundary and interior candidates;
//! the candidates are then filtered through the exact membership predicate
//! and `|z| <= R`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{on_slice, RegionError, RegionSpec};
use crate::point::{LinearForm, Point};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
// Kronecker increments for S^3 lattices (plastic-number sequence).
const KR1: f64 = 0.754_877_666_246_692_7;
const KR2: f64 = 0.569_840_290_998_053_3;
const KR3: f64 = 0.430_159_709_001_946_7;

/// Requested boundary and interior point counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub boundary: usize,
    pub interior: usize,
}

impl Density {
    pub const MAX_TOTAL: usize = 200_000;

    pub fn new(boundary: usize, interior: usize) -> Self {
        Self { boundary, interior }
    }

    /// Splits `total` 4:1 between boundary and interior.
    pub fn from_total(total: usize) -> Self {
        let boundary = (total * 4).div_ceil(5);
        Self {
            boundary,
            interior: total - boundary,
        }
    }

    pub fn total(&self) -> usize {
        self.boundary + self.interior
    }

    fn check(&self) -> Result<(), RegionError> {
        if self.boundary < 4 {
            return Err(RegionError::Density(format!("need at least 4 boundary points, got {}", self.boundary)));
        }
        if self.total() > Self::MAX_TOTAL {
            return Err(RegionError::Density(format!("at most {} points, got {}", Self::MAX_TOTAL, self.total())));
        }
        Ok(())
    }
}

/// Point budget growing linearly with the truncation radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRule {
    pub base_total: usize,
    pub reference_radius: f64,
    pub max_total: usize,
}

impl DensityRule {
    pub fn new(base_total: usize, reference_radius: f64, max_total: usize) -> Self {
        Self {
            base_total,
            reference_radius,
            max_total,
        }
    }

    pub fn fixed(total: usize) -> Self {
        Self::new(total, f64::INFINITY, total)
    }

    pub fn at(&self, radius: f64) -> Density {
        let factor = (radius / self.reference_radius).max(1.0);
        let total = ((self.base_total as f64) * factor).round() as usize;
        Density::from_total(total.min(self.max_total).max(5))
    }
}

/// Strictly increasing positive radii `R_1 < … < R_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TruncationSchedule(Vec<f64>);

impl TruncationSchedule {
    pub fn new(radii: Vec<f64>) -> Result<Self, RegionError> {
        if radii.is_empty() {
            return Err(RegionError::Schedule("no radii".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(RegionError::Schedule("radii must be positive and finite".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RegionError::Schedule("radii must be strictly increasing".into()));
        }
        Ok(Self(radii))
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for TruncationSchedule {
    type Error = RegionError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<TruncationSchedule> for Vec<f64> {
    fn from(s: TruncationSchedule) -> Self {
        s.0
    }
}

/// Discretization of `E_R`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampledRegion {
    dim: usize,
    points: Vec<Point>,
    radius: f64,
    /// Counts actually emitted, after filtering.
    density: Density,
    spec: Option<RegionSpec>,
}

impl SampledRegion {
    /// A region from an explicit point cloud, with no constructive provenance.
    pub fn from_points(points: Vec<Point>) -> Result<Self, RegionError> {
        let Some(first) = points.first() else {
            return Err(RegionError::EmptyRegion { radius: 0.0 });
        };
        let dim = first.dim();
        if points.iter().any(|p| p.dim() != dim || !p.is_finite()) {
            return Err(RegionError::Invalid("points must be finite and share one dimension".into()));
        }
        let radius = points.iter().map(Point::norm).fold(0.0, f64::max);
        let n = points.len();
        Ok(Self {
            dim,
            points,
            radius,
            density: Density::new(n, 0),
            spec: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn density(&self) -> Density {
        self.density
    }

    pub fn spec(&self) -> Option<&RegionSpec> {
        self.spec.as_ref()
    }

    /// The first `density().boundary` points are the boundary samples.
    pub fn boundary_points(&self) -> &[Point] {
        &self.points[..self.density.boundary]
    }

    /// Image under `z ↦ s·z`. The provenance spec is dropped.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            points: self.points.iter().map(|p| p.scale_real(s)).collect(),
            radius: self.radius * s,
            density: self.density,
            spec: None,
        }
    }

    /// Keeps the points selected by `keep`, preserving order.
    pub fn retain(&self, mut keep: impl FnMut(usize, &Point) -> bool) -> Result<Self, RegionError> {
        let mut boundary = 0;
        let mut points = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if keep(i, p) {
                if i < self.density.boundary {
                    boundary += 1;
                }
                points.push(*p);
            }
        }
        if points.is_empty() {
            return Err(RegionError::EmptyRegion { radius: self.radius });
        }
        let interior = points.len() - boundary;
        Ok(Self {
            dim: self.dim,
            points,
            radius: self.radius,
            density: Density::new(boundary, interior),
            spec: self.spec.clone(),
        })
    }

    /// Mean of the points.
    pub fn centroid(&self) -> Point {
        let n = self.points.len() as f64;
        let sum = self.points.iter().fold(Point::zeros(self.dim), |acc, p| acc.add(p));
        sum.scale_real(1.0 / n)
    }
}

#[derive(Default)]
struct Raw {
    boundary: Vec<Point>,
    interior: Vec<Point>,
}

impl Raw {
    fn extend(&mut self, other: Raw) {
        self.boundary.extend(other.boundary);
        self.interior.extend(other.interior);
    }
}

/// Samples `E_R = E ∩ {|z| <= R}`.
pub fn sample(spec: &RegionSpec, radius: f64, density: Density) -> Result<SampledRegion, RegionError> {
    spec.validate()?;
    density.check()?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(RegionError::Invalid(format!("truncation radius must be positive, got {radius}")));
    }
    let raw = raw_sample(spec, radius, density);
    let limit = radius * (1.0 + 1e-12);
    let keep = |p: &Point| p.norm() <= limit && spec.contains(p);
    let boundary: Vec<Point> = raw.boundary.into_iter().filter(keep).collect();
    let interior: Vec<Point> = raw.interior.into_iter().filter(keep).collect();
    if boundary.is_empty() && interior.is_empty() {
        return Err(RegionError::EmptyRegion { radius });
    }
    let counts = Density::new(boundary.len(), interior.len());
    let mut points = boundary;
    points.extend(interior);
    Ok(SampledRegion {
        dim: spec.dimension(),
        points,
        radius,
        density: counts,
        spec: Some(spec.clone()),
    })
}

pub fn truncate_schedule(
    spec: &RegionSpec,
    schedule: &TruncationSchedule,
    rule: DensityRule,
) -> Result<Vec<SampledRegion>, RegionError> {
    schedule.radii().iter().map(|&r| sample(spec, r, rule.at(r))).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// `n` Chebyshev–Lobatto nodes on `[lo, hi]`, endpoints included.
fn lobatto(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi <= lo {
        return vec![0.5 * (lo + hi)];
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..n)
        .map(|k| mid - half * (PI * k as f64 / (n - 1) as f64).cos())
        .collect()
}

fn circle(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| center + r * cis(2.0 * PI * k as f64 / n as f64)).collect()
}

/// Sunflower spiral strictly inside the disk.
fn sunflower(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let rho = r * ((k as f64 + 0.5) / n as f64).sqrt();
            center + rho * cis(k as f64 * GOLDEN_ANGLE)
        })
        .collect()
}

/// Kronecker lattice on the unit sphere `S^3 ⊂ C^2` (Hopf coordinates,
/// `|z1|²` stratified).
fn sphere3(n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let s = (k as f64 + 0.5) / n as f64;
            let t1 = 2.0 * PI * frac(k as f64 * KR1);
            let t2 = 2.0 * PI * frac(k as f64 * KR2);
            Point::two(s.sqrt() * cis(t1), (1.0 - s).sqrt() * cis(t2))
        })
        .collect()
}

/// Volume-stratified lattice strictly inside the unit ball of `C^2`.
fn ball4(n: usize) -> Vec<Point> {
    sphere3(n)
        .into_iter()
        .enumerate()
        .map(|(k, p)| p.scale_real(frac(k as f64 * KR3 + 0.5).max(0.5 / n as f64).powf(0.25) * 0.999))
        .collect()
}

/// Fibonacci lattice on `S^2`, as unit 3-vectors.
fn sphere2(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = k as f64 * GOLDEN_ANGLE;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn ones(zs: Vec<Complex64>) -> Vec<Point> {
    zs.into_iter().map(Point::one).collect()
}

/// `n` deterministic unit vectors of `C^dim`: equispaced on the circle, or a
/// Kronecker lattice on `S^3`.
pub fn unit_directions(dim: usize, n: usize) -> Vec<Point> {
    if dim == 1 {
        ones(circle(c(0.0, 0.0), 1.0, n))
    } else {
        sphere3(n)
    }
}

fn raw_sample(spec: &RegionSpec, r: f64, den: Density) -> Raw {
    let nb = den.boundary;
    let ni = den.interior;
    match spec {
        RegionSpec::Disk { center, radius } => {
            let mut boundary = ones(circle(*center, *radius, nb));
            if center.norm() + radius > r {
                boundary.extend(ones(circle(c(0.0, 0.0), r, nb)));
            }
            Raw {
                boundary,
                interior: ones(sunflower(*center, *radius, ni)),
            }
        }
        RegionSpec::Ball { radius, dimension } => {
            let rho = radius.map_or(r, |b| b.min(r));
            if *dimension == 1 {
                Raw {
                    boundary: ones(circle(c(0.0, 0.0), rho, nb)),
                    interior: ones(sunflower(c(0.0, 0.0), rho, ni)),
                }
            } else {
                Raw {
                    boundary: sphere3(nb).into_iter().map(|p| p.scale_real(rho)).collect(),
                    interior: ball4(ni).into_iter().map(|p| p.scale_real(rho)).collect(),
                }
            }
        }
        RegionSpec::Polydisk { radii } => polydisk(radii[0], radii[1], r, nb, ni),
        RegionSpec::Segment { a, b } => Raw {
            boundary: lobatto(a.max(-r), b.min(r), nb + ni)
                .into_iter()
                .map(Point::real1)
                .collect(),
            interior: Vec::new(),
        },
        RegionSpec::Halfline { origin, direction } => {
            let d = direction.scale_real(1.0 / direction.norm());
            let beta = origin.real_inner(&d);
            let disc = beta * beta - origin.norm_sqr() + r * r;
            if disc < 0.0 {
                return Raw::default();
            }
            let t_hi = -beta + disc.sqrt();
            let t_lo = (-beta - disc.sqrt()).max(0.0);
            if t_hi < t_lo {
                return Raw::default();
            }
            Raw {
                boundary: lobatto(t_lo, t_hi, nb + ni)
                    .into_iter()
                    .map(|t| origin.add(&d.scale_real(t)))
                    .collect(),
                interior: Vec::new(),
            }
        }
        RegionSpec::Slab { form, interval } => slab(form, *interval, r, nb, ni),
        RegionSpec::Cone { form, aperture } => cone(form, *aperture, r, nb, ni),
        RegionSpec::Example1 => example1(r, nb, ni),
        RegionSpec::Product { factors } => product(&factors[0], &factors[1], r, den),
        RegionSpec::Union { parts } => {
            let k = parts.len();
            let share = Density::new(nb.div_ceil(k).max(4), ni.div_ceil(k));
            let mut raw = Raw::default();
            for p in parts {
                raw.extend(raw_sample(p, r, share));
            }
            raw
        }
        RegionSpec::Fatten { base, epsilon } => fatten(base, *epsilon, r, nb, ni),
        RegionSpec::RemoveSlice { base, form } => {
            let mut raw = raw_sample(base, r, den);
            raw.boundary.retain(|p| !on_slice(form, p));
            raw.interior.retain(|p| !on_slice(form, p));
            raw
        }
    }
}

fn polydisk(r1: f64, r2: f64, r: f64, nb: usize, ni: usize) -> Raw {
    let mut raw = Raw::default();
    // Faces {|z1| = r1} × D(r2) and D(r1) × {|z2| = r2}; half of each face on the torus.
    let per_face = nb.div_ceil(2);
    let angles = ((per_face as f64).sqrt().ceil() as usize).max(4);
    let inner = per_face.div_ceil(angles);
    let torus = inner.div_ceil(2);
    for face in 0..2 {
        let (ra, rb) = if face == 0 { (r1, r2) } else { (r2, r1) };
        let mut others = circle(c(0.0, 0.0), rb, torus);
        others.extend(sunflower(c(0.0, 0.0), rb, inner - torus));
        for (j, w) in others.iter().enumerate() {
            for k in 0..angles {
                let z = ra * cis(2.0 * PI * (k as f64 + 0.5 * (j % 2) as f64) / angles as f64);
                raw.boundary.push(if face == 0 { Point::two(z, *w) } else { Point::two(*w, z) });
            }
        }
    }
    if r1.hypot(r2) > r {
        raw.boundary.extend(sphere3(nb).into_iter().map(|p| p.scale_real(r)));
    }
    let m = ((ni as f64).sqrt().ceil() as usize).max(1);
    for (k, z1) in sunflower(c(0.0, 0.0), r1, m).into_iter().enumerate() {
        for z2 in sunflower(c(0.0, 0.0), r2, m) {
            raw.interior.push(Point::two(z1, z2 * cis(k as f64)));
        }
    }
    raw.interior.truncate(ni);
    raw
}

fn slab(form: &LinearForm, interval: [f64; 2], r: f64, nb: usize, ni: usize) -> Raw {
    let a = form.norm();
    let lo = interval[0].max(-r * a);
    let hi = interval[1].min(r * a);
    if lo > hi {
        return Raw::default();
    }
    let base = form.dual_point();
    if form.dim() == 1 {
        return Raw {
            boundary: lobatto(lo, hi, nb + ni)
                .into_iter()
                .map(|x| base.scale_real(x))
                .collect(),
            interior: Vec::new(),
        };
    }
    // z = x·conj(a)/|a|² + ζ·v with v a unit null vector of ℓ, so |z|² = x²/|a|² + |ζ|².
    let co = form.coeffs();
    let v = Point::two(co[1] / a, -co[0] / a).scale(Complex64::new(1.0, 0.0));
    let nx = (((nb as f64) / 2.0).sqrt().round() as usize).max(8);
    let ntheta = nb.div_ceil(nx).max(4);
    let xs = lobatto(lo, hi, nx);
    let rho = |x: f64| (r * r - x * x / (a * a)).max(0.0).sqrt();
    let mut raw = Raw::default();
    for (i, &x) in xs.iter().enumerate() {
        let p0 = base.scale_real(x);
        let offset = if i % 2 == 1 { PI / ntheta as f64 } else { 0.0 };
        for k in 0..ntheta {
            let zeta = rho(x) * cis(offset + 2.0 * PI * k as f64 / ntheta as f64);
            raw.boundary.push(p0.add(&v.scale(zeta)));
        }
    }
    let per = ni.div_ceil(nx).max(1);
    for (i, &x) in xs.iter().enumerate() {
        let p0 = base.scale_real(x);
        for j in 0..per {
            let rr = 0.999 * rho(x) * ((j as f64 + 0.5) / per as f64).sqrt();
            let zeta = rr * cis(j as f64 * GOLDEN_ANGLE + i as f64);
            raw.interior.push(p0.add(&v.scale(zeta)));
        }
    }
    raw.interior.truncate(ni);
    raw
}

fn cone(form: &LinearForm, aperture: f64, r: f64, nb: usize, ni: usize) -> Raw {
    let axis = form.dual_point();
    let axis = axis.scale_real(1.0 / axis.norm());
    let alpha = aperture.acos();
    let mut raw = Raw::default();
    if form.dim() == 1 {
        let u = axis.coords()[0];
        let per = nb.div_ceil(3).max(2);
        for sign in [-1.0, 1.0] {
            let dir = u * cis(sign * alpha);
            raw.boundary
                .extend(lobatto(0.0, r, per).into_iter().map(|t| Point::one(t * dir)));
        }
        raw.boundary.extend(
            lobatto(-alpha, alpha, per)
                .into_iter()
                .map(|t| Point::one(r * u * cis(t))),
        );
        raw.interior = (0..ni)
            .map(|k| {
                let rho = r * ((k as f64 + 0.5) / ni as f64).sqrt();
                let t = alpha * (2.0 * frac(k as f64 * KR1) - 1.0) * 0.999;
                Point::one(rho * u * cis(t))
            })
            .collect();
        return raw;
    }
    // Real orthonormal complement of the axis in R^4.
    let basis = [
        Point::two(c(1.0, 0.0), c(0.0, 0.0)),
        Point::two(c(0.0, 1.0), c(0.0, 0.0)),
        Point::two(c(0.0, 0.0), c(1.0, 0.0)),
        Point::two(c(0.0, 0.0), c(0.0, 1.0)),
    ];
    let mut frame: Vec<Point> = vec![axis];
    for e in basis {
        let mut v = e;
        for f in &frame {
            v = v.sub(&f.scale_real(v.real_inner(f)));
        }
        if v.norm() > 1e-6 && frame.len() < 4 {
            frame.push(v.scale_real(1.0 / v.norm()));
        }
    }
    let ndir = ((nb as f64 / 2.0).sqrt().ceil() as usize).max(8);
    let nt = (nb / 2).div_ceil(ndir).max(2);
    for d in sphere2(ndir) {
        let perp = frame[1]
            .scale_real(d[0])
            .add(&frame[2].scale_real(d[1]))
            .add(&frame[3].scale_real(d[2]));
        let ray = axis.scale_real(alpha.cos()).add(&perp.scale_real(alpha.sin()));
        for t in lobatto(0.0, r, nt) {
            raw.boundary.push(ray.scale_real(t));
        }
    }
    // Cap and interior by filtering lattices through the cone.
    let spec = RegionSpec::Cone {
        form: form.clone(),
        aperture,
    };
    let inside = |p: &Point| spec.contains(p);
    raw.boundary.extend(
        sphere3(nb * 2)
            .into_iter()
            .map(|p| p.scale_real(r))
            .filter(inside)
            .take(nb / 2),
    );
    raw.interior = ball4(ni * 4)
        .into_iter()
        .map(|p| p.scale_real(r))
        .filter(inside)
        .take(ni)
        .collect();
    raw
}

fn example1(r: f64, nb: usize, ni: usize) -> Raw {
    let mut raw = Raw::default();
    let nb_a = nb * 3 / 4;
    let nb_b = nb - nb_a;
    if r <= 1.0 {
        raw.boundary.extend(sphere3(nb_a).into_iter().map(|p| p.scale_real(r)));
    } else {
        let rho1 = (r * r - 1.0).sqrt();
        // Face {|z2| = 1}, z1 on the torus and inside the disk of radius rho1.
        let face = nb_a / 2;
        let angles = ((face as f64).sqrt().ceil() as usize).max(4);
        let rows = face.div_ceil(angles);
        let torus = rows.div_ceil(2);
        let mut z1s = circle(c(0.0, 0.0), rho1, torus);
        z1s.extend(sunflower(c(0.0, 0.0), rho1, rows - torus));
        for (j, z1) in z1s.iter().enumerate() {
            for k in 0..angles {
                let z2 = cis(2.0 * PI * (k as f64 + 0.5 * (j % 2) as f64) / angles as f64);
                raw.boundary.push(Point::two(*z1, z2));
            }
        }
        // Cap {|z| = R, |z2| <= 1}.
        let cap = nb_a - face;
        for k in 0..cap {
            let s = ((k as f64 + 0.5) / cap as f64).sqrt();
            let z1 = (r * r - s * s).sqrt() * cis(2.0 * PI * frac(k as f64 * KR1));
            let z2 = s * cis(2.0 * PI * frac(k as f64 * KR2));
            raw.boundary.push(Point::two(z1, z2));
        }
    }
    // The line {z1 = 0} truncated to the disk of radius R.
    raw.boundary
        .extend(circle(c(0.0, 0.0), r, nb_b).into_iter().map(|w| Point::two(c(0.0, 0.0), w)));
    let ni_b = ni / 4;
    let ni_a = ni - ni_b;
    let rho1 = (r * r - 1.0).max(0.0).sqrt().max(r.min(1.0));
    let m = ((ni_a as f64).sqrt().ceil() as usize).max(1);
    for (k, z1) in sunflower(c(0.0, 0.0), rho1, m).into_iter().enumerate() {
        for z2 in sunflower(c(0.0, 0.0), 1.0f64.min(r), m) {
            raw.interior.push(Point::two(z1, z2 * cis(k as f64)));
        }
    }
    raw.interior.truncate(ni_a);
    raw.interior
        .extend(sunflower(c(0.0, 0.0), r, ni_b).into_iter().map(|w| Point::two(c(0.0, 0.0), w)));
    raw
}

/// Points of a one-dimensional set on the circle `|z| = rho`.
fn points_at_radius(spec: &RegionSpec, rho: f64, n: usize) -> Vec<Complex64> {
    let on_circle = |z: Complex64| (z.norm() - rho).abs() <= 1e-12 * rho.max(1.0);
    let mut out = match spec {
        RegionSpec::Segment { .. } => vec![c(rho, 0.0), c(-rho, 0.0)],
        RegionSpec::Halfline { origin, direction } => {
            let d = direction.coords()[0] / direction.norm();
            let o = origin.coords()[0];
            let beta = (o * d.conj()).re;
            let disc = beta * beta - o.norm_sqr() + rho * rho;
            if disc < 0.0 {
                Vec::new()
            } else {
                [-beta - disc.sqrt(), -beta + disc.sqrt()]
                    .into_iter()
                    .filter(|t| *t >= 0.0)
                    .map(|t| o + t * d)
                    .collect()
            }
        }
        RegionSpec::Slab { form, .. } => {
            let a = form.coeffs()[0];
            let x = rho * a.norm();
            vec![c(x, 0.0) / a, c(-x, 0.0) / a]
        }
        RegionSpec::Union { parts } => parts.iter().flat_map(|p| points_at_radius(p, rho, n)).collect(),
        _ => circle(c(0.0, 0.0), rho, n),
    };
    out.retain(|z| on_circle(*z) && spec.contains(&Point::one(*z)));
    out
}

fn product(f1: &RegionSpec, f2: &RegionSpec, r: f64, den: Density) -> Raw {
    let nf = ((den.total() as f64).sqrt().ceil() as usize).max(4);
    let per_factor = Density::from_total(nf);
    let pick = |spec: &RegionSpec| -> Vec<Complex64> {
        sample(spec, r, per_factor)
            .map(|s| s.points().iter().map(|p| p.coords()[0]).collect())
            .unwrap_or_default()
    };
    let s1 = pick(f1);
    let s2 = pick(f2);
    let limit = r * r * (1.0 + 1e-12);
    let mut raw = Raw::default();
    for &p in &s1 {
        for &q in &s2 {
            if p.norm_sqr() + q.norm_sqr() <= limit {
                raw.boundary.push(Point::two(p, q));
            }
        }
    }
    // Cap {|z1|² + |z2|² = R²}.
    let around = nf.div_ceil(4).max(4);
    for &p in &s1 {
        let rest = r * r - p.norm_sqr();
        if rest > 0.0 {
            for q in points_at_radius(f2, rest.sqrt(), around) {
                raw.boundary.push(Point::two(p, q));
            }
        }
    }
    for &q in &s2 {
        let rest = r * r - q.norm_sqr();
        if rest > 0.0 {
            for p in points_at_radius(f1, rest.sqrt(), around) {
                raw.boundary.push(Point::two(p, q));
            }
        }
    }
    raw
}

fn fatten(base: &RegionSpec, eps: f64, r: f64, nb: usize, ni: usize) -> Raw {
    let dim = base.dimension();
    let ndir = if dim == 1 { 8 } else { 12 };
    let seeds = Density::new(nb.div_ceil(ndir).max(4), ni.div_ceil(2));
    let Ok(core) = sample(base, r + eps, seeds) else {
        return Raw::default();
    };
    let dirs = unit_directions(dim, ndir);
    let mut raw = Raw::default();
    for (i, p) in core.boundary_points().iter().enumerate() {
        for (k, d) in dirs.iter().enumerate() {
            raw.boundary.push(p.add(&d.scale_real(eps)));
            if (i + k) % (2 * ndir) == 0 {
                raw.interior.push(p.add(&d.scale_real(0.5 * eps)));
            }
        }
    }
    raw.interior.extend(core.points().iter().copied());
    raw.interior.truncate(ni.max(1));
    raw
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_members(spec: &RegionSpec, region: &SampledRegion) {
        for p in region.points() {
            assert!(p.norm() <= region.radius() * (1.0 + 1e-12), "{p:?} outside radius");
            assert!(spec.contains(p), "{p:?} not in {spec:?}");
        }
    }

    #[test]
    fn unit_disk_counts() {
        let spec = RegionSpec::unit_disk();
        let s = sample(&spec, 1.0, Density::new(256, 64)).unwrap();
        assert_eq!(s.len(), 320);
        let on_circle = s.points().iter().filter(|p| (p.norm() - 1.0).abs() < 1e-12).count();
        assert_eq!(on_circle, 256);
        assert_members(&spec, &s);
    }

    #[test]
    fn slab_membership() {
        let spec = RegionSpec::slab(LinearForm::coordinate(2, 0), -2.0, 2.0);
        let s = sample(&spec, 4.0, Density::new(400, 100)).unwrap();
        assert!(s.len() > 400);
        for p in s.points() {
            let x = p.coords()[0];
            assert!(x.re >= -2.0 - 1e-12 && x.re <= 2.0 + 1e-12 && x.im.abs() < 1e-12);
        }
        assert_members(&spec, &s);
        assert!(s.density().boundary * 2 >= s.len());
    }

    #[test]
    fn example1_shape() {
        let spec = RegionSpec::Example1;
        let s = sample(&spec, 2.0, Density::new(400, 100)).unwrap();
        assert_members(&spec, &s);
        let band = s.points().iter().filter(|p| p.coords()[1].norm() <= 1.0 + 1e-12).count();
        let line = s
            .points()
            .iter()
            .filter(|p| p.coords()[0].norm() == 0.0 && p.coords()[1].norm() > 1.0)
            .count();
        assert!(band > 0 && line > 0);
        assert_eq!(band + line, s.len());
    }

    #[test]
    fn fattened_segment_within_epsilon() {
        let seg = RegionSpec::segment(-2.0, 2.0);
        let spec = seg.clone().fatten(0.5).unwrap();
        let s = sample(&spec, 4.0, Density::new(200, 50)).unwrap();
        for p in s.points() {
            assert!(seg.distance(p) <= 0.5 + 1e-12);
        }
        assert_members(&spec, &s);
    }

    #[test]
    fn quarter_disk_product() {
        let spec = RegionSpec::positive_axis().product(RegionSpec::positive_axis()).unwrap();
        let s = sample(&spec, 8.0, Density::from_total(500)).unwrap();
        for p in s.points() {
            for z in p.coords() {
                assert!(z.im == 0.0 && z.re >= 0.0);
            }
        }
        assert_members(&spec, &s);
        let cap = s.points().iter().filter(|p| (p.norm() - 8.0).abs() < 1e-9).count();
        assert!(cap > 10);
    }

    #[test]
    fn whole_space_schedule() {
        let spec = RegionSpec::whole_space(2);
        let schedule = TruncationSchedule::new(vec![2.0, 4.0, 8.0]).unwrap();
        let regions = truncate_schedule(&spec, &schedule, DensityRule::fixed(100)).unwrap();
        for (region, r) in regions.iter().zip([2.0, 4.0, 8.0]) {
            let max = region.points().iter().map(Point::norm).fold(0.0, f64::max);
            assert!((max - r).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_truncation_is_an_error() {
        let spec = RegionSpec::disk(c(10.0, 0.0), 1.0);
        assert_eq!(
            sample(&spec, 2.0, Density::new(64, 16)).unwrap_err(),
            RegionError::EmptyRegion { radius: 2.0 }
        );
    }

    #[test]
    fn schedule_validation() {
        assert!(TruncationSchedule::new(vec![2.0, 2.0]).is_err());
        assert!(TruncationSchedule::new(vec![-1.0, 2.0]).is_err());
        assert!(TruncationSchedule::new(vec![]).is_err());
    }

    #[test]
    fn every_constructor_samples_members() {
        let specs = vec![
            RegionSpec::disk(c(0.5, 0.5), 1.0),
            RegionSpec::ball(1.0),
            RegionSpec::polydisk(1.0, 2.0),
            RegionSpec::segment(-1.0, 3.0),
            RegionSpec::positive_axis(),
            RegionSpec::Halfline {
                origin: Point::two(c(1.0, 0.0), c(0.0, 0.0)),
                direction: Point::two(c(0.0, 1.0), c(1.0, 0.0)),
            },
            RegionSpec::slab(LinearForm::new(vec![c(0.0, 2.0)]), -1.0, 1.0),
            RegionSpec::slab(LinearForm::new(vec![c(1.0, 1.0), c(0.5, 0.0)]), 0.0, 1.0),
            RegionSpec::cone(LinearForm::coordinate(1, 0), 0.0),
            RegionSpec::cone(LinearForm::new(vec![c(1.0, 0.0), c(0.0, 1.0)]), 0.5),
            RegionSpec::Example1,
            RegionSpec::example1_minus_slice(),
            RegionSpec::segment(-1.0, 1.0).product(RegionSpec::unit_disk()).unwrap(),
            RegionSpec::Union {
                parts: vec![RegionSpec::segment(-1.0, 1.0), RegionSpec::unit_disk()],
            },
            RegionSpec::Example1.fatten(0.5).unwrap(),
        ];
        for spec in specs {
            let s = sample(&spec, 3.0, Density::new(200, 50)).unwrap();
            assert!(!s.is_empty(), "{spec:?}");
            assert_members(&spec, &s);
            let again = sample(&spec, 3.0, Density::new(200, 50)).unwrap();
            assert_eq!(s.points(), again.points());
        }
    }
}
