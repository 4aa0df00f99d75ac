//! Constructive subsets of `C^1` and `C^2`.
//!
//! Every constructor has an exact Euclidean distance function, which gives
//! both the membership predicate used when sampling and the fattening
//! operation. Truncations `E_R = E ∩ {|z| <= R}` are discretized by
//! [`sample`]; classical Green functions are available through
//! [`closed_form_green`].

mod sample;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{LinearForm, Point};

pub use sample::{
    sample, truncate_schedule, unit_directions, Density, DensityRule, SampledRegion, TruncationSchedule,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("invalid region: {0}")]
    Invalid(String),
    #[error("product of dimension {0} exceeds 2")]
    DimensionOverflow(usize),
    #[error("E ∩ {{|z| <= {radius}}} is empty")]
    EmptyRegion { radius: f64 },
    #[error("invalid density: {0}")]
    Density(String),
    #[error("invalid truncation schedule: {0}")]
    Schedule(String),
}

/// Description of a set `E ⊂ C^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RegionSpec {
    /// Closed disk in `C`.
    Disk { center: Complex64, radius: f64 },
    /// Closed Euclidean ball about the origin; without a radius, all of `C^dimension`.
    Ball {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default = "two")]
        dimension: usize,
    },
    /// `{|z1| <= r1, |z2| <= r2}`.
    Polydisk { radii: [f64; 2] },
    /// Real segment `[a, b] ⊂ C`.
    Segment { a: f64, b: f64 },
    /// `{origin + t·direction : t >= 0}`.
    Halfline { origin: Point, direction: Point },
    /// `{z : ℓ(z) ∈ [lo, hi]}`; the value of `ℓ` must be real.
    Slab { form: LinearForm, interval: [f64; 2] },
    /// `{z : Re ℓ(z) >= aperture·|a|·|z|}`, a real cone about `conj(a)`;
    /// aperture 0 gives a half-space.
    Cone { form: LinearForm, aperture: f64 },
    /// `{|z2| <= 1} ∪ {z1 = 0}` in `C^2`.
    Example1,
    Product { factors: Vec<RegionSpec> },
    Union { parts: Vec<RegionSpec> },
    /// `{z : dist(z, base) <= epsilon}`.
    Fatten { base: Box<RegionSpec>, epsilon: f64 },
    /// `base \ {ℓ = 0}`. Samples on the slice are dropped.
    RemoveSlice { base: Box<RegionSpec>, form: LinearForm },
}

fn two() -> usize {
    2
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, RegionError> {
    Err(RegionError::Invalid(msg.into()))
}

fn positive(name: &str, v: f64) -> Result<(), RegionError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        invalid(format!("{name} must be positive and finite, got {v}"))
    }
}

impl RegionSpec {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        RegionSpec::Disk { center, radius }
    }

    pub fn unit_disk() -> Self {
        Self::disk(Complex64::new(0.0, 0.0), 1.0)
    }

    pub fn ball(radius: f64) -> Self {
        RegionSpec::Ball {
            radius: Some(radius),
            dimension: 2,
        }
    }

    /// All of `C^dimension`; its truncations are balls.
    pub fn whole_space(dimension: usize) -> Self {
        RegionSpec::Ball {
            radius: None,
            dimension,
        }
    }

    pub fn polydisk(r1: f64, r2: f64) -> Self {
        RegionSpec::Polydisk { radii: [r1, r2] }
    }

    pub fn segment(a: f64, b: f64) -> Self {
        RegionSpec::Segment { a, b }
    }

    /// `[0, ∞)` in `C`.
    pub fn positive_axis() -> Self {
        RegionSpec::Halfline {
            origin: Point::real1(0.0),
            direction: Point::real1(1.0),
        }
    }

    pub fn slab(form: LinearForm, lo: f64, hi: f64) -> Self {
        RegionSpec::Slab {
            form,
            interval: [lo, hi],
        }
    }

    pub fn cone(form: LinearForm, aperture: f64) -> Self {
        RegionSpec::Cone { form, aperture }
    }

    /// `Example1` with the pluripolar line `{z1 = 0}` removed.
    pub fn example1_minus_slice() -> Self {
        RegionSpec::RemoveSlice {
            base: Box::new(RegionSpec::Example1),
            form: LinearForm::coordinate(2, 0),
        }
    }

    pub fn fatten(self, epsilon: f64) -> Result<Self, RegionError> {
        let spec = RegionSpec::Fatten {
            base: Box::new(self),
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn product(self, other: RegionSpec) -> Result<Self, RegionError> {
        let spec = RegionSpec::Product {
            factors: vec![self, other],
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn remove_slice(self, form: LinearForm) -> Result<Self, RegionError> {
        let spec = RegionSpec::RemoveSlice {
            base: Box::new(self),
            form,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Dimension `m` of the ambient space, without validation.
    pub fn dimension(&self) -> usize {
        match self {
            RegionSpec::Disk { .. } | RegionSpec::Segment { .. } => 1,
            RegionSpec::Ball { dimension, .. } => *dimension,
            RegionSpec::Polydisk { .. } | RegionSpec::Example1 => 2,
            RegionSpec::Halfline { origin, .. } => origin.dim(),
            RegionSpec::Slab { form, .. } | RegionSpec::Cone { form, .. } => form.dim(),
            RegionSpec::Product { factors } => factors.iter().map(|f| f.dimension()).sum(),
            RegionSpec::Union { parts } => parts.first().map_or(0, |p| p.dimension()),
            RegionSpec::Fatten { base, .. } | RegionSpec::RemoveSlice { base, .. } => base.dimension(),
        }
    }

    pub fn validate(&self) -> Result<(), RegionError> {
        match self {
            RegionSpec::Disk { center, radius } => {
                positive("disk radius", *radius)?;
                if !(center.re.is_finite() && center.im.is_finite()) {
                    return invalid("disk center must be finite");
                }
            }
            RegionSpec::Ball { radius, dimension } => {
                if let Some(r) = radius {
                    positive("ball radius", *r)?;
                }
                if !(1..=2).contains(dimension) {
                    return invalid(format!("ball dimension must be 1 or 2, got {dimension}"));
                }
            }
            RegionSpec::Polydisk { radii } => {
                positive("polydisk radius", radii[0])?;
                positive("polydisk radius", radii[1])?;
            }
            RegionSpec::Segment { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return invalid(format!("segment needs finite a < b, got [{a}, {b}]"));
                }
            }
            RegionSpec::Halfline { origin, direction } => {
                if origin.dim() != direction.dim() {
                    return invalid("halfline origin and direction differ in dimension");
                }
                if !origin.is_finite() || !direction.is_finite() || direction.norm() == 0.0 {
                    return invalid("halfline direction must be finite and nonzero");
                }
            }
            RegionSpec::Slab { form, interval } => {
                check_form(form)?;
                let [lo, hi] = *interval;
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return invalid(format!("slab interval must satisfy lo <= hi, got [{lo}, {hi}]"));
                }
            }
            RegionSpec::Cone { form, aperture } => {
                check_form(form)?;
                if !(0.0..1.0).contains(aperture) {
                    return invalid(format!("cone aperture must lie in [0, 1), got {aperture}"));
                }
            }
            RegionSpec::Example1 => {}
            RegionSpec::Product { factors } => {
                if factors.len() != 2 {
                    return invalid("product takes exactly two factors");
                }
                for f in factors {
                    f.validate()?;
                }
                let dim: usize = factors.iter().map(|f| f.dimension()).sum();
                if dim > 2 {
                    return Err(RegionError::DimensionOverflow(dim));
                }
            }
            RegionSpec::Union { parts } => {
                let Some(first) = parts.first() else {
                    return invalid("union needs at least one part");
                };
                for p in parts {
                    p.validate()?;
                    if p.dimension() != first.dimension() {
                        return invalid("union parts differ in dimension");
                    }
                }
            }
            RegionSpec::Fatten { base, epsilon } => {
                base.validate()?;
                positive("fattening epsilon", *epsilon)?;
            }
            RegionSpec::RemoveSlice { base, form } => {
                base.validate()?;
                check_form(form)?;
                if form.dim() != base.dimension() {
                    return invalid("slice form dimension differs from the region's");
                }
            }
        }
        if !(1..=2).contains(&self.dimension()) {
            return invalid(format!("dimension must be 1 or 2, got {}", self.dimension()));
        }
        Ok(())
    }

    /// Euclidean distance from `z` to the (closure of the) set.
    pub fn distance(&self, z: &Point) -> f64 {
        match self {
            RegionSpec::Disk { center, radius } => ((z.coords()[0] - center).norm() - radius).max(0.0),
            RegionSpec::Ball { radius, .. } => radius.map_or(0.0, |r| (z.norm() - r).max(0.0)),
            RegionSpec::Polydisk { radii } => z
                .coords()
                .iter()
                .zip(radii)
                .map(|(w, r)| (w.norm() - r).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt(),
            RegionSpec::Segment { a, b } => {
                let w = z.coords()[0];
                (w - Complex64::new(w.re.clamp(*a, *b), 0.0)).norm()
            }
            RegionSpec::Halfline { origin, direction } => {
                let d = direction.scale_real(1.0 / direction.norm());
                let rel = z.sub(origin);
                let t = rel.real_inner(&d).max(0.0);
                rel.sub(&d.scale_real(t)).norm()
            }
            RegionSpec::Slab { form, interval } => {
                let u = form.eval(z);
                let nearest = Complex64::new(u.re.clamp(interval[0], interval[1]), 0.0);
                (u - nearest).norm() / form.norm()
            }
            RegionSpec::Cone { form, aperture } => {
                let r = z.norm();
                if r == 0.0 {
                    return 0.0;
                }
                let axis = form.dual_point();
                let axis = axis.scale_real(1.0 / axis.norm());
                let cos_phi = (z.real_inner(&axis) / r).clamp(-1.0, 1.0);
                let excess = cos_phi.acos() - aperture.acos();
                if excess <= 0.0 {
                    0.0
                } else if excess >= std::f64::consts::FRAC_PI_2 {
                    r
                } else {
                    r * excess.sin()
                }
            }
            RegionSpec::Example1 => {
                let c = z.coords();
                (c[1].norm() - 1.0).max(0.0).min(c[0].norm())
            }
            RegionSpec::Product { factors } => {
                let c = z.coords();
                let (p, q) = split(c, factors[0].dimension());
                (factors[0].distance(&p).powi(2) + factors[1].distance(&q).powi(2)).sqrt()
            }
            RegionSpec::Union { parts } => parts.iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min),
            RegionSpec::Fatten { base, epsilon } => (base.distance(z) - epsilon).max(0.0),
            RegionSpec::RemoveSlice { base, .. } => base.distance(z),
        }
    }

    /// Membership up to a relative rounding allowance of `1e-9`.
    pub fn contains(&self, z: &Point) -> bool {
        if z.dim() != self.dimension() {
            return false;
        }
        let slack = 1e-9 * z.norm().max(1.0);
        if self.distance(z) > slack {
            return false;
        }
        match self {
            RegionSpec::RemoveSlice { form, .. } => !on_slice(form, z),
            RegionSpec::Union { parts } => parts.iter().any(|p| p.contains(z)),
            RegionSpec::Product { factors } => {
                let (p, q) = split(z.coords(), factors[0].dimension());
                factors[0].contains(&p) && factors[1].contains(&q)
            }
            _ => true,
        }
    }

    /// `sup |z|` over the set, or `None` when unbounded.
    pub fn circumradius(&self) -> Option<f64> {
        match self {
            RegionSpec::Disk { center, radius } => Some(center.norm() + radius),
            RegionSpec::Ball { radius, .. } => *radius,
            RegionSpec::Polydisk { radii } => Some(radii[0].hypot(radii[1])),
            RegionSpec::Segment { a, b } => Some(a.abs().max(b.abs())),
            RegionSpec::Halfline { .. } => None,
            RegionSpec::Slab { form, interval } => {
                (form.dim() == 1).then(|| interval[0].abs().max(interval[1].abs()) / form.norm())
            }
            RegionSpec::Cone { .. } | RegionSpec::Example1 => None,
            RegionSpec::Product { factors } => {
                let a = factors[0].circumradius()?;
                let b = factors[1].circumradius()?;
                Some(a.hypot(b))
            }
            RegionSpec::Union { parts } => parts
                .iter()
                .map(|p| p.circumradius())
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r))),
            RegionSpec::Fatten { base, epsilon } => base.circumradius().map(|r| r + epsilon),
            RegionSpec::RemoveSlice { base, .. } => base.circumradius(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.circumradius().is_some()
    }
}

fn check_form(form: &LinearForm) -> Result<(), RegionError> {
    if form.is_zero() || form.coeffs().iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return invalid("linear form must be finite and nonzero");
    }
    if !(1..=2).contains(&form.dim()) {
        return invalid("linear form must act on C^1 or C^2");
    }
    Ok(())
}

pub(crate) fn on_slice(form: &LinearForm, z: &Point) -> bool {
    form.eval(z).norm() <= 1e-9 * form.norm() * z.norm().max(1.0)
}

fn split(c: &[Complex64], first: usize) -> (Point, Point) {
    (
        Point::from_slice(&c[..first]).expect("factor dimension"),
        Point::from_slice(&c[first..]).expect("factor dimension"),
    )
}

/// Green function of `[-1, 1]` at `u`: `log |u + sqrt(u² - 1)|` on the branch
/// of modulus at least 1.
pub fn unit_segment_green(u: Complex64) -> f64 {
    let root = (u * u - 1.0).sqrt();
    let a = (u + root).norm();
    let b = (u - root).norm();
    a.max(b).ln().max(0.0)
}

/// Green function of the real segment `[a, b]` at `z`.
pub fn segment_green(a: f64, b: f64, z: Complex64) -> f64 {
    let u = (2.0 * z - (a + b)) / (b - a);
    unit_segment_green(u)
}

/// Exact (untruncated) Green function where a classical formula exists.
///
/// `Example1` minus the slice `{z1 = 0}` is `{|z2| <= 1}` up to a pluripolar
/// set, whose Green function is `log⁺|z2|` by the product formula
/// `V_{C × D} = max(V_C, V_D)`.
pub fn closed_form_green(spec: &RegionSpec, z: &Point) -> Option<f64> {
    if z.dim() != spec.dimension() {
        return None;
    }
    let log_plus = |x: f64| x.ln().max(0.0);
    match spec {
        RegionSpec::Disk { center, radius } => Some(log_plus((z.coords()[0] - center).norm() / radius)),
        RegionSpec::Ball { radius, .. } => Some(radius.map_or(0.0, |r| log_plus(z.norm() / r))),
        RegionSpec::Polydisk { radii } => Some(
            z.coords()
                .iter()
                .zip(radii)
                .map(|(w, r)| log_plus(w.norm() / r))
                .fold(0.0, f64::max),
        ),
        RegionSpec::Segment { a, b } => Some(segment_green(*a, *b, z.coords()[0])),
        // An unbounded ray in C is non-thin at infinity.
        RegionSpec::Halfline { .. } if spec.dimension() == 1 => Some(0.0),
        RegionSpec::RemoveSlice { base, form } if **base == RegionSpec::Example1 => {
            let c = form.coeffs();
            (c[1].norm() == 0.0).then(|| log_plus(z.coords()[1].norm()))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation() {
        assert!(RegionSpec::disk(c(0.0, 0.0), 0.0).validate().is_err());
        assert!(RegionSpec::segment(2.0, -2.0).validate().is_err());
        assert!(RegionSpec::slab(LinearForm::new(vec![c(0.0, 0.0)]), -1.0, 1.0)
            .validate()
            .is_err());
        assert!(RegionSpec::cone(LinearForm::coordinate(1, 0), 1.0).validate().is_err());
        assert!(RegionSpec::unit_disk().fatten(-0.5).is_err());
        assert_eq!(
            RegionSpec::Example1.product(RegionSpec::unit_disk()),
            Err(RegionError::DimensionOverflow(3))
        );
        assert!(RegionSpec::positive_axis().product(RegionSpec::positive_axis()).is_ok());
    }

    #[test]
    fn distances() {
        let seg = RegionSpec::segment(-2.0, 2.0);
        assert!((seg.distance(&Point::one(c(3.0, 4.0))) - (1.0f64 + 16.0).sqrt()).abs() < 1e-12);
        let slab = RegionSpec::slab(LinearForm::coordinate(2, 0), -2.0, 2.0);
        assert_eq!(slab.distance(&Point::two(c(1.0, 0.0), c(100.0, 3.0))), 0.0);
        assert!((slab.distance(&Point::two(c(3.0, 1.0), c(0.0, 0.0))) - 2f64.sqrt()).abs() < 1e-12);
        let half = RegionSpec::cone(LinearForm::coordinate(1, 0), 0.0);
        assert_eq!(half.distance(&Point::one(c(0.0, 5.0))), 0.0);
        assert!((half.distance(&Point::one(c(-1.0, 1.0))) - 1.0).abs() < 1e-12);
        assert_eq!(RegionSpec::Example1.distance(&Point::two(c(0.0, 0.0), c(7.0, 0.0))), 0.0);
        let q = RegionSpec::positive_axis().product(RegionSpec::positive_axis()).unwrap();
        assert!((q.distance(&Point::real2(-1.0, -1.0)) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn slice_removal_membership() {
        let e = RegionSpec::example1_minus_slice();
        assert!(!e.contains(&Point::two(c(0.0, 0.0), c(0.5, 0.0))));
        assert!(e.contains(&Point::two(c(1.0, 0.0), c(0.5, 0.0))));
        assert!(!e.contains(&Point::two(c(1.0, 0.0), c(2.0, 0.0))));
    }

    #[test]
    fn closed_forms() {
        // Paper-independent: the product formula gives log⁺|z2| = log 2 here.
        let v = closed_form_green(&RegionSpec::example1_minus_slice(), &Point::real2(1.0, 2.0)).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        let v = closed_form_green(&RegionSpec::segment(-2.0, 2.0), &Point::real1(3.0)).unwrap();
        assert!((v - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        assert!((v - 0.96242).abs() < 1e-5);
        let v = closed_form_green(&RegionSpec::segment(-2.0, 2.0), &Point::one(c(0.0, 2.0))).unwrap();
        assert!((v - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        let v = closed_form_green(&RegionSpec::ball(1.0), &Point::two(c(0.6, 0.0), c(0.0, 0.8))).unwrap();
        assert_eq!(v, 0.0);
        assert!(closed_form_green(&RegionSpec::Example1, &Point::real2(1.0, 2.0)).is_none());
        assert!(closed_form_green(&RegionSpec::slab(LinearForm::coordinate(1, 0), 0.0, 1.0), &Point::real1(2.0)).is_none());
    }

    #[test]
    fn segment_green_matches_chebyshev_growth() {
        // (1/n) log T_n(u) → g(u); T_n(cosh t) = cosh(n t).
        let u = 1.5f64;
        let g = unit_segment_green(Complex64::new(u, 0.0));
        let n = 200.0;
        let t = u.acosh();
        assert!(((n * t).cosh().ln() / n - g).abs() < 1e-2);
        assert!((t - g).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let spec = RegionSpec::Fatten {
            base: Box::new(RegionSpec::slab(LinearForm::coordinate(2, 0), -2.0, 2.0)),
            epsilon: 0.5,
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: RegionSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let ball: RegionSpec = serde_json::from_str(r#"{"type":"ball"}"#).unwrap();
        assert_eq!(ball, RegionSpec::whole_space(2));
    }
}
