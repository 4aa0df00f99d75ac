//! Limits `R → ∞` and `|z| → ∞`: thinness profiles, Robin constants,
//! capacities and the capacity-slope criterion.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::{extremal_value, green_trend, ExtremalError, DEFAULT_PHASES};
use crate::point::Point;
use crate::regions::{sample, unit_directions, Density, DensityRule, RegionError, RegionSpec, SampledRegion, TruncationSchedule};

/// Extrapolated limit at or below which a decreasing profile counts as
/// evidence of non-thinness.
pub const NON_THIN_LIMIT: f64 = 0.05;
/// Floor every value must clear for thin evidence.
pub const THIN_FLOOR: f64 = 0.10;
/// Allowed wobble for "flat" and "nonincreasing".
pub const TREND_TOL: f64 = 0.02;
pub const MIN_DIRECTIONS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error("schedule has {0} radii; at least 3 are needed")]
    ScheduleTooShort(usize),
    #[error("the Robin constant needs a bounded set")]
    Unbounded,
    #[error("ray radius {radius} does not exceed the circumradius {circumradius}")]
    RadiusInside { radius: f64, circumradius: f64 },
    #[error("need at least {MIN_DIRECTIONS} ray directions, got {0}")]
    TooFewDirections(usize),
    #[error("C_m must be positive and finite, got {0}")]
    InvalidCm(f64),
    #[error("evaluation point has dimension {got}, region has {expected}")]
    Dimension { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonThinEvidence,
    ThinEvidence,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NonThinEvidence => "non-thin-evidence",
            Verdict::ThinEvidence => "thin-evidence",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Finest degree of the trend `n/4, n/2, n`; a multiple of 4.
    pub degree: usize,
    pub phases: usize,
    pub density: DensityRule,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            degree: 8,
            phases: DEFAULT_PHASES,
            density: DensityRule::new(1500, 4.0, 20_000),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub radius: f64,
    /// Trend value `max(0, 2 v_n − v_{n/2})`.
    pub value: f64,
    /// Value at the finest degree alone.
    pub finest: f64,
    pub slack: f64,
    pub degree: usize,
    pub spread: f64,
    pub samples: usize,
    pub converged: bool,
}

/// `(R_i, V_{E_{R_i}}(z))` with an extrapolated limit and a verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitProfile {
    pub z: Point,
    pub points: Vec<ProfilePoint>,
    /// Intercept `v∞` of the fit `v = v∞ + a·R^{-1/2}`.
    pub extrapolated: f64,
    pub rate: f64,
    pub degrees: Vec<usize>,
    pub verdict: Verdict,
}

impl LimitProfile {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

pub fn thinness_profile(
    spec: &RegionSpec,
    z: &Point,
    schedule: &TruncationSchedule,
    options: &ProfileOptions,
) -> Result<LimitProfile, AsymptoticsError> {
    if schedule.len() < 3 {
        return Err(AsymptoticsError::ScheduleTooShort(schedule.len()));
    }
    if z.dim() != spec.dimension() {
        return Err(AsymptoticsError::Dimension {
            got: z.dim(),
            expected: spec.dimension(),
        });
    }
    let points = schedule
        .radii()
        .par_iter()
        .map(|&radius| -> Result<ProfilePoint, AsymptoticsError> {
            let region = sample(spec, radius, options.density.at(radius))?;
            let trend = green_trend(&region, z, options.degree, options.phases)?;
            Ok(ProfilePoint {
                radius,
                value: trend.value,
                finest: trend.finest().value,
                slack: trend.slack(),
                degree: options.degree,
                spread: trend.spread,
                samples: region.len(),
                converged: trend.converged,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let radii: Vec<f64> = points.iter().map(|p| p.radius).collect();
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    let (extrapolated, rate) = fit_inverse_sqrt(&radii, &values);
    let converged = points.iter().all(|p| p.converged);
    let verdict = if converged { classify(&values, extrapolated) } else { Verdict::Inconclusive };
    let n = options.degree;
    Ok(LimitProfile {
        z: *z,
        points,
        extrapolated,
        rate,
        degrees: vec![n / 4, n / 2, n],
        verdict,
    })
}

/// Least-squares fit `v = v∞ + a·R^{-1/2}`; returns `(v∞, a)`.
pub fn fit_inverse_sqrt(radii: &[f64], values: &[f64]) -> (f64, f64) {
    let xs: Vec<f64> = radii.iter().map(|r| r.powf(-0.5)).collect();
    let (slope, intercept) = least_squares(&xs, values);
    (intercept, slope)
}

/// Ordinary least squares `y = slope·x + intercept`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Verdict thresholds on a profile ordered by increasing radius.
pub fn classify(values: &[f64], extrapolated: f64) -> Verdict {
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + TREND_TOL);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if extrapolated <= NON_THIN_LIMIT && nonincreasing {
        Verdict::NonThinEvidence
    } else if lo >= THIN_FLOOR && hi - lo <= TREND_TOL {
        Verdict::ThinEvidence
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinOptions {
    pub degree: usize,
    pub phases: usize,
    pub directions: usize,
    pub density: Density,
    /// Use the degree trend instead of the single finest degree.
    pub trend: bool,
}

impl Default for RobinOptions {
    fn default() -> Self {
        Self {
            degree: 16,
            phases: DEFAULT_PHASES,
            directions: MIN_DIRECTIONS,
            density: Density::from_total(400),
            trend: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobinSample {
    pub radius: f64,
    pub direction: usize,
    pub value: f64,
    /// `v(z) − log|z|`.
    pub excess: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobinEstimate {
    pub gamma: f64,
    /// `e^{−γ̂}`.
    pub capacity: f64,
    pub directions: Vec<Point>,
    pub radii: Vec<f64>,
    pub samples: Vec<RobinSample>,
    /// Median excess at each radius.
    pub per_radius: Vec<f64>,
    pub converged: bool,
}

/// Default ray radii: `{4, 8, 16}` times the circumradius.
pub fn default_ray_radii(circumradius: f64) -> Vec<f64> {
    [4.0, 8.0, 16.0].iter().map(|k| k * circumradius).collect()
}

/// `γ̂` of a compact set `K`, sampled whole.
pub fn robin_constant(
    spec: &RegionSpec,
    radii: Option<&[f64]>,
    options: &RobinOptions,
) -> Result<RobinEstimate, AsymptoticsError> {
    let circumradius = spec.circumradius().ok_or(AsymptoticsError::Unbounded)?;
    let region = sample(spec, circumradius, options.density)?;
    robin_for_region(&region, radii, options)
}

/// `γ̂` of a sampled region; radii default to multiples of the sample
/// circumradius.
pub fn robin_for_region(
    region: &SampledRegion,
    radii: Option<&[f64]>,
    options: &RobinOptions,
) -> Result<RobinEstimate, AsymptoticsError> {
    if options.directions < MIN_DIRECTIONS {
        return Err(AsymptoticsError::TooFewDirections(options.directions));
    }
    let circumradius = region.points().iter().map(Point::norm).fold(0.0, f64::max);
    let radii = radii.map_or_else(|| default_ray_radii(circumradius), <[f64]>::to_vec);
    TruncationSchedule::new(radii.clone())?;
    if let Some(&r) = radii.iter().find(|&&r| r <= circumradius) {
        return Err(AsymptoticsError::RadiusInside { radius: r, circumradius });
    }
    let directions = unit_directions(region.dim(), options.directions);
    let jobs: Vec<(f64, usize)> = radii
        .iter()
        .flat_map(|&r| (0..directions.len()).map(move |k| (r, k)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(radius, direction)| -> Result<RobinSample, AsymptoticsError> {
            let z = directions[direction].scale_real(radius);
            let (value, converged) = if options.trend {
                let t = green_trend(region, &z, options.degree, options.phases)?;
                (t.value, t.converged)
            } else {
                let e = extremal_value(region, &z, options.degree, options.phases)?;
                (e.value, e.converged)
            };
            Ok(RobinSample {
                radius,
                direction,
                value,
                excess: value - radius.ln(),
                converged,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let per_radius = radii
        .iter()
        .map(|&r| median(samples.iter().filter(|s| s.radius == r).map(|s| s.excess).collect()))
        .collect();
    let gamma = median(samples.iter().map(|s| s.excess).collect());
    let converged = samples.iter().all(|s| s.converged);
    Ok(RobinEstimate {
        gamma,
        capacity: (-gamma).exp(),
        directions,
        radii,
        samples,
        per_radius,
        converged,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopePoint {
    pub radius: f64,
    pub gamma: f64,
    pub capacity: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapacitySlope {
    pub points: Vec<SlopePoint>,
    /// Least-squares slope of `log Ĉ(E_R)` against `log R`.
    pub slope: f64,
    pub c_m: f64,
    /// `(C_m − 1)/C_m`.
    pub threshold: f64,
    /// `slope > threshold`.
    pub criterion: bool,
    pub converged: bool,
}

pub fn capacity_slope(
    spec: &RegionSpec,
    schedule: &TruncationSchedule,
    c_m: f64,
    options: &RobinOptions,
) -> Result<CapacitySlope, AsymptoticsError> {
    if !(c_m.is_finite() && c_m > 0.0) {
        return Err(AsymptoticsError::InvalidCm(c_m));
    }
    if schedule.len() < 3 {
        return Err(AsymptoticsError::ScheduleTooShort(schedule.len()));
    }
    let estimates = schedule
        .radii()
        .iter()
        .map(|&radius| -> Result<(SlopePoint, bool), AsymptoticsError> {
            let region = sample(spec, radius, options.density)?;
            let robin = robin_for_region(&region, None, options)?;
            Ok((
                SlopePoint {
                    radius,
                    gamma: robin.gamma,
                    capacity: robin.capacity,
                },
                robin.converged,
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let converged = estimates.iter().all(|(_, c)| *c);
    let points: Vec<SlopePoint> = estimates.into_iter().map(|(p, _)| p).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.radius.ln()).collect();
    // log Ĉ = −γ̂.
    let ys: Vec<f64> = points.iter().map(|p| -p.gamma).collect();
    let (slope, _) = least_squares(&xs, &ys);
    let threshold = (c_m - 1.0) / c_m;
    Ok(CapacitySlope {
        points,
        slope,
        c_m,
        threshold,
        criterion: slope > threshold,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn fit_recovers_model() {
        let radii = [4.0, 8.0, 16.0, 32.0];
        let values: Vec<f64> = radii.iter().map(|r: &f64| 0.3 + 2.0 / r.sqrt()).collect();
        let (v, a) = fit_inverse_sqrt(&radii, &values);
        assert!((v - 0.3).abs() < 1e-12 && (a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(classify(&[0.0, 0.0, 0.0], 0.0), Verdict::NonThinEvidence);
        assert_eq!(classify(&[0.97, 0.965, 0.962], 0.95), Verdict::ThinEvidence);
        assert_eq!(classify(&[0.97, 0.9, 0.8], 0.5), Verdict::Inconclusive);
        // Increasing profiles are never non-thin evidence.
        assert_eq!(classify(&[0.0, 0.01, 0.04], 0.04), Verdict::Inconclusive);
    }

    #[test]
    fn full_space_profile() {
        let schedule = TruncationSchedule::new(vec![2.0, 4.0, 8.0]).unwrap();
        let options = ProfileOptions {
            degree: 4,
            phases: 16,
            density: DensityRule::fixed(400),
        };
        let p = thinness_profile(&RegionSpec::whole_space(2), &Point::real2(1.0, 1.0), &schedule, &options).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.0));
        assert_eq!(p.verdict, Verdict::NonThinEvidence);
    }

    #[test]
    fn disk_robin() {
        let r = robin_constant(&RegionSpec::disk(Complex64::new(0.0, 0.0), 0.5), None, &RobinOptions::default()).unwrap();
        assert!((r.capacity - 0.5).abs() < 0.03, "{}", r.capacity);
        assert_eq!(r.capacity, (-r.gamma).exp());
        assert_eq!(r.samples.len(), 24);
    }

    #[test]
    fn robin_rejects_bad_input() {
        let opts = RobinOptions::default();
        assert_eq!(
            robin_constant(&RegionSpec::positive_axis(), None, &opts).unwrap_err(),
            AsymptoticsError::Unbounded
        );
        assert!(matches!(
            robin_constant(&RegionSpec::unit_disk(), Some(&[0.5, 2.0, 3.0]), &opts),
            Err(AsymptoticsError::RadiusInside { .. })
        ));
        let few = RobinOptions { directions: 4, ..opts };
        assert_eq!(
            robin_constant(&RegionSpec::unit_disk(), None, &few).unwrap_err(),
            AsymptoticsError::TooFewDirections(4)
        );
    }

    #[test]
    fn halfline_slope() {
        let schedule = TruncationSchedule::new(vec![2.0, 4.0, 8.0]).unwrap();
        let options = RobinOptions {
            degree: 8,
            trend: false,
            ..RobinOptions::default()
        };
        let s = capacity_slope(&RegionSpec::positive_axis(), &schedule, 2.0, &options).unwrap();
        assert!((s.slope - 1.0).abs() < 0.05, "{}", s.slope);
        assert_eq!(s.threshold, 0.5);
        assert!(s.criterion);
        assert!(capacity_slope(&RegionSpec::positive_axis(), &schedule, 0.0, &options).is_err());
    }
}
