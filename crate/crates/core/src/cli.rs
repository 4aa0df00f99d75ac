//! Batch front end: JSON run configurations in, CSV/JSON/SVG artifacts out.
//!
//! [`execute`] builds every artifact in memory; the binary writes them only
//! after the whole run succeeded, so invalid input never leaves partial
//! files behind.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::acceptance;
use crate::asymptotics::{
    capacity_slope, robin_constant, thinness_profile, ProfileOptions, RobinOptions,
};
use crate::extremal::{extremal_value, green_trend, DEFAULT_PHASES};
use crate::genus0::{
    condition_checks, growth_verify, theorem5_check, DirectionGrid, Envelope, GenusZeroFamily,
    IndexRange, RadiusRule, Theorem5Parameters,
};
use crate::point::Point;
use crate::regions::{sample, Density, RegionSpec, TruncationSchedule};

/// Version of the CSV column layouts and the meta document.
pub const FORMAT_VERSION: u32 = 1;

pub const MAX_DEGREE: usize = 64;
pub const MAX_PHASES: usize = 4096;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything caused by the input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Compute(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn compute_err(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn default_degree() -> usize {
    8
}

fn default_phases() -> usize {
    DEFAULT_PHASES
}

fn default_density() -> usize {
    400
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Green(GreenConfig),
    Profile(ProfileConfig),
    Robin(RobinConfig),
    Slope(SlopeConfig),
    Genus0(Genus0Config),
    Verify(VerifyConfig),
    Plot(PlotConfig),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenConfig {
    pub region: RegionSpec,
    pub points: Vec<Point>,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_phases")]
    pub phases: usize,
    /// Total sample count.
    #[serde(default = "default_density")]
    pub density: usize,
    /// Truncation radius; defaults to the circumradius of a bounded region.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Report the degree trend over `n/4, n/2, n` instead of the raw value.
    #[serde(default)]
    pub trend: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub region: RegionSpec,
    pub point: Point,
    pub schedule: TruncationSchedule,
    #[serde(default)]
    pub options: Option<ProfileOptions>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobinConfig {
    pub region: RegionSpec,
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    #[serde(default)]
    pub options: Option<RobinOptions>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeConfig {
    pub region: RegionSpec,
    pub schedule: TruncationSchedule,
    /// Required: there is no default for `C_m`.
    pub c_m: f64,
    #[serde(default)]
    pub options: Option<RobinOptions>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Genus0Config {
    pub family: GenusZeroFamily,
    pub analysis: Genus0Analysis,
}

/// Explicit directions, or a grid of the given size (ignored for `m = 1`).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Directions {
    #[serde(default)]
    pub lambdas: Option<Vec<Point>>,
    #[serde(default)]
    pub grid: Option<usize>,
}

impl Directions {
    fn resolve(&self, dim: usize, default_size: usize) -> Result<DirectionGrid, CliError> {
        if let Some(ls) = &self.lambdas {
            if ls.is_empty() {
                return Err(config_err("direction list is empty"));
            }
            for l in ls {
                if l.dim() != dim || !((l.norm() - 1.0).abs() < 1e-9) {
                    return Err(config_err(format!("direction {:?} must be a unit vector in C^{dim}", l.coords())));
                }
            }
            let w = 1.0 / ls.len() as f64;
            return Ok(DirectionGrid {
                directions: ls.clone(),
                weights: vec![w; ls.len()],
            });
        }
        DirectionGrid::for_dimension(dim, self.grid.unwrap_or(default_size)).map_err(|e| config_err(e.to_string()))
    }
}

fn default_tolerance() -> f64 {
    0.05
}

fn default_quadrature() -> usize {
    4096
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Genus0Analysis {
    /// Integrated counting function `η(t)` at index `n`.
    Counting {
        n: usize,
        radii: Vec<f64>,
        #[serde(default)]
        directions: Directions,
    },
    Conditions {
        range: IndexRange,
        #[serde(default)]
        directions: Directions,
        #[serde(default)]
        radius_rule: RadiusRule,
        #[serde(default)]
        tail_radii: Vec<f64>,
        #[serde(default)]
        compact: Vec<Point>,
    },
    Growth {
        range: IndexRange,
        hypothesis_region: RegionSpec,
        hypothesis_radius: f64,
        #[serde(default = "default_density")]
        hypothesis_density: usize,
        grid: Vec<Point>,
        #[serde(default = "default_tolerance")]
        tolerance: f64,
    },
    Theorem5 {
        range: IndexRange,
        #[serde(default)]
        directions: Directions,
        w: Vec<Complex64>,
        #[serde(default)]
        hypothesis_points: Vec<Point>,
        beta: f64,
        c_m: f64,
        envelope: Envelope,
        #[serde(default = "default_quadrature")]
        quadrature_points: usize,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Subset of criterion ids; all when absent.
    #[serde(default)]
    pub criteria: Option<Vec<u32>>,
}

fn default_x() -> String {
    "R".into()
}

fn default_y() -> String {
    "v_ln".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotConfig {
    /// A CSV written by an earlier run; relative paths resolve against the
    /// configuration file's directory.
    pub input: PathBuf,
    #[serde(default = "default_x")]
    pub x: String,
    #[serde(default = "default_y")]
    pub y: String,
    #[serde(default)]
    pub title: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Green(_) => "green",
            RunConfig::Profile(_) => "profile",
            RunConfig::Robin(_) => "robin",
            RunConfig::Slope(_) => "slope",
            RunConfig::Genus0(_) => "genus0",
            RunConfig::Verify(_) => "verify",
            RunConfig::Plot(_) => "plot",
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let region = |r: &RegionSpec| r.validate().map_err(|e| config_err(e.to_string()));
        let point = |p: &Point, dim: usize| {
            if p.dim() != dim || !p.is_finite() {
                Err(config_err(format!("point {:?} must be finite in C^{dim}", p.coords())))
            } else {
                Ok(())
            }
        };
        match self {
            RunConfig::Green(g) => {
                region(&g.region)?;
                check_degree(g.degree, g.trend)?;
                check_phases(g.phases)?;
                check_density(g.density)?;
                if g.points.is_empty() {
                    return Err(config_err("green needs at least one point"));
                }
                for p in &g.points {
                    point(p, g.region.dimension())?;
                }
                match g.radius {
                    Some(r) if !(r.is_finite() && r > 0.0) => return Err(config_err("radius must be positive")),
                    None if !g.region.is_bounded() => {
                        return Err(config_err("unbounded region needs a truncation radius"))
                    }
                    _ => {}
                }
            }
            RunConfig::Profile(p) => {
                region(&p.region)?;
                point(&p.point, p.region.dimension())?;
                check_schedule(&p.schedule)?;
                if let Some(o) = &p.options {
                    check_degree(o.degree, true)?;
                    check_phases(o.phases)?;
                    check_density(o.density.base_total)?;
                }
            }
            RunConfig::Robin(r) => {
                region(&r.region)?;
                if !r.region.is_bounded() {
                    return Err(config_err("robin needs a bounded region"));
                }
                if let Some(radii) = &r.radii {
                    if radii.len() < 2 || radii.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                        return Err(config_err("robin radii: at least two positive values"));
                    }
                }
                check_robin(&r.options)?;
            }
            RunConfig::Slope(s) => {
                region(&s.region)?;
                check_schedule(&s.schedule)?;
                if !(s.c_m.is_finite() && s.c_m > 0.0) {
                    return Err(config_err("c_m must be positive"));
                }
                check_robin(&s.options)?;
            }
            RunConfig::Genus0(g) => {
                g.family.validate().map_err(|e| config_err(e.to_string()))?;
                let m = g.family.dimension();
                match &g.analysis {
                    Genus0Analysis::Counting { n, radii, .. } => {
                        if *n == 0 || radii.is_empty() || radii.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                            return Err(config_err("counting needs n >= 1 and positive radii"));
                        }
                    }
                    Genus0Analysis::Conditions {
                        range,
                        tail_radii,
                        compact,
                        ..
                    } => {
                        check_range(range)?;
                        if tail_radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                            return Err(config_err("tail radii must be positive"));
                        }
                        for p in compact {
                            point(p, m)?;
                        }
                    }
                    Genus0Analysis::Growth {
                        range,
                        hypothesis_region,
                        hypothesis_radius,
                        hypothesis_density,
                        grid,
                        tolerance,
                    } => {
                        check_range(range)?;
                        region(hypothesis_region)?;
                        if hypothesis_region.dimension() != m {
                            return Err(config_err("hypothesis region dimension differs from the family"));
                        }
                        if !(hypothesis_radius.is_finite() && *hypothesis_radius > 0.0) {
                            return Err(config_err("hypothesis radius must be positive"));
                        }
                        check_density(*hypothesis_density)?;
                        if grid.is_empty() {
                            return Err(config_err("conclusion grid is empty"));
                        }
                        for p in grid {
                            point(p, m)?;
                        }
                        if !(tolerance.is_finite() && *tolerance >= 0.0) {
                            return Err(config_err("tolerance must be nonnegative"));
                        }
                    }
                    Genus0Analysis::Theorem5 {
                        range,
                        w,
                        hypothesis_points,
                        beta,
                        c_m,
                        quadrature_points,
                        ..
                    } => {
                        check_range(range)?;
                        if w.is_empty() {
                            return Err(config_err("theorem5 needs w values"));
                        }
                        for p in hypothesis_points {
                            point(p, m)?;
                        }
                        if !(c_m.is_finite() && *c_m > 0.0 && beta.is_finite()) {
                            return Err(config_err("c_m must be positive and beta finite"));
                        }
                        if 1.0 - c_m * (1.0 - beta) <= 0.0 {
                            return Err(config_err("1 − c_m(1 − beta) must be positive"));
                        }
                        if !(16..=1 << 20).contains(quadrature_points) {
                            return Err(config_err("quadrature points must be in 16..=2^20"));
                        }
                    }
                }
            }
            RunConfig::Verify(v) => {
                if let Some(ids) = &v.criteria {
                    for id in ids {
                        if !acceptance::CRITERIA.iter().any(|(i, _)| i == id) {
                            return Err(config_err(format!("unknown criterion {id}")));
                        }
                    }
                }
            }
            RunConfig::Plot(p) => {
                if p.x.is_empty() || p.y.is_empty() {
                    return Err(config_err("plot columns must be named"));
                }
            }
        }
        Ok(())
    }
}

fn check_degree(degree: usize, trend: bool) -> Result<(), CliError> {
    if !(1..=MAX_DEGREE).contains(&degree) {
        return Err(config_err(format!("degree must be in 1..={MAX_DEGREE}, got {degree}")));
    }
    if trend && !degree.is_multiple_of(4) {
        return Err(config_err(format!("trend degree must be a multiple of 4, got {degree}")));
    }
    Ok(())
}

fn check_phases(phases: usize) -> Result<(), CliError> {
    if phases == 0 || !phases.is_multiple_of(4) || phases > MAX_PHASES {
        return Err(config_err(format!(
            "phases must be a positive multiple of 4 up to {MAX_PHASES}, got {phases}"
        )));
    }
    Ok(())
}

fn check_density(total: usize) -> Result<(), CliError> {
    if !(8..=crate::regions::Density::MAX_TOTAL).contains(&total) {
        return Err(config_err(format!(
            "density must be in 8..={}, got {total}",
            crate::regions::Density::MAX_TOTAL
        )));
    }
    Ok(())
}

fn check_schedule(s: &TruncationSchedule) -> Result<(), CliError> {
    if s.len() < 3 {
        return Err(config_err("schedule needs at least three radii"));
    }
    Ok(())
}

fn check_range(r: &IndexRange) -> Result<(), CliError> {
    r.validate().map_err(|e| config_err(e.to_string()))?;
    if r.indices().len() < 10 {
        return Err(config_err("index range needs at least 10 entries"));
    }
    Ok(())
}

fn check_robin(o: &Option<RobinOptions>) -> Result<(), CliError> {
    if let Some(o) = o {
        check_degree(o.degree, o.trend)?;
        check_phases(o.phases)?;
        check_density(o.density.total())?;
        if o.directions < crate::asymptotics::MIN_DIRECTIONS {
            return Err(config_err("robin needs at least 8 directions"));
        }
    }
    Ok(())
}

/// Files produced by a run, written by the caller.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
    /// False when `verify` found a failing criterion.
    pub passed: bool,
    /// Lines for the terminal.
    pub summary: Vec<String>,
}

pub struct RunContext {
    /// Directory of the configuration file, for relative input paths.
    pub base_dir: PathBuf,
    pub seedless: bool,
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(compute_err)?;
    for r in rows {
        w.write_record(r).map_err(compute_err)?;
    }
    w.into_inner().map_err(|e| compute_err(e.to_string()))
}

fn f(x: f64) -> String {
    format!("{x}")
}

fn point_cells(p: &Point) -> Vec<String> {
    let mut v = Vec::new();
    for k in 0..2 {
        match p.coords().get(k) {
            Some(z) => {
                v.push(f(z.re));
                v.push(f(z.im));
            }
            None => {
                v.push(String::new());
                v.push(String::new());
            }
        }
    }
    v
}

fn fmt_point(p: &Point) -> String {
    let parts: Vec<String> = p.coords().iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
    parts.join(", ")
}

fn meta(command: &str, config: &RunConfig, ctx: &RunContext, results: serde_json::Value) -> Vec<u8> {
    let doc = json!({
        "format_version": FORMAT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "units": "natural logarithms throughout",
        "seedless": ctx.seedless,
        "config": config,
        "results": results,
    });
    let mut out = serde_json::to_vec_pretty(&doc).expect("meta serializes");
    out.push(b'\n');
    out
}

/// Runs a validated configuration.
pub fn execute(config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    config.validate()?;
    let out = match config {
        RunConfig::Green(g) => green(g, config, ctx),
        RunConfig::Profile(p) => profile(p, config, ctx),
        RunConfig::Robin(r) => robin(r, config, ctx),
        RunConfig::Slope(s) => slope(s, config, ctx),
        RunConfig::Genus0(g) => genus0(g, config, ctx),
        RunConfig::Verify(v) => verify(v, config, ctx),
        RunConfig::Plot(p) => plot(p, ctx),
    }?;
    if ctx.seedless && !matches!(config, RunConfig::Verify(_)) {
        let again = execute(
            config,
            &RunContext {
                base_dir: ctx.base_dir.clone(),
                seedless: false,
            },
        )?;
        let strip = |a: &Artifacts| -> Vec<(String, Vec<u8>)> {
            a.files.iter().filter(|(n, _)| n.ends_with(".csv") || n.ends_with(".svg")).cloned().collect()
        };
        if strip(&again) != strip(&out) {
            return Err(CliError::Compute("--seedless: two runs produced different outputs".into()));
        }
    }
    Ok(out)
}

fn green(g: &GreenConfig, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let radius = g
        .radius
        .or_else(|| g.region.circumradius())
        .ok_or_else(|| config_err("missing radius"))?;
    let region = sample(&g.region, radius, Density::from_total(g.density)).map_err(compute_err)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for z in &g.points {
        let (value, est) = if g.trend {
            let t = green_trend(&region, z, g.degree, g.phases).map_err(compute_err)?;
            (t.value, t.finest().clone())
        } else {
            let e = extremal_value(&region, z, g.degree, g.phases).map_err(compute_err)?;
            (e.value, e)
        };
        let mut row = point_cells(z);
        row.extend([
            g.degree.to_string(),
            f(value),
            f(est.value),
            f(est.slack),
            est.iterations.to_string(),
            est.converged.to_string(),
        ]);
        rows.push(row);
        summary.push(format!("V({}) ≈ {value:.6}", fmt_point(z)));
    }
    let header = [
        "z1_re", "z1_im", "z2_re", "z2_im", "degree", "v_ln", "raw_ln", "slack_ln", "iterations", "converged",
    ];
    Ok(Artifacts {
        files: vec![
            ("green.csv".into(), csv_bytes(&header, &rows)?),
            (
                "green.meta.json".into(),
                meta("green", config, ctx, json!({ "samples": region.len(), "radius": radius })),
            ),
        ],
        passed: true,
        summary,
    })
}

fn profile(p: &ProfileConfig, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let options = p.options.unwrap_or_default();
    let prof = thinness_profile(&p.region, &p.point, &p.schedule, &options).map_err(compute_err)?;
    let rows: Vec<Vec<String>> = prof
        .points
        .iter()
        .map(|q| {
            vec![
                f(q.radius),
                f(q.value),
                f(q.finest),
                f(q.slack),
                f(q.spread),
                q.degree.to_string(),
                q.samples.to_string(),
                q.converged.to_string(),
            ]
        })
        .collect();
    let header = ["R", "v_ln", "finest_ln", "slack_ln", "spread_ln", "degree", "samples", "converged"];
    Ok(Artifacts {
        files: vec![
            ("profile.csv".into(), csv_bytes(&header, &rows)?),
            (
                "profile.meta.json".into(),
                meta(
                    "profile",
                    config,
                    ctx,
                    json!({
                        "verdict": prof.verdict,
                        "extrapolated_ln": prof.extrapolated,
                        "rate": prof.rate,
                        "degrees": prof.degrees,
                    }),
                ),
            ),
        ],
        passed: true,
        summary: vec![format!(
            "verdict {} (values {:?}, extrapolated {:.4})",
            prof.verdict,
            prof.values(),
            prof.extrapolated
        )],
    })
}

fn robin(r: &RobinConfig, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let options = r.options.unwrap_or_default();
    let est = robin_constant(&r.region, r.radii.as_deref(), &options).map_err(compute_err)?;
    let rows: Vec<Vec<String>> = est
        .samples
        .iter()
        .map(|s| {
            vec![
                f(s.radius),
                s.direction.to_string(),
                f(s.value),
                f(s.excess),
                s.converged.to_string(),
            ]
        })
        .collect();
    let header = ["R", "direction", "v_ln", "excess_ln", "converged"];
    Ok(Artifacts {
        files: vec![
            ("robin.csv".into(), csv_bytes(&header, &rows)?),
            (
                "robin.meta.json".into(),
                meta(
                    "robin",
                    config,
                    ctx,
                    json!({
                        "gamma_ln": est.gamma,
                        "capacity": est.capacity,
                        "per_radius_ln": est.per_radius,
                        "converged": est.converged,
                    }),
                ),
            ),
        ],
        passed: true,
        summary: vec![format!("gamma ≈ {:.6}, capacity ≈ {:.6}", est.gamma, est.capacity)],
    })
}

fn slope(s: &SlopeConfig, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let options = s.options.unwrap_or(RobinOptions {
        trend: false,
        degree: 8,
        ..RobinOptions::default()
    });
    let res = capacity_slope(&s.region, &s.schedule, s.c_m, &options).map_err(compute_err)?;
    let rows: Vec<Vec<String>> = res
        .points
        .iter()
        .map(|p| vec![f(p.radius), f(p.radius.ln()), f(p.gamma), f(p.capacity.ln())])
        .collect();
    let header = ["R", "log_R", "gamma_ln", "log_capacity"];
    Ok(Artifacts {
        files: vec![
            ("slope.csv".into(), csv_bytes(&header, &rows)?),
            (
                "slope.meta.json".into(),
                meta(
                    "slope",
                    config,
                    ctx,
                    json!({
                        "slope": res.slope,
                        "c_m": res.c_m,
                        "threshold": res.threshold,
                        "criterion": res.criterion,
                        "converged": res.converged,
                    }),
                ),
            ),
        ],
        passed: true,
        summary: vec![format!(
            "slope ≈ {:.4}, threshold (C_m − 1)/C_m = {:.4}, criterion {}",
            res.slope, res.threshold, res.criterion
        )],
    })
}

fn genus0(g: &Genus0Config, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let fam = &g.family;
    let m = fam.dimension();
    let (csv, results, summary) = match &g.analysis {
        Genus0Analysis::Counting { n, radii, directions } => {
            let grid = directions.resolve(m, DirectionGrid::DEFAULT_SIZE)?;
            let mut rows = Vec::new();
            for &t in radii {
                let eta = fam.counting_integrated(*n, t, &grid).map_err(compute_err)?;
                rows.push(vec![n.to_string(), f(t), f(eta)]);
            }
            (
                csv_bytes(&["n", "t", "eta"], &rows)?,
                json!({ "directions": grid.len() }),
                format!("{} counting values over {} directions", rows.len(), grid.len()),
            )
        }
        Genus0Analysis::Conditions {
            range,
            directions,
            radius_rule,
            tail_radii,
            compact,
        } => {
            let grid = directions.resolve(m, 64)?;
            let report = condition_checks(fam, &grid.directions, range, *radius_rule, tail_radii, compact)
                .map_err(compute_err)?;
            let rows: Vec<Vec<String>> = report
                .rows()
                .into_iter()
                .map(|r| {
                    vec![
                        r.condition,
                        r.n.to_string(),
                        r.lambda.map(|l| l.to_string()).unwrap_or_default(),
                        r.radius.map(f).unwrap_or_default(),
                        r.value.map(f).unwrap_or_default(),
                    ]
                })
                .collect();
            let proxies = |v: &[crate::genus0::SequenceProxy]| v.iter().map(|s| s.proxy).collect::<Vec<_>>();
            (
                csv_bytes(&["condition", "n", "lambda", "R", "value"], &rows)?,
                json!({
                    "range": report.range,
                    "tail_start": report.tail_start,
                    "kappa": report.kappa,
                    "theo4_0_proxy": report.compact_bound.as_ref().map(|s| s.proxy),
                    "theo4_1_proxies": proxies(&report.theo41),
                    "theo4_2": report.theo42.iter().map(|s| json!({"lambda": s.lambda_index, "R": s.radius, "proxy": s.proxy})).collect::<Vec<_>>(),
                    "theo4_3_proxies": proxies(&report.theo43),
                    "radius_rule": report.radius_rule,
                    "warnings": report.warnings,
                }),
                format!("kappa ≈ {}, {} warnings", report.kappa, report.warnings.len()),
            )
        }
        Genus0Analysis::Growth {
            range,
            hypothesis_region,
            hypothesis_radius,
            hypothesis_density,
            grid,
            tolerance,
        } => {
            let e = sample(hypothesis_region, *hypothesis_radius, Density::from_total(*hypothesis_density))
                .map_err(compute_err)?;
            let r = growth_verify(fam, e.points(), grid, range, *tolerance).map_err(compute_err)?;
            let rows = vec![
                vec!["hypothesis_margin".into(), f(r.hypothesis_margin)],
                vec!["conclusion_margin".into(), f(r.conclusion_margin)],
            ];
            (
                csv_bytes(&["quantity", "value"], &rows)?,
                serde_json::to_value(&r).map_err(compute_err)?,
                format!(
                    "hypothesis margin {:.4}, conclusion margin {:.4}, verified {}",
                    r.hypothesis_margin, r.conclusion_margin, r.verified
                ),
            )
        }
        Genus0Analysis::Theorem5 {
            range,
            directions,
            w,
            hypothesis_points,
            beta,
            c_m,
            envelope,
            quadrature_points,
        } => {
            let grid = directions.resolve(m, 16)?;
            let params = Theorem5Parameters {
                beta: *beta,
                c_m: *c_m,
                envelope: envelope.clone(),
                quadrature_points: *quadrature_points,
            };
            let r = theorem5_check(fam, &grid.directions, w, hypothesis_points, range, &params)
                .map_err(compute_err)?;
            let rows: Vec<Vec<String>> =
                r.c_lambda.iter().enumerate().map(|(i, c)| vec![i.to_string(), f(*c)]).collect();
            (
                csv_bytes(&["lambda", "c_lambda"], &rows)?,
                serde_json::to_value(&r).map_err(compute_err)?,
                format!("exponent {:.4}, conclusion ratio {:.4}", r.exponent, r.conclusion_ratio),
            )
        }
    };
    Ok(Artifacts {
        files: vec![
            ("genus0.csv".into(), csv),
            ("genus0.meta.json".into(), meta("genus0", config, ctx, results)),
        ],
        passed: true,
        summary: vec![summary],
    })
}

fn verify(v: &VerifyConfig, config: &RunConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let ids: Vec<u32> = v
        .criteria
        .clone()
        .unwrap_or_else(|| acceptance::CRITERIA.iter().map(|(i, _)| *i).collect());
    let results: Vec<_> = ids.iter().filter_map(|id| acceptance::run(*id)).collect();
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                r.passed.to_string(),
                format!("{:.3}", r.seconds),
                r.detail.clone(),
            ]
        })
        .collect();
    let passed = results.iter().all(|r| r.passed);
    Ok(Artifacts {
        files: vec![
            (
                "verify.csv".into(),
                csv_bytes(&["criterion", "name", "passed", "seconds", "detail"], &rows)?,
            ),
            (
                "verify.meta.json".into(),
                meta(
                    "verify",
                    config,
                    ctx,
                    json!({
                        "passed": passed,
                        "failed": results.iter().filter(|r| !r.passed).map(|r| r.id).collect::<Vec<_>>(),
                    }),
                ),
            ),
        ],
        passed,
        summary: results.iter().map(|r| r.to_string()).collect(),
    })
}

fn plot(p: &PlotConfig, ctx: &RunContext) -> Result<Artifacts, CliError> {
    let path = if p.input.is_absolute() {
        p.input.clone()
    } else {
        ctx.base_dir.join(&p.input)
    };
    let mut reader = csv::Reader::from_path(&path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| config_err(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| config_err(format!("{} has no column {name}", path.display())))
    };
    let (xi, yi) = (col(&p.x)?, col(&p.y)?);
    let mut pts = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| config_err(e.to_string()))?;
        let parse = |i: usize| {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| config_err(format!("non-numeric cell in column {i}")))
        };
        pts.push((parse(xi)?, parse(yi)?));
    }
    if pts.is_empty() {
        return Err(config_err(format!("{} has no rows", path.display())));
    }
    let title = p.title.clone().unwrap_or_else(|| format!("{} vs {}", p.y, p.x));
    let svg = line_chart(&pts, &p.x, &p.y, &title);
    let stem = Path::new(&p.input)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("plot")
        .to_string();
    Ok(Artifacts {
        files: vec![(format!("{stem}.svg"), svg.into_bytes())],
        passed: true,
        summary: vec![format!("plotted {} points", pts.len())],
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A minimal SVG line chart with axis extents labelled.
pub fn line_chart(pts: &[(f64, f64)], x_label: &str, y_label: &str, title: &str) -> String {
    let (w, h, m) = (480.0, 320.0, 50.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{} H{}" fill="none" stroke="black"/>"#,
        h - m,
        w - m
    );
    let path: Vec<String> = pts
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| format!("{}{:.2} {:.2}", if i == 0 { "M" } else { "L" }, sx(x), sy(y)))
        .collect();
    let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
    for &(x, y) in pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(x), sy(y));
    }
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            escape(&text)
        );
    };
    label(&mut s, m, h - m + 16.0, "middle", format!("{x0:.4}"));
    label(&mut s, w - m, h - m + 16.0, "middle", format!("{x1:.4}"));
    label(&mut s, m - 4.0, h - m, "end", format!("{y0:.4}"));
    label(&mut s, m - 4.0, m + 4.0, "end", format!("{y1:.4}"));
    label(&mut s, w / 2.0, h - 12.0, "middle", x_label.to_string());
    label(&mut s, 14.0, h / 2.0, "middle", y_label.to_string());
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RunContext {
        RunContext {
            base_dir: PathBuf::from("."),
            seedless: false,
        }
    }

    #[test]
    fn green_disk_row() {
        let cfg = RunConfig::from_json(
            r#"{"command":"green","region":{"type":"disk","center":[0,0],"radius":1},"points":[[[2,0]]],"degree":8}"#,
        )
        .unwrap();
        let a = execute(&cfg, &ctx()).unwrap();
        let text = String::from_utf8(a.files[0].1.clone()).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().contains("v_ln"));
        let v: f64 = lines.next().unwrap().split(',').nth(5).unwrap().parse().unwrap();
        assert!((v - 2f64.ln()).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "{",
            r#"{"command":"nope"}"#,
            r#"{"command":"green","region":{"type":"disk","center":[0,0],"radius":-1},"points":[[[2,0]]]}"#,
            r#"{"command":"green","region":{"type":"segment","a":0,"b":1},"points":[[[2,0]]],"phases":6}"#,
            r#"{"command":"slope","region":{"type":"disk","center":[0,0],"radius":1},"schedule":[2,4,8]}"#,
            r#"{"command":"green","region":{"type":"disk","center":[0,0],"radius":1},"points":[[[2,0]]],"typo":1}"#,
        ] {
            let e = RunConfig::from_json(bad).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn svg_is_well_formed() {
        let s = line_chart(&[(4.0, 1.0), (8.0, 0.8), (16.0, 0.6)], "R", "v_ln", "a < b");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
    }
}
