//! The invisible Eaton lens.
//!
//! The index is the root of `√n = 1/(nr) + √(1/(n²r²) − 1)` with `n·r ≤ 1`.
//! Writing `u = n·r` the equation inverts to `r = u³ / (1 + √(1 − u²))²`,
//! which gives the slope in closed form. Every ray entering the lens leaves
//! along its own line after one full turn around the centre.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::spline::MonotoneCubic;
use crate::geometry::{
    integrate_geodesic, ConformalMetric, GeodesicPath, GeometryError, IntegrateOptions, MetricKind, RadialIndex,
    DEFAULT_EXCLUSION_RADIUS,
};
use crate::scattering::{arc_difference, BoundaryVector};
use crate::vec2::wrap_pi;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EatonError {
    #[error("radius {0} outside (0, 1]")]
    Domain(f64),
    #[error("winding {turns} turns is not within 0.1 of an integer")]
    NonIntegralWinding { turns: f64 },
    #[error("geodesic is trapped")]
    Trapped,
    #[error("path passes through the origin")]
    ThroughOrigin,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `√n − 1/(nr) − √(1/(n²r²) − 1)`; increasing in `n` on `[1, 1/r]`.
pub fn eaton_residual(r: f64, n: f64) -> f64 {
    let u = n * r;
    let one_minus = (-n).mul_add(r, 1.0).max(0.0);
    n.sqrt() - (1.0 + (one_minus * (1.0 + u)).sqrt()) / u
}

/// The Eaton index at normalized radius `r ∈ (0, 1]`, by bisection on
/// `[1, 1/r]` down to adjacent floating-point numbers.
pub fn eaton_index(r: f64) -> Result<f64, EatonError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(EatonError::Domain(r));
    }
    if r == 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 1.0 / r);
    if eaton_residual(r, hi) < 0.0 {
        // 1/r rounded below the true bound
        hi = f64::from_bits(hi.to_bits() + 1);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eaton_residual(r, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if eaton_residual(r, lo).abs() <= eaton_residual(r, hi).abs() {
        lo
    } else {
        hi
    })
}

/// `dn/dr` at a point on the profile, from the closed-form `du/dr`.
pub fn eaton_slope(r: f64, n: f64) -> f64 {
    let u = (n * r).min(1.0);
    let s = ((-n).mul_add(r, 1.0).max(0.0) * (1.0 + u)).sqrt();
    let du = s * (1.0 + s).powi(3) / (u * u * (3.0 * s * (1.0 + s) + 2.0 * u * u));
    (du * r - u) / (r * r)
}

const TABLE_SIZE: usize = 4096;

/// Tabulated Eaton index on a lens of radius `radius`.
///
/// Between `r_min` and the rim the profile is a Hermite interpolant of
/// `ln n` against `ln r` with exact slopes; inside `r_min` the root is
/// solved directly, and outside the rim it continues as `n = R/r`, which
/// matches value and slope at the boundary.
#[derive(Clone, Debug)]
pub struct EatonProfile {
    radius: f64,
    r_min: f64,
    table: Option<MonotoneCubic>,
}

impl EatonProfile {
    pub fn new(radius: f64) -> Self {
        Self::with_r_min(radius, DEFAULT_EXCLUSION_RADIUS)
    }

    pub fn with_r_min(radius: f64, r_min: f64) -> Self {
        let (lo, hi) = (r_min.ln(), 0.0f64);
        let mut xs = Vec::with_capacity(TABLE_SIZE);
        let mut ys = Vec::with_capacity(TABLE_SIZE);
        let mut slopes = Vec::with_capacity(TABLE_SIZE);
        for i in 0..TABLE_SIZE {
            let x = if i + 1 == TABLE_SIZE {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (TABLE_SIZE - 1) as f64
            };
            let r = x.exp().min(1.0);
            let n = eaton_index(r).expect("table radii lie in (0, 1]");
            xs.push(x);
            ys.push(n.ln());
            slopes.push(r * eaton_slope(r, n) / n);
        }
        let table = MonotoneCubic::with_slopes(xs, ys, slopes).expect("table knots are increasing");
        Self {
            radius,
            r_min,
            table: Some(table),
        }
    }

    /// Root solve at every evaluation; slow, for validation.
    pub fn direct(radius: f64) -> Self {
        Self {
            radius,
            r_min: 0.0,
            table: None,
        }
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }

    /// Table knots as `(r, n)` pairs; empty for the direct profile.
    pub fn table(&self) -> Vec<(f64, f64)> {
        self.table
            .iter()
            .flat_map(|t| t.knots().map(|(x, y)| (x.exp(), y.exp())))
            .collect()
    }

    fn normalized(&self, rho: f64) -> Result<(f64, f64), GeometryError> {
        if rho >= 1.0 {
            return Ok((1.0 / rho, -1.0 / (rho * rho)));
        }
        match &self.table {
            Some(table) if rho >= self.r_min => {
                let (y, dy) = table.eval(rho.ln());
                let n = y.exp();
                Ok((n, n * dy / rho))
            }
            _ => {
                let n = eaton_index(rho).map_err(|_| GeometryError::Singular { x: rho, y: 0.0 })?;
                Ok((n, eaton_slope(rho, n)))
            }
        }
    }
}

impl RadialIndex for EatonProfile {
    fn eval(&self, r: f64) -> Result<(f64, f64), GeometryError> {
        let (n, dn) = self.normalized(r / self.radius)?;
        Ok((n, dn / self.radius))
    }
}

pub fn eaton_metric() -> ConformalMetric {
    eaton_metric_with_radius(1.0)
}

pub fn eaton_metric_with_radius(radius: f64) -> ConformalMetric {
    ConformalMetric::radial(MetricKind::Eaton, "eaton", Arc::new(EatonProfile::new(radius)), radius, true)
}

/// Eaton metric evaluated by direct root solves instead of the table.
pub fn eaton_metric_direct(radius: f64) -> ConformalMetric {
    ConformalMetric::radial(MetricKind::Eaton, "eaton-direct", Arc::new(EatonProfile::direct(radius)), radius, true)
}

/// Winding of an exited path about the origin, relative to the straight
/// chord from the same entry: the continuous polar-angle sweep of the path
/// minus that of the chord, in turns, rounded.
pub fn loop_winding(path: &GeodesicPath) -> Result<i64, EatonError> {
    if path.exit.vector().is_none() {
        return Err(EatonError::Trapped);
    }
    let mut sweep = 0.0;
    let mut prev: Option<f64> = None;
    for p in path.positions() {
        if p.norm() == 0.0 {
            return Err(EatonError::ThroughOrigin);
        }
        let a = p.angle();
        if let Some(b) = prev {
            sweep += wrap_pi(a - b);
        }
        prev = Some(a);
    }
    let chord = wrap_pi(2.0 * path.entry.angle);
    let turns = (sweep - chord) / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.1 {
        return Err(EatonError::NonIntegralWinding { turns });
    }
    Ok(rounded as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvisibilitySample {
    pub entry: BoundaryVector,
    pub exit: BoundaryVector,
    /// Angle between entry and exit directions.
    pub direction_dev: f64,
    /// Distance from the straight-line exit point.
    pub point_dev: f64,
    pub tau: f64,
    pub winding: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvisibilityReport {
    pub tol: f64,
    pub passed: bool,
    pub max_direction_dev: f64,
    pub max_point_dev: f64,
    pub samples: Vec<InvisibilitySample>,
}

fn trace_sample(
    metric: &ConformalMetric,
    entry: BoundaryVector,
    opts: &IntegrateOptions,
) -> Result<(InvisibilitySample, GeodesicPath), EatonError> {
    let path = integrate_geodesic(metric, entry, opts)?;
    let exit = path.exit.vector().ok_or(EatonError::Trapped)?;
    let radius = metric.radius();
    let (d_in, d_out) = (entry.direction(), exit.direction());
    let direction_dev = d_in.cross(d_out).atan2(d_in.dot(d_out)).abs();
    let point_dev = exit.base_point(radius).distance(entry.vacuum_exit().base_point(radius));
    let winding = loop_winding(&path)?;
    let sample = InvisibilitySample {
        entry,
        exit,
        direction_dev,
        point_dev,
        tau: path.length,
        winding,
    };
    Ok((sample, path))
}

/// Traces every entry and measures how far each exit is from the
/// straight-line continuation of the entry ray.
pub fn invisibility_check(
    metric: &ConformalMetric,
    entries: &[BoundaryVector],
    tol: f64,
    opts: &IntegrateOptions,
) -> Result<InvisibilityReport, EatonError> {
    let samples = entries
        .par_iter()
        .map(|&e| trace_sample(metric, e, opts).map(|(s, _)| s))
        .collect::<Result<Vec<_>, _>>()?;
    let max_direction_dev = samples.iter().fold(0.0f64, |m, s| m.max(s.direction_dev));
    let max_point_dev = samples.iter().fold(0.0f64, |m, s| m.max(s.point_dev));
    Ok(InvisibilityReport {
        tol,
        passed: max_direction_dev < tol && max_point_dev < tol,
        max_direction_dev,
        max_point_dev,
        samples,
    })
}

/// Traces every entry and returns the paths, for rendering.
pub fn trace_all(
    metric: &ConformalMetric,
    entries: &[BoundaryVector],
    opts: &IntegrateOptions,
) -> Result<Vec<GeodesicPath>, GeometryError> {
    entries.par_iter().map(|&e| integrate_geodesic(metric, e, opts)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitReport {
    pub passed: bool,
    pub windings: Vec<i64>,
}

/// Checks that every entry's geodesic winds exactly once about the centre.
pub fn circuit_check(
    metric: &ConformalMetric,
    entries: &[BoundaryVector],
    opts: &IntegrateOptions,
) -> Result<CircuitReport, EatonError> {
    let windings = entries
        .par_iter()
        .map(|&e| trace_sample(metric, e, opts).map(|(s, _)| s.winding))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CircuitReport {
        passed: windings.iter().all(|w| w.abs() == 1),
        windings,
    })
}

/// Exit arc a straight ray from `entry` would reach, for comparisons that
/// need only the arc.
pub fn straight_exit_arc_error(entry: &BoundaryVector, exit: &BoundaryVector) -> f64 {
    arc_difference(entry.arc + entry.angle / PI, exit.arc).abs()
}
