//! Boundary unit vectors, the scattering relation and lens-data comparison.
//!
//! A [`BoundaryVector`] at arc `a ∈ [0, 1)` sits at the boundary point
//! `R(cos 2πa, sin 2πa)`. Its angle is measured from the counterclockwise
//! tangent `T` toward the inward normal `ν`, so the direction is
//! `cos α·T + sin α·ν`. Angles live in `(−π, π]`: positive angles point into
//! the disk, `0` and `π` are tangential, and negative angles point out.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{integrate_geodesic, ConformalMetric, Exit, GeometryError, IntegrateOptions};
use crate::vec2::{wrap_pi, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid sampling grid: {0}")]
    InvalidGrid(String),
    #[error("boundary perimeters differ: {0} vs {1}")]
    PerimeterMismatch(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    Inward,
    Tangential,
    Outward,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVector {
    /// Boundary parameter in `[0, 1)`.
    pub arc: f64,
    /// Signed angle from the oriented tangent toward the inward normal.
    pub angle: f64,
}

fn normalize_arc(arc: f64) -> f64 {
    let a = arc.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if a >= 1.0 {
        0.0
    } else {
        a
    }
}

impl BoundaryVector {
    pub fn new(arc: f64, angle: f64) -> Self {
        Self {
            arc: normalize_arc(arc),
            angle: wrap_pi(angle),
        }
    }

    /// Recovers boundary coordinates from a point on (or near) the circle and
    /// a direction; the point is used only through its polar angle.
    pub fn from_point_direction(point: Vec2, direction: Vec2) -> Self {
        let arc = point.angle() / TAU;
        let probe = Self::new(arc, 0.0);
        let angle = direction.dot(probe.inward_normal()).atan2(direction.dot(probe.tangent()));
        Self::new(arc, angle)
    }

    pub fn base_point(&self, radius: f64) -> Vec2 {
        Vec2::from_angle(TAU * self.arc) * radius
    }

    /// Counterclockwise unit tangent.
    pub fn tangent(&self) -> Vec2 {
        Vec2::from_angle(TAU * self.arc).perp()
    }

    pub fn inward_normal(&self) -> Vec2 {
        -Vec2::from_angle(TAU * self.arc)
    }

    pub fn direction(&self) -> Vec2 {
        let (s, c) = self.angle.sin_cos();
        self.tangent() * c + self.inward_normal() * s
    }

    /// Angle of an outgoing vector measured toward the outward normal, so
    /// the exit of a diameter reads `π/2`.
    pub fn outward_angle(&self) -> f64 {
        -self.angle
    }

    /// Same base point, opposite direction.
    pub fn reversed(&self) -> Self {
        Self::new(self.arc, self.angle + PI)
    }

    /// Exit of the straight chord from this inward vector.
    pub fn vacuum_exit(&self) -> Self {
        Self::new(self.arc + self.angle / PI, -self.angle)
    }
}

pub fn classify(v: &BoundaryVector) -> BoundaryClass {
    if v.angle > 0.0 && v.angle < PI {
        BoundaryClass::Inward
    } else if v.angle == 0.0 || v.angle == PI {
        BoundaryClass::Tangential
    } else {
        BoundaryClass::Outward
    }
}

/// Signed distance `b − a` between two arcs on the unit-perimeter circle, in
/// `[−½, ½)`.
pub fn arc_difference(a: f64, b: f64) -> f64 {
    (b - a + 0.5).rem_euclid(1.0) - 0.5
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringRecord {
    pub entry: BoundaryVector,
    /// `None` when the geodesic is trapped.
    pub exit: Option<BoundaryVector>,
    pub tau: f64,
}

impl ScatteringRecord {
    pub fn trapped(&self) -> bool {
        self.exit.is_none()
    }
}

pub fn scatter(
    metric: &ConformalMetric,
    entry: BoundaryVector,
    opts: &IntegrateOptions,
) -> Result<ScatteringRecord, ScatteringError> {
    let path = integrate_geodesic(metric, entry, opts)?;
    Ok(ScatteringRecord {
        entry,
        exit: match path.exit {
            Exit::Boundary { vector } => Some(vector),
            Exit::Trapped => None,
        },
        tau: path.length,
    })
}

/// An isometry of the boundary circle: `arc ↦ orientation·arc + shift`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIsometry {
    pub shift: f64,
    /// `+1` for rotations, `−1` for reflections.
    pub orientation: i8,
}

impl BoundaryIsometry {
    pub const IDENTITY: Self = Self {
        shift: 0.0,
        orientation: 1,
    };

    pub fn rotation(shift: f64) -> Self {
        Self { shift, orientation: 1 }
    }

    /// Reflection across the diameter through arc `shift / 2`.
    pub fn reflection(shift: f64) -> Self {
        Self { shift, orientation: -1 }
    }

    pub fn inverse(&self) -> Self {
        Self {
            shift: -f64::from(self.orientation) * self.shift,
            orientation: self.orientation,
        }
    }

    pub fn apply_arc(&self, arc: f64) -> f64 {
        normalize_arc(f64::from(self.orientation) * arc + self.shift)
    }
}

impl Default for BoundaryIsometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// The bundle map induced by `h`: the normal component of `v` is kept and the
/// tangential one is pushed forward by `h`.
pub fn phi_map(h: &BoundaryIsometry, v: &BoundaryVector) -> BoundaryVector {
    let angle = if h.orientation >= 0 { v.angle } else { PI - v.angle };
    BoundaryVector::new(h.apply_arc(v.arc), angle)
}

/// Entries `(i/arcs, margin + j(π − 2·margin)/(angles − 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub arcs: usize,
    pub angles: usize,
    /// Distance kept from the tangential angles `0` and `π`.
    pub margin: f64,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            arcs: 16,
            angles: 8,
            margin: 0.05,
        }
    }
}

impl SampleGrid {
    pub fn new(arcs: usize, angles: usize) -> Result<Self, ScatteringError> {
        let grid = Self {
            arcs,
            angles,
            ..Self::default()
        };
        grid.validate()?;
        Ok(grid)
    }

    /// A grid with `total` entries spread over 8 angles.
    pub fn with_total(total: usize) -> Result<Self, ScatteringError> {
        if total % 8 != 0 {
            return Err(ScatteringError::InvalidGrid(format!("{total} entries is not a multiple of 8 angles")));
        }
        Self::new(total / 8, 8)
    }

    pub fn validate(&self) -> Result<(), ScatteringError> {
        if self.arcs < 2 || self.angles < 2 {
            return Err(ScatteringError::InvalidGrid(format!(
                "grid {}x{} must be at least 2x2",
                self.arcs, self.angles
            )));
        }
        if !(self.margin > 0.0 && self.margin < PI / 2.0) {
            return Err(ScatteringError::InvalidGrid(format!("margin {} out of range", self.margin)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.arcs * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries sorted by `(arc, angle)`.
    pub fn entries(&self) -> Vec<BoundaryVector> {
        let span = PI - 2.0 * self.margin;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.arcs {
            let arc = i as f64 / self.arcs as f64;
            for j in 0..self.angles {
                let angle = self.margin + span * j as f64 / (self.angles - 1) as f64;
                out.push(BoundaryVector::new(arc, angle));
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        format!("{}x{} grid, margin {}", self.arcs, self.angles, self.margin)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LensDataset {
    pub metric: String,
    pub sampling: String,
    pub records: Vec<ScatteringRecord>,
}

pub fn lens_dataset(
    metric: &ConformalMetric,
    grid: &SampleGrid,
    opts: &IntegrateOptions,
) -> Result<LensDataset, ScatteringError> {
    grid.validate()?;
    let records = grid
        .entries()
        .par_iter()
        .map(|&e| scatter(metric, e, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LensDataset {
        metric: metric.name().to_string(),
        sampling: grid.describe(),
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub equal: bool,
    pub max_angle_dev: f64,
    pub max_arc_dev: f64,
    pub trapped_count: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessReport {
    /// Mean `τ_N(φ(X)) − τ_M(X)`, the constant `L` for lens-equivalent pairs.
    pub mean: f64,
    /// `max |excess − mean|`.
    pub max_dev: f64,
    pub trapped_count: usize,
    pub excesses: Vec<f64>,
}

impl ExcessReport {
    pub fn relative_spread(&self) -> f64 {
        self.max_dev / self.mean.abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LensComparison {
    pub scattering: ComparisonReport,
    pub excess: ExcessReport,
}

/// Evaluates `φ(α_M(X))` and `α_N(φ(X))` at every grid entry.
fn paired_records(
    m: &ConformalMetric,
    n: &ConformalMetric,
    h: &BoundaryIsometry,
    entries: &[BoundaryVector],
    opts: &IntegrateOptions,
) -> Result<Vec<(ScatteringRecord, ScatteringRecord)>, ScatteringError> {
    let (pm, pn) = (m.radius(), n.radius());
    if (pm - pn).abs() > 1e-12 * pm.max(pn) {
        return Err(ScatteringError::PerimeterMismatch(TAU * pm, TAU * pn));
    }
    entries
        .par_iter()
        .map(|x| {
            let a = scatter(m, *x, opts)?;
            let b = scatter(n, phi_map(h, x), opts)?;
            Ok((a, b))
        })
        .collect()
}

fn scattering_report(pairs: &[(ScatteringRecord, ScatteringRecord)], h: &BoundaryIsometry, tol: f64) -> ComparisonReport {
    let mut max_angle_dev: f64 = 0.0;
    let mut max_arc_dev: f64 = 0.0;
    let mut trapped_count = 0;
    for (a, b) in pairs {
        let (Some(ea), Some(eb)) = (a.exit, b.exit) else {
            trapped_count += 1;
            continue;
        };
        let lhs = phi_map(h, &ea);
        max_arc_dev = max_arc_dev.max(arc_difference(lhs.arc, eb.arc).abs());
        max_angle_dev = max_angle_dev.max(wrap_pi(eb.angle - lhs.angle).abs());
    }
    ComparisonReport {
        equal: trapped_count == 0 && max_angle_dev < tol && max_arc_dev < tol,
        max_angle_dev,
        max_arc_dev,
        trapped_count,
        samples: pairs.len(),
    }
}

fn excess_report(pairs: &[(ScatteringRecord, ScatteringRecord)]) -> ExcessReport {
    let mut trapped_count = 0;
    let mut excesses = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        if a.trapped() || b.trapped() {
            trapped_count += 1;
        } else {
            excesses.push(b.tau - a.tau);
        }
    }
    let mean = if excesses.is_empty() {
        f64::NAN
    } else {
        excesses.iter().sum::<f64>() / excesses.len() as f64
    };
    let max_dev = excesses.iter().fold(0.0f64, |m, e| m.max((e - mean).abs()));
    ExcessReport {
        mean,
        max_dev,
        trapped_count,
        excesses,
    }
}

/// Checks `φ ∘ α_M = α_N ∘ φ` on the grid. Trapped samples are counted and
/// excluded from the maxima; any trapped sample makes the verdict unequal.
pub fn compare_scattering(
    m: &ConformalMetric,
    n: &ConformalMetric,
    h: &BoundaryIsometry,
    grid: &SampleGrid,
    tol: f64,
    opts: &IntegrateOptions,
) -> Result<ComparisonReport, ScatteringError> {
    grid.validate()?;
    let pairs = paired_records(m, n, h, &grid.entries(), opts)?;
    Ok(scattering_report(&pairs, h, tol))
}

/// Per-entry excess `τ_N(φ(X)) − τ_M(X)`; meaningful once the scattering
/// relations agree.
pub fn length_excess(
    m: &ConformalMetric,
    n: &ConformalMetric,
    h: &BoundaryIsometry,
    entries: &[BoundaryVector],
    opts: &IntegrateOptions,
) -> Result<ExcessReport, ScatteringError> {
    let pairs = paired_records(m, n, h, entries, opts)?;
    Ok(excess_report(&pairs))
}

/// Both comparisons from a single set of traces.
pub fn compare_lens_data(
    m: &ConformalMetric,
    n: &ConformalMetric,
    h: &BoundaryIsometry,
    grid: &SampleGrid,
    tol: f64,
    opts: &IntegrateOptions,
) -> Result<LensComparison, ScatteringError> {
    grid.validate()?;
    let pairs = paired_records(m, n, h, &grid.entries(), opts)?;
    Ok(LensComparison {
        scattering: scattering_report(&pairs, h, tol),
        excess: excess_report(&pairs),
    })
}
