//! Conformal metrics `n² g₀` on a disk and their geodesics.
//!
//! Geodesics are integrated in Euclidean arclength `s` with the direction
//! stored as an angle `θ`; the Riemannian length `σ` is carried along as a
//! fourth component with `dσ/ds = n`. Exits through the boundary circle are
//! localized by bisection on the step length.

mod integrate;
mod metric;
pub mod spline;

use thiserror::Error;

pub use integrate::{
    clairaut, geodesic_rhs, integrate_geodesic, riemannian_length, Exit, GeodesicPath, GeodesicState,
    IntegrateOptions, StateDerivative,
};
pub use metric::{ConformalMetric, IndexField, MetricFile, MetricKind, RadialIndex, DEFAULT_EXCLUSION_RADIUS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("metric is singular at ({x}, {y})")]
    Singular { x: f64, y: f64 },
    #[error("refractive index {n} is not positive at ({x}, {y})")]
    NonPositiveIndex { n: f64, x: f64, y: f64 },
    #[error("entry vector is not strictly inward (angle {angle})")]
    NotInward { angle: f64 },
    #[error("chord passes within {offset:e} of the singular origin (exclusion {exclusion:e})")]
    SingularChord { offset: f64, exclusion: f64 },
    #[error("operation requires a radially symmetric metric")]
    NotRadial,
    #[error("invalid index profile: {0}")]
    InvalidProfile(String),
    #[error("step size underflow at ({x}, {y})")]
    StepUnderflow { x: f64, y: f64 },
}
