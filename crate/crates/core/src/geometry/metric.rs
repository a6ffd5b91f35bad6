use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spline::MonotoneCubic;
use super::GeometryError;
use crate::vec2::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Vacuum,
    Eaton,
    RadialProfile,
    General,
}

/// A rotationally symmetric refractive index `r ↦ n(r)`.
pub trait RadialIndex: Send + Sync + fmt::Debug {
    /// Returns `(n(r), dn/dr)` for a physical radius `r ≥ 0`.
    fn eval(&self, r: f64) -> Result<(f64, f64), GeometryError>;

    /// Radii where `d²n/dr²` jumps; the integrator keeps steps that cross
    /// them short.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

/// Index field of a non-radial metric: returns `(n, ∇n)` at a point.
pub type IndexField = dyn Fn(Vec2) -> (f64, Vec2) + Send + Sync;

#[derive(Clone)]
enum Factor {
    Unit,
    Radial(Arc<dyn RadialIndex>),
    Field(Arc<IndexField>),
}

/// The conformal metric `n² g₀` on a disk of radius `radius` centred at the
/// origin.
///
/// Immutable after construction; cloning shares the underlying profile.
#[derive(Clone)]
pub struct ConformalMetric {
    kind: MetricKind,
    name: String,
    factor: Factor,
    radius: f64,
    singular_at_origin: bool,
    exclusion_radius: f64,
}

impl fmt::Debug for ConformalMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalMetric")
            .field("kind", &self.kind)
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("singular_at_origin", &self.singular_at_origin)
            .finish()
    }
}

/// Default singular-chord exclusion for metrics with a pole at the origin.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-3;

impl ConformalMetric {
    pub fn vacuum(radius: f64) -> Self {
        Self {
            kind: MetricKind::Vacuum,
            name: "vacuum".into(),
            factor: Factor::Unit,
            radius,
            singular_at_origin: false,
            exclusion_radius: 0.0,
        }
    }

    pub fn radial(
        kind: MetricKind,
        name: impl Into<String>,
        profile: Arc<dyn RadialIndex>,
        radius: f64,
        singular_at_origin: bool,
    ) -> Self {
        Self {
            kind,
            name: name.into(),
            factor: Factor::Radial(profile),
            radius,
            singular_at_origin,
            exclusion_radius: if singular_at_origin {
                DEFAULT_EXCLUSION_RADIUS * radius
            } else {
                0.0
            },
        }
    }

    /// Radial metric interpolating `[r, n]` knots with a monotone cubic.
    pub fn from_profile_knots(name: impl Into<String>, knots: &[[f64; 2]], radius: f64) -> Result<Self, GeometryError> {
        if knots.iter().any(|k| k[1] <= 0.0) {
            return Err(GeometryError::InvalidProfile("index knots must be positive".into()));
        }
        let spline = MonotoneCubic::new(
            knots.iter().map(|k| k[0]).collect(),
            knots.iter().map(|k| k[1]).collect(),
        )?;
        Ok(Self::radial(
            MetricKind::RadialProfile,
            name,
            Arc::new(KnotProfile { spline }),
            radius,
            false,
        ))
    }

    pub fn general(name: impl Into<String>, field: Arc<IndexField>, radius: f64) -> Self {
        Self {
            kind: MetricKind::General,
            name: name.into(),
            factor: Factor::Field(field),
            radius,
            singular_at_origin: false,
            exclusion_radius: 0.0,
        }
    }

    pub fn with_exclusion_radius(mut self, exclusion: f64) -> Self {
        self.exclusion_radius = exclusion;
        self
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn singular_at_origin(&self) -> bool {
        self.singular_at_origin
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.factor, Factor::Field(_))
    }

    /// Radii where a radial profile is only C¹; empty otherwise.
    pub fn breakpoints(&self) -> &[f64] {
        match &self.factor {
            Factor::Radial(p) => p.breakpoints(),
            _ => &[],
        }
    }

    /// `(n(r), dn/dr)` for radial metrics.
    pub fn radial_index(&self, r: f64) -> Option<Result<(f64, f64), GeometryError>> {
        match &self.factor {
            Factor::Unit => Some(Ok((1.0, 0.0))),
            Factor::Radial(p) => Some(p.eval(r)),
            Factor::Field(_) => None,
        }
    }

    pub fn index(&self, p: Vec2) -> Result<f64, GeometryError> {
        self.index_and_gradient(p).map(|(n, _)| n)
    }

    /// The conformal factor and its Euclidean gradient at `p`.
    pub fn index_and_gradient(&self, p: Vec2) -> Result<(f64, Vec2), GeometryError> {
        let (n, grad) = match &self.factor {
            Factor::Unit => return Ok((1.0, Vec2::ZERO)),
            Factor::Radial(profile) => {
                let r = p.norm();
                if r == 0.0 {
                    if self.singular_at_origin {
                        return Err(GeometryError::Singular { x: p.x, y: p.y });
                    }
                    let (n, _) = profile.eval(0.0)?;
                    (n, Vec2::ZERO)
                } else {
                    let (n, dn) = profile.eval(r)?;
                    (n, p * (dn / r))
                }
            }
            Factor::Field(f) => f(p),
        };
        if !n.is_finite() || !grad.is_finite() {
            return Err(GeometryError::Singular { x: p.x, y: p.y });
        }
        if n <= 0.0 {
            return Err(GeometryError::NonPositiveIndex { n, x: p.x, y: p.y });
        }
        Ok((n, grad))
    }
}

#[derive(Debug)]
struct KnotProfile {
    spline: MonotoneCubic,
}

impl RadialIndex for KnotProfile {
    fn eval(&self, r: f64) -> Result<(f64, f64), GeometryError> {
        Ok(self.spline.eval(r))
    }

    fn breakpoints(&self) -> &[f64] {
        self.spline.abscissae()
    }
}

/// On-disk metric description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricFile {
    pub kind: MetricKind,
    #[serde(default = "unit_radius")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<[f64; 2]>>,
}

fn unit_radius() -> f64 {
    1.0
}

impl MetricFile {
    pub fn into_metric(self) -> Result<ConformalMetric, GeometryError> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(GeometryError::InvalidProfile(format!("radius {} must be positive", self.radius)));
        }
        match self.kind {
            MetricKind::Vacuum => Ok(ConformalMetric::vacuum(self.radius)),
            MetricKind::Eaton => Ok(crate::eaton::eaton_metric_with_radius(self.radius)),
            MetricKind::RadialProfile => {
                let knots = self
                    .profile
                    .ok_or_else(|| GeometryError::InvalidProfile("radial-profile needs `profile` knots".into()))?;
                ConformalMetric::from_profile_knots("radial-profile", &knots, self.radius)
            }
            MetricKind::General => Err(GeometryError::InvalidProfile(
                "general metrics cannot be described in a metric file".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_unit_everywhere() {
        let m = ConformalMetric::vacuum(1.0);
        for p in [Vec2::new(0.0, 0.0), Vec2::new(0.3, -0.2), Vec2::new(2.0, 0.0)] {
            assert_eq!(m.index_and_gradient(p).unwrap(), (1.0, Vec2::ZERO));
        }
    }

    #[test]
    fn radial_gradient_points_along_radius() {
        let knots: Vec<[f64; 2]> = (0..=20)
            .map(|i| {
                let r = i as f64 / 20.0;
                [r, 1.0 + 0.3 * (1.0 - r * r)]
            })
            .collect();
        let m = ConformalMetric::from_profile_knots("bump", &knots, 1.0).unwrap();
        let p = Vec2::new(0.3, 0.4);
        let (n, g) = m.index_and_gradient(p).unwrap();
        assert!((n - (1.0 + 0.3 * 0.75)).abs() < 1e-3);
        assert!(g.cross(p).abs() < 1e-15);
        assert!(g.dot(p) < 0.0);
    }

    #[test]
    fn metric_file_parses_and_rejects_bad_input() {
        let f: MetricFile = serde_json::from_str(r#"{"kind":"vacuum","radius":1}"#).unwrap();
        assert_eq!(f.clone().into_metric().unwrap().kind(), MetricKind::Vacuum);
        let bad: MetricFile = serde_json::from_str(r#"{"kind":"radial-profile"}"#).unwrap();
        assert!(bad.into_metric().is_err());
        assert!(serde_json::from_str::<MetricFile>(r#"{"kind":"warp"}"#).is_err());
        let neg: MetricFile = serde_json::from_str(r#"{"kind":"vacuum","radius":-1}"#).unwrap();
        assert!(neg.into_metric().is_err());
    }
}
