use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{ConformalMetric, GeometryError};
use crate::scattering::{classify, BoundaryClass, BoundaryVector};
use crate::vec2::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub position: Vec2,
    /// Direction angle w.r.t. the Euclidean x axis, in `[0, 2π)` when stored
    /// on a path.
    pub direction: f64,
    /// Riemannian length traversed.
    pub arclength: f64,
}

/// Derivative of a [`GeodesicState`] per unit Euclidean arclength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateDerivative {
    pub d_position: Vec2,
    pub d_direction: f64,
    pub d_arclength: f64,
}

impl StateDerivative {
    /// Turning rate per unit Riemannian length.
    pub fn riemannian_turning_rate(&self) -> f64 {
        self.d_direction / self.d_arclength
    }
}

/// Right-hand side of the ray equation `d(nT)/ds = ∇n`.
///
/// With `T = (cos θ, sin θ)` this reduces to
/// `dθ/ds = (−∂ₓn sin θ + ∂ᵧn cos θ) / n` and `dσ/ds = n`.
pub fn geodesic_rhs(metric: &ConformalMetric, state: &GeodesicState) -> Result<StateDerivative, GeometryError> {
    let (n, grad) = metric.index_and_gradient(state.position)?;
    let (s, c) = state.direction.sin_cos();
    Ok(StateDerivative {
        d_position: Vec2::new(c, s),
        d_direction: (-grad.x * s + grad.y * c) / n,
        d_arclength: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    /// Target accuracy of exit vectors; per-step errors are held well below
    /// it, and it also bounds the boundary-event localization.
    pub step_tolerance: f64,
    /// Riemannian length after which a geodesic is declared trapped.
    /// Defaults to 100 × the domain diameter.
    pub max_length: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            step_tolerance: 1e-10,
            max_length: None,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Exit {
    Boundary { vector: BoundaryVector },
    Trapped,
}

impl Exit {
    pub fn vector(&self) -> Option<BoundaryVector> {
        match self {
            Exit::Boundary { vector } => Some(*vector),
            Exit::Trapped => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicState>,
    pub entry: BoundaryVector,
    pub exit: Exit,
    /// Riemannian length τ.
    pub length: f64,
    pub radius: f64,
}

impl GeodesicPath {
    pub fn positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.samples.iter().map(|s| s.position)
    }

    /// The same curve traversed backwards. Trapped paths have no exit to
    /// start from and are returned unchanged.
    pub fn reversed(&self) -> GeodesicPath {
        let Some(exit) = self.exit.vector() else {
            return self.clone();
        };
        let total = self.length;
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|s| GeodesicState {
                position: s.position,
                direction: (s.direction + std::f64::consts::PI).rem_euclid(TAU),
                arclength: total - s.arclength,
            })
            .collect();
        GeodesicPath {
            samples,
            entry: exit.reversed(),
            exit: Exit::Boundary { vector: self.entry.reversed() },
            length: total,
            radius: self.radius,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type Y = [f64; 4];

fn rhs(metric: &ConformalMetric, y: &Y) -> Result<Y, GeometryError> {
    let d = geodesic_rhs(
        metric,
        &GeodesicState {
            position: Vec2::new(y[0], y[1]),
            direction: y[2],
            arclength: y[3],
        },
    )?;
    Ok([d.d_position.x, d.d_position.y, d.d_direction, d.d_arclength])
}

/// One Dormand–Prince step; returns the 5th-order solution and the
/// embedded error estimate.
fn dopri_step(metric: &ConformalMetric, y: &Y, k1: &Y, h: f64) -> Result<(Y, Y), GeometryError> {
    let mut k = [[0.0; 4]; 7];
    k[0] = *k1;
    for stage in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for i in 0..4 {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        let _ = C[stage];
        k[stage] = rhs(metric, &ys)?;
    }
    let mut out = *y;
    let mut err = [0.0; 4];
    for (j, kj) in k.iter().enumerate() {
        for i in 0..4 {
            out[i] += h * B[j] * kj[i];
            err[i] += h * E[j] * kj[i];
        }
    }
    Ok((out, err))
}

fn error_ratio(err: &Y, y: &Y, tol: f64) -> f64 {
    let spatial = err[0].abs().max(err[1].abs()).max(err[2].abs());
    let length = err[3].abs() / (1.0 + y[3].abs());
    spatial.max(length) / tol
}

fn radial_excess(y: &Y, radius: f64) -> f64 {
    y[0].hypot(y[1]) - radius
}

fn stored(y: &Y) -> GeodesicState {
    GeodesicState {
        position: Vec2::new(y[0], y[1]),
        direction: y[2].rem_euclid(TAU),
        arclength: y[3],
    }
}

/// Traces the geodesic starting at an inward boundary vector until it
/// leaves the disk again.
pub fn integrate_geodesic(
    metric: &ConformalMetric,
    entry: BoundaryVector,
    opts: &IntegrateOptions,
) -> Result<GeodesicPath, GeometryError> {
    if classify(&entry) != BoundaryClass::Inward {
        return Err(GeometryError::NotInward { angle: entry.angle });
    }
    let radius = metric.radius();
    if metric.singular_at_origin() {
        let offset = radius * entry.angle.cos().abs();
        if offset < metric.exclusion_radius() {
            return Err(GeometryError::SingularChord {
                offset,
                exclusion: metric.exclusion_radius(),
            });
        }
    }
    let tol = opts.step_tolerance;
    let local_tol = 0.05 * tol;
    // the error estimate misses the O(h³) error of a step across a knot
    // where n'' jumps, so such steps are held to this length
    let h_knot = 0.2 * radius * local_tol.cbrt();
    let breaks: Vec<f64> = metric
        .breakpoints()
        .iter()
        .copied()
        .filter(|&b| b > 0.0 && b < radius)
        .collect();
    let max_length = opts.max_length.unwrap_or(200.0 * radius);
    let h_max = 0.02 * radius;
    let event_tol = 0.01 * tol * radius;

    let p0 = entry.base_point(radius);
    let d0 = entry.direction();
    let mut y: Y = [p0.x, p0.y, d0.angle(), 0.0];
    let mut k1 = rhs(metric, &y)?;
    let mut samples = vec![stored(&y)];
    let mut h = 1e-3 * radius;
    let mut left_boundary = false;

    for _ in 0..opts.max_steps {
        let (y_new, err) = dopri_step(metric, &y, &k1, h)?;
        let ratio = error_ratio(&err, &y_new, local_tol);
        if !(ratio <= 1.0) {
            let factor = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).max(0.1) } else { 0.1 };
            h *= factor;
            if h < 1e-15 * radius {
                return Err(GeometryError::StepUnderflow { x: y[0], y: y[1] });
            }
            continue;
        }
        if h > h_knot && straddles(&breaks, &y, &y_new) {
            h = (0.25 * h).max(h_knot);
            continue;
        }

        if radial_excess(&y_new, radius) > 0.0 {
            if !left_boundary {
                // still grazing the starting point; shrink until the step
                // stays inside
                h *= 0.1;
                if h < 1e-15 * radius {
                    return Err(GeometryError::StepUnderflow { x: y[0], y: y[1] });
                }
                continue;
            }
            let exit_state = localize_exit(metric, &y, &k1, h, radius, event_tol)?;
            let mut last = stored(&exit_state);
            last.position = last.position * (radius / last.position.norm());
            let dir = Vec2::from_angle(exit_state[2]);
            samples.push(last);
            let length = last.arclength;
            return Ok(GeodesicPath {
                samples,
                entry,
                exit: Exit::Boundary {
                    vector: BoundaryVector::from_point_direction(last.position, dir),
                },
                length,
                radius,
            });
        }

        left_boundary = true;
        y = y_new;
        k1 = rhs(metric, &y)?;
        samples.push(stored(&y));
        if y[3] > max_length {
            let length = y[3];
            return Ok(GeodesicPath {
                samples,
                entry,
                exit: Exit::Trapped,
                length,
                radius,
            });
        }
        let growth = if ratio < 1e-10 { 5.0 } else { (0.9 * ratio.powf(-0.2)).min(5.0) };
        h = (h * growth).min(h_max);
    }
    let length = y[3];
    Ok(GeodesicPath {
        samples,
        entry,
        exit: Exit::Trapped,
        length,
        radius,
    })
}

/// Whether a breakpoint radius lies inside the radial range of the chord
/// from `a` to `b`.
fn straddles(breaks: &[f64], a: &Y, b: &Y) -> bool {
    if breaks.is_empty() {
        return false;
    }
    let (p, q) = (Vec2::new(a[0], a[1]), Vec2::new(b[0], b[1]));
    let d = q - p;
    let len2 = d.dot(d);
    let closest = if len2 > 0.0 { (-p.dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let lo = (p + d * closest).norm();
    let hi = p.norm().max(q.norm());
    breaks.iter().any(|&r| r > lo && r < hi)
}

/// Bisects the step length on the signed radial excess until the crossing
/// is bracketed to `event_tol`; returns the state just on or outside the
/// boundary.
fn localize_exit(
    metric: &ConformalMetric,
    y: &Y,
    k1: &Y,
    h: f64,
    radius: f64,
    event_tol: f64,
) -> Result<Y, GeometryError> {
    let (mut lo, mut hi) = (0.0, h);
    let (mut y_hi, _) = dopri_step(metric, y, k1, h)?;
    while hi - lo > event_tol {
        let mid = 0.5 * (lo + hi);
        let (y_mid, _) = dopri_step(metric, y, k1, mid)?;
        if radial_excess(&y_mid, radius) > 0.0 {
            hi = mid;
            y_hi = y_mid;
        } else {
            lo = mid;
        }
    }
    Ok(y_hi)
}

/// Clairaut's conserved quantity `n(r)·r·sin ψ` for radial metrics, with `ψ`
/// the signed angle from the outward radial ray to the direction.
pub fn clairaut(metric: &ConformalMetric, state: &GeodesicState) -> Result<f64, GeometryError> {
    if !metric.is_radial() {
        return Err(GeometryError::NotRadial);
    }
    let n = metric.index(state.position)?;
    Ok(n * state.position.cross(Vec2::from_angle(state.direction)))
}

/// Riemannian length `∫ n ds` of a polyline, by 3-point Gauss–Legendre
/// quadrature on each segment.
pub fn riemannian_length(metric: &ConformalMetric, polyline: &[Vec2]) -> Result<f64, GeometryError> {
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    for &p in polyline {
        metric.index(p)?;
    }
    let mut total = 0.0;
    for w in polyline.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = a.distance(b);
        if len == 0.0 {
            continue;
        }
        let mut seg = 0.0;
        for (x, wt) in NODES.iter().zip(WEIGHTS) {
            let t = 0.5 * (1.0 + x);
            seg += wt * metric.index(Vec2::lerp(a, b, t))?;
        }
        total += 0.5 * len * seg;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn vacuum() -> ConformalMetric {
        ConformalMetric::vacuum(1.0)
    }

    #[test]
    fn straddling_includes_chords_that_dip_through_a_knot() {
        let breaks = [0.5];
        let y = |x: f64, y: f64| -> Y { [x, y, 0.0, 0.0] };
        assert!(straddles(&breaks, &y(0.4, 0.0), &y(0.6, 0.0)));
        // both ends outside r = 0.5, closest approach 0.45
        assert!(straddles(&breaks, &y(-0.3, 0.45), &y(0.3, 0.45)));
        assert!(!straddles(&breaks, &y(-0.3, 0.55), &y(0.3, 0.55)));
        assert!(!straddles(&[], &y(0.4, 0.0), &y(0.6, 0.0)));
    }

    #[test]
    fn vacuum_rhs_is_straight() {
        let s = GeodesicState {
            position: Vec2::new(0.2, -0.1),
            direction: 1.3,
            arclength: 0.0,
        };
        let d = geodesic_rhs(&vacuum(), &s).unwrap();
        assert_eq!(d.d_direction, 0.0);
        assert_eq!(d.d_arclength, 1.0);
    }

    #[test]
    fn radial_ray_toward_origin_does_not_turn() {
        let m = crate::eaton::eaton_metric();
        let s = GeodesicState {
            position: Vec2::new(0.5, 0.0),
            direction: PI,
            arclength: 0.0,
        };
        assert!(geodesic_rhs(&m, &s).unwrap().d_direction.abs() < 1e-15);
    }

    #[test]
    fn diameter_chord() {
        let path = integrate_geodesic(&vacuum(), BoundaryVector::new(0.0, FRAC_PI_2), &Default::default()).unwrap();
        let exit = path.exit.vector().unwrap();
        assert!((path.length - 2.0).abs() < 1e-9);
        assert!((exit.arc - 0.5).abs() < 1e-9);
        assert!((exit.outward_angle() - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn vacuum_chords_match_closed_form() {
        for k in 1..20 {
            let theta = PI * k as f64 / 20.0;
            let path = integrate_geodesic(&vacuum(), BoundaryVector::new(0.3, theta), &Default::default()).unwrap();
            let exit = path.exit.vector().unwrap();
            assert!((path.length - 2.0 * theta.sin()).abs() < 1e-9, "theta {theta}");
            let expected = Vec2::from_angle(TAU * 0.3 + 2.0 * theta);
            assert!(exit.base_point(1.0).distance(expected) < 1e-9);
            assert!((exit.outward_angle() - theta).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_inward_and_singular_chords() {
        let m = crate::eaton::eaton_metric();
        assert!(matches!(
            integrate_geodesic(&m, BoundaryVector::new(0.0, 0.0), &Default::default()),
            Err(GeometryError::NotInward { .. })
        ));
        assert!(matches!(
            integrate_geodesic(&m, BoundaryVector::new(0.0, FRAC_PI_2), &Default::default()),
            Err(GeometryError::SingularChord { .. })
        ));
    }

    #[test]
    fn short_max_length_reports_trapped() {
        let opts = IntegrateOptions {
            max_length: Some(0.5),
            ..Default::default()
        };
        let path = integrate_geodesic(&vacuum(), BoundaryVector::new(0.0, FRAC_PI_4), &opts).unwrap();
        assert_eq!(path.exit, Exit::Trapped);
    }

    #[test]
    fn clairaut_zero_on_diameter_and_constant_on_chords() {
        let m = vacuum();
        let path = integrate_geodesic(&m, BoundaryVector::new(0.1, FRAC_PI_2), &Default::default()).unwrap();
        for s in &path.samples {
            assert!(clairaut(&m, s).unwrap().abs() < 1e-12);
        }
        let path = integrate_geodesic(&m, BoundaryVector::new(0.1, 0.7), &Default::default()).unwrap();
        let c0 = clairaut(&m, &path.samples[0]).unwrap();
        for s in &path.samples {
            assert!((clairaut(&m, s).unwrap() - c0).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_lengths() {
        let m = vacuum();
        assert!((riemannian_length(&m, &[Vec2::ZERO, Vec2::new(1.0, 0.0)]).unwrap() - 1.0).abs() < 1e-15);
        let circle: Vec<Vec2> = (0..=4096).map(|i| Vec2::from_angle(TAU * i as f64 / 4096.0)).collect();
        // inscribed polygon perimeter
        let expected = 4096.0 * 2.0 * (PI / 4096.0).sin();
        assert!((riemannian_length(&m, &circle).unwrap() - expected).abs() < 1e-12);
        assert!((expected - TAU).abs() < 1e-5);
    }

    #[test]
    fn quadrature_rejects_pole() {
        let m = crate::eaton::eaton_metric();
        assert!(riemannian_length(&m, &[Vec2::ZERO, Vec2::new(0.5, 0.0)]).is_err());
    }
}
