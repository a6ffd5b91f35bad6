//! Tangent lifts of plane curves into the unit tangent bundle `ΩN` and its
//! projectivization `PΩN`, with the flat Sasakian distances used by the
//! piecewise-linear machinery.
//!
//! Over the flat disk `ΩN ≅ N × S¹` and `PΩN ≅ N × ℝ/πℤ`, parallel
//! transport is trivial, and a line field is stored through a real-valued
//! continuous lift `φ` with the class `φ mod π` derived from it.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vec2::{wrap_half_pi, wrap_pi, Vec2};

/// Injectivity radius of the flat unit disk: any two points are joined by a
/// unique segment shorter than the diameter.
pub const FLAT_DISK_INJ: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("zero speed at sample {index}: not an immersion")]
    ZeroSpeed { index: usize },
    #[error("direction jumps by {jump} rad after sample {index}; sample more densely")]
    Discontinuous { index: usize, jump: f64 },
    #[error("closed lift turns by {turns} turns, not an integer")]
    NonIntegralTurning { turns: f64 },
    #[error("base distance {d_h} is not below the injectivity radius {inj}")]
    BeyondInjectivity { d_h: f64, inj: f64 },
    #[error("line angles are exactly π/2 apart; the shorter fiber arc is ambiguous")]
    AmbiguousFiberArc,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub point: Vec2,
    pub velocity: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSample {
    pub base: Vec2,
    /// Continuous lift of the direction angle.
    pub theta: f64,
}

/// A curve in `ΩN`. A closed curve does not repeat its first sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedCurve {
    pub samples: Vec<LiftSample>,
    pub closed: bool,
}

impl LiftedCurve {
    /// Total change of `θ`, including the closing step for closed curves.
    pub fn total_turning(&self) -> f64 {
        let n = self.samples.len();
        if n == 0 {
            return 0.0;
        }
        let mut total = self.samples[n - 1].theta - self.samples[0].theta;
        if self.closed {
            total += wrap_pi(self.samples[0].theta - self.samples[n - 1].theta);
        }
        total
    }

    /// Turning number of a closed lift.
    pub fn theta_winding(&self) -> Result<i64, LiftError> {
        integral_turns(self.total_turning() / TAU)
    }
}

fn integral_turns(turns: f64) -> Result<i64, LiftError> {
    let k = turns.round();
    if (turns - k).abs() > 1e-6 {
        return Err(LiftError::NonIntegralTurning { turns });
    }
    Ok(k as i64)
}

/// Lifts `t ↦ (γ(t), γ′(t)/|γ′(t)|)` with a continuous angle.
pub fn unit_tangent_lift(samples: &[CurveSample], closed: bool) -> Result<LiftedCurve, LiftError> {
    let mut out: Vec<LiftSample> = Vec::with_capacity(samples.len());
    for (index, s) in samples.iter().enumerate() {
        if s.velocity.normalized().is_none() {
            return Err(LiftError::ZeroSpeed { index });
        }
        let raw = s.velocity.angle();
        let theta = match out.last() {
            None => raw,
            Some(prev) => {
                let jump = wrap_pi(raw - prev.theta);
                if jump.abs() >= FRAC_PI_2 {
                    return Err(LiftError::Discontinuous { index: index - 1, jump });
                }
                prev.theta + jump
            }
        };
        out.push(LiftSample { base: s.point, theta });
    }
    if closed && out.len() > 1 {
        let jump = wrap_pi(out[0].theta - out[out.len() - 1].theta);
        if jump.abs() >= FRAC_PI_2 {
            return Err(LiftError::Discontinuous { index: out.len() - 1, jump });
        }
    }
    let lift = LiftedCurve { samples: out, closed };
    if closed {
        lift.theta_winding()?;
    }
    Ok(lift)
}

/// Lift of a polyline with velocities from central differences (one-sided at
/// the ends of open curves).
pub fn unit_tangent_lift_of_points(points: &[Vec2], closed: bool) -> Result<LiftedCurve, LiftError> {
    let n = points.len();
    if n < 2 {
        return Err(LiftError::TooFewSamples { needed: 2, got: n });
    }
    let samples: Vec<CurveSample> = (0..n)
        .map(|i| {
            let (a, b) = if closed {
                (points[(i + n - 1) % n], points[(i + 1) % n])
            } else {
                (points[i.saturating_sub(1)], points[(i + 1).min(n - 1)])
            };
            CurveSample {
                point: points[i],
                velocity: b - a,
            }
        })
        .collect();
    unit_tangent_lift(&samples, closed)
}

/// A point of `PΩN`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint {
    pub base: Vec2,
    /// The line class in `[0, π)`.
    pub line_angle: f64,
    /// Continuous real lift, `≡ line_angle (mod π)`.
    pub lift: f64,
}

impl ProjPoint {
    pub fn new(base: Vec2, lift: f64) -> Self {
        Self {
            base,
            line_angle: line_class(lift),
            lift,
        }
    }

    /// Unit vector spanning the line.
    pub fn line_direction(&self) -> Vec2 {
        Vec2::from_angle(self.lift)
    }
}

/// `angle mod π` in `[0, π)`.
pub fn line_class(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    if a >= PI {
        0.0
    } else {
        a
    }
}

/// A curve in `PΩN`. A closed curve does not repeat its first sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjCurve {
    pub points: Vec<ProjPoint>,
    pub closed: bool,
}

impl ProjCurve {
    pub fn total_rotation(&self) -> f64 {
        let n = self.points.len();
        if n == 0 {
            return 0.0;
        }
        let mut total = self.points[n - 1].lift - self.points[0].lift;
        if self.closed {
            total += wrap_half_pi(self.points[0].lift - self.points[n - 1].lift);
        }
        total
    }

    /// Number of half turns of the line field around a closed curve.
    pub fn line_winding(&self) -> Result<i64, LiftError> {
        integral_turns(self.total_rotation() / PI)
    }
}

/// The quotient map `ΩN → PΩN`, keeping `θ` as the line lift.
pub fn projectivize(lift: &LiftedCurve) -> ProjCurve {
    ProjCurve {
        points: lift.samples.iter().map(|s| ProjPoint::new(s.base, s.theta)).collect(),
        closed: lift.closed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub d_h: f64,
    pub d_v: f64,
    pub d0: f64,
}

/// Signed shortest fiber rotation from `p`'s line to `q`'s, in `(−π/2, π/2]`.
pub fn fiber_delta(p: &ProjPoint, q: &ProjPoint) -> f64 {
    wrap_half_pi(q.lift - p.lift)
}

pub fn dist_components(p: &ProjPoint, q: &ProjPoint) -> Result<Distances, LiftError> {
    let d_h = p.base.distance(q.base);
    if d_h >= FLAT_DISK_INJ {
        return Err(LiftError::BeyondInjectivity {
            d_h,
            inj: FLAT_DISK_INJ,
        });
    }
    let d_v = fiber_delta(p, q).abs().min(fiber_delta(q, p).abs());
    Ok(Distances {
        d_h,
        d_v,
        d0: d_h.max(d_v),
    })
}

/// Distance in the flat Sasakian metric `ds² = |dx|² + dφ²`.
pub fn sasaki_distance(p: &ProjPoint, q: &ProjPoint) -> Result<f64, LiftError> {
    let d = dist_components(p, q)?;
    Ok(d.d_h.hypot(d.d_v))
}

/// The curve over the segment `p.base → q.base` whose line turns at the
/// constant rate `d_v` through the shorter fiber arc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalLinearCurve {
    pub p: ProjPoint,
    pub q: ProjPoint,
    /// Signed fiber rotation, `|delta| = d_v(p, q)`.
    pub delta: f64,
}

pub fn minimal_linear_curve(p: &ProjPoint, q: &ProjPoint) -> Result<MinimalLinearCurve, LiftError> {
    let d = dist_components(p, q)?;
    if d.d_v >= FRAC_PI_2 {
        return Err(LiftError::AmbiguousFiberArc);
    }
    Ok(MinimalLinearCurve {
        p: *p,
        q: *q,
        delta: fiber_delta(p, q),
    })
}

impl MinimalLinearCurve {
    /// The point at `t ∈ [0, 1]`; the lift is continued from `p`, and the
    /// endpoints reproduce `p` and `q` exactly.
    pub fn eval(&self, t: f64) -> ProjPoint {
        if t == 0.0 {
            return self.p;
        }
        let lift = self.p.lift + t * self.delta;
        if t == 1.0 {
            return ProjPoint {
                base: self.q.base,
                line_angle: self.q.line_angle,
                lift,
            };
        }
        ProjPoint::new(Vec2::lerp(self.p.base, self.q.base, t), lift)
    }

    pub fn sample(&self, count: usize) -> Vec<ProjPoint> {
        let m = count.max(2) - 1;
        (0..=m).map(|i| self.eval(i as f64 / m as f64)).collect()
    }

    /// Unit initial velocity in `(x, y, φ)` coordinates.
    pub fn initial_direction(&self) -> [f64; 3] {
        let d = self.q.base - self.p.base;
        let len = (d.x * d.x + d.y * d.y + self.delta * self.delta).sqrt();
        [d.x / len, d.y / len, self.delta / len]
    }
}

/// `∫ |dφ/dt| dt` over consecutive samples, closing the loop when asked.
pub fn vertical_length(points: &[ProjPoint], closed: bool) -> f64 {
    let mut total: f64 = points.windows(2).map(|w| (w[1].lift - w[0].lift).abs()).sum();
    if closed && points.len() > 1 {
        total += fiber_delta(&points[points.len() - 1], &points[0]).abs();
    }
    total
}

fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2])
        .sqrt()
        .atan2(dot)
}

/// Sum of the three angles between the minimal linear curves joining `p`,
/// `q` and `r`, measured in the Sasakian metric.
pub fn triangle_angle_sum(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<f64, LiftError> {
    let mut sum = 0.0;
    for (a, b, c) in [(p, q, r), (q, r, p), (r, p, q)] {
        let ab = minimal_linear_curve(a, b)?.initial_direction();
        let ac = minimal_linear_curve(a, c)?.initial_direction();
        sum += angle_between(ab, ac);
    }
    Ok(sum)
}

/// `ΔD / ΔL` at sample `j` of a sampled curve started at sample `i`: the
/// rate at which the distance from `curve[i]` grows per unit curve length,
/// i.e. the cosine of the angle between the curve and the chord back to
/// `curve[i]`. Tends to 1 as the samples merge.
pub fn chord_angle_ratio(curve: &[ProjPoint], i: usize, j: usize) -> Result<f64, LiftError> {
    if j <= i || j >= curve.len() {
        return Err(LiftError::TooFewSamples { needed: j + 1, got: curve.len() });
    }
    let d_now = sasaki_distance(&curve[i], &curve[j])?;
    let d_prev = sasaki_distance(&curve[i], &curve[j - 1])?;
    let dl = sasaki_distance(&curve[j - 1], &curve[j])?;
    Ok((d_now - d_prev) / dl)
}
