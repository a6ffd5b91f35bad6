//! Explicit knot families realizing the two local moves that change the
//! crossing count, and a contractible knot glued from a tangent-lift arc
//! and a rotating-line arc.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::curves::{FnCurve, Lemniscate, PlaneCurve};
use crate::vec2::Vec2;

use super::{FramedCurve, KnotError};

/// The same knot family before and after a move.
#[derive(Clone, Debug)]
pub struct MovePair {
    pub before: FramedCurve,
    pub after: FramedCurve,
}

/// Continuous tangent angle of the unmodified lemniscate.
fn lemniscate_tangent_lift(base: Lemniscate) -> Result<FramedCurve, KnotError> {
    FramedCurve::tangent(Arc::new(base))
}

const KINK_CENTER: f64 = 0.1;
const KINK_HALF_WIDTH: f64 = 0.03;

/// Lemniscate with a planar kink of strength `lambda` inserted near
/// `t = 0.1`. The kink is the curve `a·u + b·(sin u − sin 2u/2)` along the
/// tangent and `h·((1 − cos u)/2)²` along the normal, `u ∈ [0, 2π]`, with
/// `b = lambda·a`; it has a loop exactly when `lambda > ½`.
pub fn kinked_lemniscate(lambda: f64) -> FnCurve {
    let base = Lemniscate::default();
    let t0 = base.velocity(KINK_CENTER);
    let speed = t0.norm();
    let tangent = t0 * (1.0 / speed);
    let normal = tangent.perp();
    let a = speed * KINK_HALF_WIDTH / PI;
    let b = lambda * a;
    let h = 2.0 * a;
    let du_dt = PI / KINK_HALF_WIDTH;
    let window = move |t: f64| -> Option<f64> {
        let s = t.rem_euclid(1.0) - KINK_CENTER;
        (s.abs() < KINK_HALF_WIDTH).then(|| PI * s / KINK_HALF_WIDTH + PI)
    };
    FnCurve::new(
        format!("kinked-lemniscate-{lambda}"),
        move |t| {
            let p = base.point(t);
            match window(t) {
                Some(u) => {
                    let c = (1.0 - u.cos()) / 2.0;
                    p + tangent * (b * (u.sin() - (2.0 * u).sin() / 2.0)) + normal * (h * c * c)
                }
                None => p,
            }
        },
        move |t| {
            let v = base.velocity(t);
            match window(t) {
                Some(u) => {
                    let c = (1.0 - u.cos()) / 2.0;
                    let dtan = b * (u.cos() - (2.0 * u).cos());
                    let dnor = h * c * u.sin();
                    v + (tangent * dtan + normal * dnor) * du_dt
                }
                None => v,
            }
        },
    )
}

/// A kink is added to the lemniscate while the line field stays the tangent
/// line field of the unkinked lemniscate, so the new crossing has type 0.
pub fn type_one_move() -> Result<MovePair, KnotError> {
    let lines = lemniscate_tangent_lift(Lemniscate::default())?;
    let make = |lambda: f64| {
        let lines = lines.clone();
        FramedCurve::with_line_field(Arc::new(kinked_lemniscate(lambda)), move |t| lines.line_lift(t))
    };
    Ok(MovePair {
        before: make(0.3)?,
        after: make(1.0)?,
    })
}

/// Oval `(2 cos τ, sin τ·(1 − k·e^{−x²/σ²}))` pinched at `x = 0`; for `k > 1`
/// the two sides pass through each other.
pub fn pinched_oval(k: f64) -> FnCurve {
    const SIGMA2: f64 = 0.25;
    let point = move |t: f64| {
        let (s, c) = (TAU * t).sin_cos();
        let x = 2.0 * c;
        Vec2::new(x, s * (1.0 - k * (-x * x / SIGMA2).exp()))
    };
    let velocity = move |t: f64| {
        let (s, c) = (TAU * t).sin_cos();
        let x = 2.0 * c;
        let dx = -2.0 * s;
        let g = (-x * x / SIGMA2).exp();
        let dg = g * (-2.0 * x / SIGMA2) * dx;
        Vec2::new(dx, c * (1.0 - k * g) - s * k * dg) * TAU
    };
    FnCurve::new(format!("pinched-oval-{k}"), point, velocity)
}

/// Line field that turns by `2π − 0.8` between the two pinch points and back.
fn oval_lines(t: f64) -> f64 {
    (TAU - 0.8) * (1.0 - (TAU * (t - 0.25)).cos()) / 2.0
}

/// The pinched oval passes through itself, creating two crossings.
pub fn type_two_move() -> Result<MovePair, KnotError> {
    let make = |k: f64| FramedCurve::with_line_field(Arc::new(pinched_oval(k)), oval_lines);
    Ok(MovePair {
        before: make(0.5)?,
        after: make(1.1)?,
    })
}

fn alpha_point(t: f64) -> Vec2 {
    Vec2::new(t * t - 1.0, t * (t * t - 1.0))
}

fn alpha_velocity(t: f64) -> Vec2 {
    Vec2::new(2.0 * t, 3.0 * t * t - 1.0)
}

/// Continuous tangent angle of the alpha curve on `[−1.5, 1.5]`.
fn alpha_angle(t: f64) -> f64 {
    let v = alpha_velocity(t);
    let a = v.y.atan2(v.x);
    if t < 0.0 {
        a.rem_euclid(TAU)
    } else {
        a + TAU
    }
}

/// A contractible knot: on `[0, ½)` the tangent lift of the alpha curve
/// `(t² − 1, t(t² − 1))`, `t ∈ [−1.5, 1.5]`; on `[½, 1)` a half ellipse back
/// to the start whose line turns linearly back to the initial tangent.
pub fn glued_alpha_knot() -> Result<FramedCurve, KnotError> {
    const T0: f64 = 1.5;
    let top = alpha_point(T0);
    let cx = top.x;
    let (rx, ry) = (1.75, top.y);
    let param = |s: f64| -T0 + 4.0 * T0 * s;
    let curve = FnCurve::new(
        "glued-alpha",
        move |s| {
            let s = s.rem_euclid(1.0);
            if s < 0.5 {
                alpha_point(param(s))
            } else {
                let a = PI * (2.0 * s - 1.0);
                Vec2::new(cx + rx * a.sin(), ry * a.cos())
            }
        },
        move |s| {
            let s = s.rem_euclid(1.0);
            if s < 0.5 {
                alpha_velocity(param(s)) * (4.0 * T0)
            } else {
                let a = PI * (2.0 * s - 1.0);
                Vec2::new(rx * a.cos(), -ry * a.sin()) * TAU
            }
        },
    );
    let (start, end) = (alpha_angle(-T0), alpha_angle(T0));
    FramedCurve::with_line_field(Arc::new(curve), move |s| {
        if s < 0.5 {
            alpha_angle(param(s))
        } else {
            end + (start - end) * (2.0 * s - 1.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{analyze, find_double_points, Certificate, CrossingOptions, InvariantTable};

    fn table(pairs: &[(u32, i64)]) -> InvariantTable {
        InvariantTable(pairs.iter().copied().collect())
    }

    #[test]
    fn kink_appears_only_past_threshold() {
        let opts = CrossingOptions::default();
        assert_eq!(find_double_points(&kinked_lemniscate(0.3), &opts).unwrap().len(), 1);
        assert_eq!(find_double_points(&kinked_lemniscate(1.0), &opts).unwrap().len(), 2);
    }

    #[test]
    fn type_one_move_keeps_the_table() {
        let m = type_one_move().unwrap();
        let opts = CrossingOptions::default();
        let (a, b) = (analyze(&m.before, &opts).unwrap(), analyze(&m.after, &opts).unwrap());
        assert_eq!(a.crossings.len() + 1, b.crossings.len());
        assert_eq!(a.table, table(&[(2, 1)]));
        assert_eq!(a.table, b.table);
        assert!(b.crossings.iter().any(|c| c.ctype == 0));
    }

    #[test]
    fn type_two_move_keeps_the_table() {
        let m = type_two_move().unwrap();
        let opts = CrossingOptions::default();
        let (a, b) = (analyze(&m.before, &opts).unwrap(), analyze(&m.after, &opts).unwrap());
        assert!(a.crossings.is_empty());
        assert_eq!(b.crossings.len(), 2);
        assert_eq!(b.crossings[0].ctype, b.crossings[1].ctype);
        assert_eq!(b.crossings[0].sign, -b.crossings[1].sign);
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn glued_alpha_has_one_type_two_crossing() {
        let k = glued_alpha_knot().unwrap();
        assert_eq!(k.line_winding(), 0);
        let r = analyze(&k, &CrossingOptions::default()).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert!((r.crossings[0].l - 1.0 / 12.0).abs() < 1e-9);
        assert!((r.crossings[0].l_prime - 5.0 / 12.0).abs() < 1e-9);
        assert_eq!(r.table, table(&[(2, 1)]));
        assert_eq!(r.certificate, Some(Certificate::NonzeroInvariant { g: 2, w: 1 }));
    }
}
