//! Plane vectors and the angle helpers shared by every module.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from the positive x axis.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z component of the 3-D cross product; positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Rotated a quarter turn counterclockwise.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// `(1 - t) a + t b`; returns `b` exactly at `t = 1`.
    pub fn lerp(a: Vec2, b: Vec2, t: f64) -> Vec2 {
        Vec2::new((1.0 - t) * a.x + t * b.x, (1.0 - t) * a.y + t * b.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Wraps an angle into `(-π/2, π/2]`, i.e. the signed difference of two
/// unoriented lines.
pub fn wrap_half_pi(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    if a > PI / 2.0 {
        a - PI
    } else {
        a
    }
}

/// The representative of `angle + k·period` closest to `reference`.
pub fn nearest_representative(angle: f64, reference: f64, period: f64) -> f64 {
    angle + ((reference - angle) / period).round() * period
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_are_in_range() {
        for k in -20..20 {
            let a = k as f64 * 0.77;
            let w = wrap_pi(a);
            assert!(w > -PI && w <= PI);
            assert!(((a - w) / TAU - ((a - w) / TAU).round()).abs() < 1e-12);
            let h = wrap_half_pi(a);
            assert!(h > -PI / 2.0 && h <= PI / 2.0);
        }
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
    }

    #[test]
    fn lerp_hits_endpoints_exactly() {
        let a = Vec2::new(0.1, 0.7);
        let b = Vec2::new(-0.3, 0.2);
        assert_eq!(Vec2::lerp(a, b, 0.0), a);
        assert_eq!(Vec2::lerp(a, b, 1.0), b);
    }

    #[test]
    fn nearest_representative_picks_closest() {
        let r = nearest_representative(0.1, 3.0, PI);
        assert!((r - (0.1 + PI)).abs() < 1e-15);
    }
}
