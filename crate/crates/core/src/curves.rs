//! Parametrized plane curves with period 1, and the named built-ins.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lift::CurveSample;
use crate::vec2::Vec2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("unknown curve `{0}` (expected circle, lemniscate, rose-<odd k>, segment or a CSV path)")]
    Unknown(String),
    #[error("rose-{0}: only odd petal counts give an immersion without self-tangencies")]
    EvenRose(u32),
    #[error("curve file: {0}")]
    File(String),
}

/// A curve `t ↦ γ(t)`; closed curves have period 1.
pub trait PlaneCurve: Send + Sync + fmt::Debug {
    fn point(&self, t: f64) -> Vec2;
    fn velocity(&self, t: f64) -> Vec2;
    fn closed(&self) -> bool {
        true
    }

    fn sample(&self, count: usize) -> Vec<CurveSample> {
        let denom = if self.closed() { count } else { count.max(2) - 1 } as f64;
        (0..count)
            .map(|i| {
                let t = i as f64 / denom;
                CurveSample {
                    point: self.point(t),
                    velocity: self.velocity(t),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Default for Circle {
    fn default() -> Self {
        Self {
            center: Vec2::ZERO,
            radius: 1.0,
        }
    }
}

impl PlaneCurve for Circle {
    fn point(&self, t: f64) -> Vec2 {
        self.center + Vec2::from_angle(TAU * t) * self.radius
    }
    fn velocity(&self, t: f64) -> Vec2 {
        Vec2::from_angle(TAU * t).perp() * (TAU * self.radius)
    }
}

/// Gerono's lemniscate `(cos 2πt, sin 2πt·cos 2πt)`, double point at the
/// origin for `t = ¼, ¾`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemniscate {
    pub scale: f64,
    /// Vertical stretch.
    pub aspect: f64,
    pub rotation: f64,
    pub center: Vec2,
}

impl Default for Lemniscate {
    fn default() -> Self {
        Self {
            scale: 1.0,
            aspect: 1.0,
            rotation: 0.0,
            center: Vec2::ZERO,
        }
    }
}

fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

impl PlaneCurve for Lemniscate {
    fn point(&self, t: f64) -> Vec2 {
        let u = TAU * t;
        let p = Vec2::new(u.cos(), self.aspect * 0.5 * (2.0 * u).sin());
        self.center + rotate(p, self.rotation) * self.scale
    }
    fn velocity(&self, t: f64) -> Vec2 {
        let u = TAU * t;
        let v = Vec2::new(-u.sin(), self.aspect * (2.0 * u).cos()) * TAU;
        rotate(v, self.rotation) * self.scale
    }
}

/// Rose `r = cos(kθ)`, `θ = πt`, for odd `k`: `k` petals and a `k`-fold
/// point at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rose {
    k: u32,
}

impl Rose {
    pub fn new(k: u32) -> Result<Self, CurveError> {
        if k % 2 == 0 {
            return Err(CurveError::EvenRose(k));
        }
        Ok(Self { k })
    }

    pub fn petals(&self) -> u32 {
        self.k
    }
}

impl PlaneCurve for Rose {
    fn point(&self, t: f64) -> Vec2 {
        let th = PI * t;
        Vec2::from_angle(th) * (self.k as f64 * th).cos()
    }
    fn velocity(&self, t: f64) -> Vec2 {
        let th = PI * t;
        let k = self.k as f64;
        let (r, dr) = ((k * th).cos(), -k * (k * th).sin());
        (Vec2::from_angle(th) * dr + Vec2::from_angle(th).perp() * r) * PI
    }
}

/// The open segment from `(−½, 0)` to `(½, 0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Segment;

impl PlaneCurve for Segment {
    fn point(&self, t: f64) -> Vec2 {
        Vec2::new(t - 0.5, 0.0)
    }
    fn velocity(&self, _t: f64) -> Vec2 {
        Vec2::new(1.0, 0.0)
    }
    fn closed(&self) -> bool {
        false
    }
}

/// `x(t) = Σ_k a_k cos 2πkt + b_k sin 2πkt`, likewise `y`, for `k = 1..=d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigCurve {
    pub x_cos: Vec<f64>,
    pub x_sin: Vec<f64>,
    pub y_cos: Vec<f64>,
    pub y_sin: Vec<f64>,
}

impl TrigCurve {
    pub fn degree(&self) -> usize {
        self.x_cos.len()
    }

    /// Coefficients uniform in `[−1/k, 1/k]`.
    pub fn random<R: Rng>(rng: &mut R, degree: usize) -> Self {
        let mut coef = |scale: f64| -> Vec<f64> { (1..=degree).map(|k| rng.gen_range(-1.0..1.0) * scale / k as f64).collect() };
        Self {
            x_cos: coef(1.0),
            x_sin: coef(1.0),
            y_cos: coef(1.0),
            y_sin: coef(1.0),
        }
    }

    /// `self + other`, padding the shorter coefficient list.
    pub fn plus(&self, other: &TrigCurve) -> TrigCurve {
        fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
            (0..a.len().max(b.len()))
                .map(|i| a.get(i).unwrap_or(&0.0) + b.get(i).unwrap_or(&0.0))
                .collect()
        }
        TrigCurve {
            x_cos: add(&self.x_cos, &other.x_cos),
            x_sin: add(&self.x_sin, &other.x_sin),
            y_cos: add(&self.y_cos, &other.y_cos),
            y_sin: add(&self.y_sin, &other.y_sin),
        }
    }

    pub fn scaled(&self, s: f64) -> TrigCurve {
        let m = |v: &[f64]| v.iter().map(|c| c * s).collect();
        TrigCurve {
            x_cos: m(&self.x_cos),
            x_sin: m(&self.x_sin),
            y_cos: m(&self.y_cos),
            y_sin: m(&self.y_sin),
        }
    }
}

impl PlaneCurve for TrigCurve {
    fn point(&self, t: f64) -> Vec2 {
        let mut p = Vec2::ZERO;
        for k in 0..self.degree() {
            let (s, c) = (TAU * (k + 1) as f64 * t).sin_cos();
            p += Vec2::new(self.x_cos[k] * c + self.x_sin[k] * s, self.y_cos[k] * c + self.y_sin[k] * s);
        }
        p
    }
    fn velocity(&self, t: f64) -> Vec2 {
        let mut v = Vec2::ZERO;
        for k in 0..self.degree() {
            let w = TAU * (k + 1) as f64;
            let (s, c) = (w * t).sin_cos();
            v += Vec2::new(-self.x_cos[k] * s + self.x_sin[k] * c, -self.y_cos[k] * s + self.y_sin[k] * c) * w;
        }
        v
    }
}

/// Interpolating periodic cubic spline through uniformly spaced samples.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSpline {
    points: Vec<Vec2>,
    /// Second derivatives at the knots.
    second: Vec<Vec2>,
}

impl PeriodicSpline {
    pub fn new(points: Vec<Vec2>) -> Result<Self, CurveError> {
        let n = points.len();
        if n < 4 {
            return Err(CurveError::File(format!("need at least 4 points, got {n}")));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(CurveError::File("non-finite coordinate".into()));
        }
        let h = 1.0 / n as f64;
        let rhs: Vec<Vec2> = (0..n)
            .map(|i| {
                let (a, b, c) = (points[(i + n - 1) % n], points[i], points[(i + 1) % n]);
                (a + c - b * 2.0) * (6.0 / (h * h))
            })
            .collect();
        // M_{i−1} + 4M_i + M_{i+1} = rhs_i; Gauss–Seidel contracts by ≤ ½
        let mut m = vec![Vec2::ZERO; n];
        for _ in 0..200 {
            let mut change: f64 = 0.0;
            for i in 0..n {
                let next = (rhs[i] - m[(i + n - 1) % n] - m[(i + 1) % n]) * 0.25;
                change = change.max(next.distance(m[i]));
                m[i] = next;
            }
            let scale = m.iter().fold(1.0f64, |s, v| s.max(v.norm()));
            if change <= 1e-15 * scale {
                break;
            }
        }
        Ok(Self { points, second: m })
    }

    fn locate(&self, t: f64) -> (usize, usize, f64) {
        let n = self.points.len();
        let x = t.rem_euclid(1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        (i, (i + 1) % n, x - i as f64)
    }
}

impl PlaneCurve for PeriodicSpline {
    fn point(&self, t: f64) -> Vec2 {
        let (i, j, u) = self.locate(t);
        let h = 1.0 / self.points.len() as f64;
        let w = 1.0 - u;
        self.points[i] * w
            + self.points[j] * u
            + (self.second[i] * (w * w * w - w) + self.second[j] * (u * u * u - u)) * (h * h / 6.0)
    }
    fn velocity(&self, t: f64) -> Vec2 {
        let (i, j, u) = self.locate(t);
        let h = 1.0 / self.points.len() as f64;
        let w = 1.0 - u;
        (self.points[j] - self.points[i]) * (1.0 / h)
            + (self.second[j] * (3.0 * u * u - 1.0) - self.second[i] * (3.0 * w * w - 1.0)) * (h / 6.0)
    }
}

/// Reads `t,x,y` rows (optional header) with `t` uniform on `[0, 1)`.
pub fn read_csv_curve(path: &Path) -> Result<PeriodicSpline, CurveError> {
    let text = std::fs::read_to_string(path).map_err(|e| CurveError::File(format!("{}: {e}", path.display())))?;
    parse_csv_curve(&text)
}

pub fn parse_csv_curve(text: &str) -> Result<PeriodicSpline, CurveError> {
    let mut ts = Vec::new();
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 3 => {
                ts.push(v[0]);
                points.push(Vec2::new(v[1], v[2]));
            }
            Err(_) if ts.is_empty() && lineno == 0 => continue,
            _ => {
                return Err(CurveError::File(format!("line {}: expected `t,x,y`", lineno + 1)));
            }
        }
    }
    let n = ts.len();
    for (i, &t) in ts.iter().enumerate() {
        let expected = i as f64 / n as f64;
        if (t - expected).abs() > 1e-6 {
            return Err(CurveError::File(format!("t values must be uniform on [0, 1); row {i} has t = {t}")));
        }
    }
    PeriodicSpline::new(points)
}

/// A curve given by closures, for synthetic families.
#[derive(Clone)]
pub struct FnCurve {
    name: String,
    point: Arc<dyn Fn(f64) -> Vec2 + Send + Sync>,
    velocity: Arc<dyn Fn(f64) -> Vec2 + Send + Sync>,
}

impl FnCurve {
    pub fn new(
        name: impl Into<String>,
        point: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        velocity: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            point: Arc::new(point),
            velocity: Arc::new(velocity),
        }
    }
}

impl fmt::Debug for FnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCurve").field("name", &self.name).finish()
    }
}

impl PlaneCurve for FnCurve {
    fn point(&self, t: f64) -> Vec2 {
        (self.point)(t)
    }
    fn velocity(&self, t: f64) -> Vec2 {
        (self.velocity)(t)
    }
}

/// Resolves a built-in name or a CSV path.
pub fn named_curve(spec: &str) -> Result<Arc<dyn PlaneCurve>, CurveError> {
    match spec {
        "circle" => return Ok(Arc::new(Circle::default())),
        "lemniscate" | "figure-eight" => return Ok(Arc::new(Lemniscate::default())),
        "segment" => return Ok(Arc::new(Segment)),
        _ => {}
    }
    if let Some(k) = spec.strip_prefix("rose-") {
        let k: u32 = k.parse().map_err(|_| CurveError::Unknown(spec.to_string()))?;
        return Ok(Arc::new(Rose::new(k)?));
    }
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return Ok(Arc::new(read_csv_curve(path)?));
    }
    Err(CurveError::Unknown(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_velocity(c: &dyn PlaneCurve) {
        for i in 0..50 {
            let t = 0.013 + i as f64 / 50.0;
            let h = 1e-6;
            let fd = (c.point(t + h) - c.point(t - h)) * (0.5 / h);
            let v = c.velocity(t);
            assert!(fd.distance(v) < 1e-5 * (1.0 + v.norm()), "{c:?} at {t}");
        }
    }

    #[test]
    fn analytic_velocities_match_differences() {
        check_velocity(&Circle::default());
        check_velocity(&Lemniscate {
            scale: 0.7,
            aspect: 1.3,
            rotation: 0.4,
            center: Vec2::new(0.1, 0.2),
        });
        check_velocity(&Rose::new(3).unwrap());
        check_velocity(&Rose::new(5).unwrap());
        check_velocity(&TrigCurve::random(&mut ChaCha8Rng::seed_from_u64(3), 3));
    }

    #[test]
    fn lemniscate_double_point() {
        let l = Lemniscate::default();
        assert!(l.point(0.25).norm() < 1e-15);
        assert!(l.point(0.75).norm() < 1e-15);
    }

    #[test]
    fn rose_is_periodic_and_even_rejected() {
        let r = Rose::new(3).unwrap();
        assert!(r.point(0.0).distance(r.point(1.0)) < 1e-15);
        assert!(r.velocity(0.0).distance(r.velocity(1.0)) < 1e-12);
        assert_eq!(Rose::new(4), Err(CurveError::EvenRose(4)));
    }

    #[test]
    fn spline_interpolates_and_is_smooth() {
        let n = 64;
        let pts: Vec<Vec2> = (0..n).map(|i| Circle::default().point(i as f64 / n as f64)).collect();
        let s = PeriodicSpline::new(pts.clone()).unwrap();
        for (i, p) in pts.iter().enumerate() {
            assert!(s.point(i as f64 / n as f64).distance(*p) < 1e-14);
        }
        for i in 0..200 {
            let t = i as f64 / 200.0 + 0.001;
            assert!((s.point(t).norm() - 1.0).abs() < 1e-6);
            assert!(s.velocity(t).distance(Circle::default().velocity(t)) < 1e-3);
        }
        check_velocity(&s);
    }

    #[test]
    fn csv_parsing() {
        let mut text = String::from("t,x,y\n");
        for i in 0..8 {
            let t = i as f64 / 8.0;
            let p = Circle::default().point(t);
            text.push_str(&format!("{t},{},{}\n", p.x, p.y));
        }
        assert!(parse_csv_curve(&text).is_ok());
        assert!(parse_csv_curve("0,0,0\n0.5,1,1\n0.7,1,0\n0.9,0,1\n").is_err());
        assert!(parse_csv_curve("0,0\n").is_err());
    }

    #[test]
    fn names_resolve() {
        assert!(named_curve("circle").is_ok());
        assert!(named_curve("rose-3").is_ok());
        assert!(!named_curve("segment").unwrap().closed());
        assert!(matches!(named_curve("rose-4"), Err(CurveError::EvenRose(4))));
        assert!(matches!(named_curve("blob"), Err(CurveError::Unknown(_))));
    }
}
