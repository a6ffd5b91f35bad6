//! Knots in `PΩN` given by a closed plane curve and a line field along it,
//! and the crossing invariants `W_g`.
//!
//! A crossing is a double point `γ(l) = γ(l′)` of the base curve. Its sign
//! compares the orientation of the lifted unit vectors `(β̂(l), β̂(l′))` with
//! that of the velocities `(γ′(l), γ′(l′))`. Its type is read off the loop
//! that runs along the knot from `l` to `l′` and returns through the shorter
//! arc of the unit-vector fiber: over the disk that loop's class is the
//! integer `|Δφ|/π` of its line angle.

mod crossings;
pub mod corpus;
pub mod moves;
pub mod pl;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::PlaneCurve;
use crate::lift::{line_class, LiftError, ProjCurve, ProjPoint};
use crate::vec2::{nearest_representative, wrap_half_pi, wrap_pi, Vec2};

pub use crossings::{find_double_points, CrossingOptions, DoublePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KnotError {
    #[error("curve is not closed")]
    OpenCurve,
    #[error("self-tangency at ({l}, {l_prime}): |sin angle| = {sin_angle:e}")]
    SelfTangency { l: f64, l_prime: f64, sin_angle: f64 },
    #[error("knot is not embedded: lines agree at the double point ({l}, {l_prime})")]
    NotEmbedded { l: f64, l_prime: f64 },
    #[error("smoothed loop turns by {value} half-turns, not within 0.05 of an integer")]
    NonIntegralType { value: f64 },
    #[error("lift is not contractible (line-winding {line_winding})")]
    NonContractible { line_winding: i64 },
    #[error("line field does not close up: total rotation {turns} half-turns")]
    OpenLineField { turns: f64 },
    #[error("no certificate of nontriviality found")]
    NoCertificate,
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("{0}")]
    Pl(String),
}

type LiftFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum LineField {
    /// Unwrapped tangent angles at `i/m`, used to pick the branch of
    /// `atan2 γ′(t)`.
    Tangent { table: Vec<f64> },
    Custom(LiftFn),
}

/// A closed curve `t ↦ (γ(t), [φ(t)])` in `PΩN` over a closed plane curve.
#[derive(Clone)]
pub struct FramedCurve {
    curve: Arc<dyn PlaneCurve>,
    field: LineField,
    /// `φ(1) − φ(0)`.
    total: f64,
}

impl fmt::Debug for FramedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FramedCurve")
            .field("curve", &self.curve)
            .field("tangent", &matches!(self.field, LineField::Tangent { .. }))
            .field("total", &self.total)
            .finish()
    }
}

const MAX_TABLE: usize = 1 << 20;

impl FramedCurve {
    /// The projectivized unit tangent lift `P∘γ̃`.
    pub fn tangent(curve: Arc<dyn PlaneCurve>) -> Result<Self, KnotError> {
        if !curve.closed() {
            return Err(KnotError::OpenCurve);
        }
        let mut m = 4096;
        'refine: loop {
            let mut table = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let v = curve.velocity(i as f64 / m as f64);
                if v.normalized().is_none() {
                    return Err(LiftError::ZeroSpeed { index: i }.into());
                }
                let raw = v.angle();
                let theta = match table.last() {
                    None => raw,
                    Some(&prev) => {
                        let jump = wrap_pi(raw - prev);
                        if jump.abs() > PI / 8.0 {
                            if m >= MAX_TABLE {
                                return Err(LiftError::Discontinuous { index: i - 1, jump }.into());
                            }
                            m *= 2;
                            continue 'refine;
                        }
                        prev + jump
                    }
                };
                table.push(theta);
            }
            let total = table[m] - table[0];
            let turns = total / TAU;
            if (turns - turns.round()).abs() > 1e-9 {
                return Err(LiftError::NonIntegralTurning { turns }.into());
            }
            return Ok(Self {
                curve,
                field: LineField::Tangent { table },
                total: TAU * turns.round(),
            });
        }
    }

    /// A knot with the given line lift `φ` on `[0, 1]`; `φ(1) − φ(0)` must be
    /// a multiple of `π`.
    pub fn with_line_field(
        curve: Arc<dyn PlaneCurve>,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, KnotError> {
        if !curve.closed() {
            return Err(KnotError::OpenCurve);
        }
        let total = phi(1.0) - phi(0.0);
        let turns = total / PI;
        if (turns - turns.round()).abs() > 1e-9 {
            return Err(KnotError::OpenLineField { turns });
        }
        Ok(Self {
            curve,
            field: LineField::Custom(Arc::new(phi)),
            total: PI * turns.round(),
        })
    }

    pub fn curve(&self) -> &Arc<dyn PlaneCurve> {
        &self.curve
    }

    pub fn is_tangent_lift(&self) -> bool {
        matches!(self.field, LineField::Tangent { .. })
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.curve.point(t)
    }

    pub fn velocity(&self, t: f64) -> Vec2 {
        self.curve.velocity(t)
    }

    /// Continuous line lift, with `φ(t + 1) = φ(t) + π·line_winding`.
    pub fn line_lift(&self, t: f64) -> f64 {
        let k = t.floor();
        let s = t - k;
        let base = match &self.field {
            LineField::Tangent { table } => {
                let m = table.len() - 1;
                let x = s * m as f64;
                let i = (x.floor() as usize).min(m - 1);
                let reference = table[i] + (x - i as f64) * (table[i + 1] - table[i]);
                nearest_representative(self.curve.velocity(s).angle(), reference, TAU)
            }
            LineField::Custom(f) => f(s),
        };
        base + k * self.total
    }

    /// The vector `β̂(t) = (cos φ, sin φ)` of the continuous lift.
    pub fn hat(&self, t: f64) -> Vec2 {
        Vec2::from_angle(self.line_lift(t))
    }

    pub fn line_winding(&self) -> i64 {
        (self.total / PI).round() as i64
    }

    /// Turning number of the base curve.
    pub fn theta_winding(&self) -> Option<i64> {
        match self.field {
            LineField::Tangent { .. } => Some((self.total / TAU).round() as i64),
            LineField::Custom(_) => None,
        }
    }

    pub fn proj_point(&self, t: f64) -> ProjPoint {
        ProjPoint::new(self.point(t), self.line_lift(t))
    }

    /// `count` samples of the knot over `[0, 1)`.
    pub fn sample(&self, count: usize) -> ProjCurve {
        ProjCurve {
            points: (0..count).map(|i| self.proj_point(i as f64 / count as f64)).collect(),
            closed: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub l: f64,
    #[serde(rename = "l'")]
    pub l_prime: f64,
    pub point: Vec2,
    pub sign: i8,
    #[serde(rename = "type")]
    pub ctype: u32,
}

/// `sgn det(β̂(l), β̂(l′)) · sgn det(γ′(l), γ′(l′))`.
pub fn crossing_sign(knot: &FramedCurve, l: f64, l_prime: f64) -> Result<i8, KnotError> {
    let lines = knot.hat(l).cross(knot.hat(l_prime));
    if lines.abs() < 1e-12 {
        return Err(KnotError::NotEmbedded { l, l_prime });
    }
    let (va, vb) = (knot.velocity(l), knot.velocity(l_prime));
    let vel = va.cross(vb);
    if vel.abs() < 1e-12 * va.norm() * vb.norm() {
        return Err(KnotError::SelfTangency {
            l,
            l_prime,
            sin_angle: (vel / (va.norm() * vb.norm())).abs(),
        });
    }
    Ok((lines.signum() * vel.signum()) as i8)
}

const FIBER_STEPS: usize = 64;

/// Class of a closed loop of line angles sampled finely enough that
/// consecutive samples are less than `π/2` apart: `|Σ Δφ| / π`, with the
/// closing step included.
pub fn loop_type(line_angles: &[f64]) -> Result<u32, KnotError> {
    let n = line_angles.len();
    if n == 0 {
        return Ok(0);
    }
    let mut total = 0.0;
    for i in 0..n {
        total += wrap_half_pi(line_angles[(i + 1) % n] - line_angles[i]);
    }
    let value = total.abs() / PI;
    if (value - value.round()).abs() > 0.05 {
        return Err(KnotError::NonIntegralType { value });
    }
    Ok(value.round() as u32)
}

fn arc_samples(knot: &FramedCurve, from: f64, to: f64) -> Vec<f64> {
    let count = (((to - from) * 8192.0).ceil() as usize).max(64);
    (0..=count)
        .map(|i| line_class(knot.line_lift(from + (to - from) * i as f64 / count as f64)))
        .collect()
}

fn fiber_samples(from: f64, delta: f64) -> impl Iterator<Item = f64> {
    (1..FIBER_STEPS).map(move |i| line_class(from + delta * i as f64 / FIBER_STEPS as f64))
}

/// Types of the two smoothings at `(l, l′)`: the arc `l → l′` closed by the
/// reversed fiber arc, and the fiber arc followed by the arc `l′ → l + 1`.
pub fn smoothing_types(knot: &FramedCurve, l: f64, l_prime: f64) -> Result<(u32, u32), KnotError> {
    let (l, l_prime) = if l <= l_prime { (l, l_prime) } else { (l_prime, l) };
    let (a, b) = (knot.line_lift(l), knot.line_lift(l_prime));
    // shortest arc between the unit vectors β̂(l) and β̂(l′)
    let d = wrap_pi(b - a);
    if d.abs() < 1e-12 || (PI - d.abs()) < 1e-12 {
        return Err(KnotError::NotEmbedded { l, l_prime });
    }

    let mut first = arc_samples(knot, l, l_prime);
    first.pop();
    first.extend(fiber_samples(b, -d));

    let mut second: Vec<f64> = vec![line_class(a)];
    second.extend(fiber_samples(a, d));
    let mut tail = arc_samples(knot, l_prime, l + 1.0);
    tail.pop();
    second.extend(tail);

    Ok((loop_type(&first)?, loop_type(&second)?))
}

pub fn crossing_type(knot: &FramedCurve, l: f64, l_prime: f64) -> Result<u32, KnotError> {
    smoothing_types(knot, l, l_prime).map(|(g, _)| g)
}

/// All crossings with signs and types filled in.
pub fn crossings(knot: &FramedCurve, opts: &CrossingOptions) -> Result<Vec<Crossing>, KnotError> {
    find_double_points(knot.curve().as_ref(), opts)?
        .into_iter()
        .map(|d| {
            Ok(Crossing {
                l: d.l,
                l_prime: d.l_prime,
                point: d.point,
                sign: crossing_sign(knot, d.l, d.l_prime)?,
                ctype: crossing_type(knot, d.l, d.l_prime)?,
            })
        })
        .collect()
}

/// `g ↦ W_g` over nontrivial types; zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantTable(pub BTreeMap<u32, i64>);

impl InvariantTable {
    pub fn from_crossings(crossings: &[Crossing]) -> Self {
        let mut map = BTreeMap::new();
        for c in crossings.iter().filter(|c| c.ctype != 0) {
            *map.entry(c.ctype).or_insert(0) += i64::from(c.sign);
        }
        map.retain(|_, w| *w != 0);
        Self(map)
    }

    pub fn get(&self, g: u32) -> i64 {
        self.0.get(&g).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `W_g` for a contractible knot.
pub fn w_invariant(knot: &FramedCurve, opts: &CrossingOptions) -> Result<InvariantTable, KnotError> {
    let line_winding = knot.line_winding();
    if line_winding != 0 {
        return Err(KnotError::NonContractible { line_winding });
    }
    Ok(InvariantTable::from_crossings(&crossings(knot, opts)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    NonContractible { line_winding: i64 },
    NonzeroInvariant { g: u32, w: i64 },
}

fn certificate_from(knot: &FramedCurve, crossings: &[Crossing]) -> Result<Certificate, KnotError> {
    let line_winding = knot.line_winding();
    if line_winding != 0 {
        return Ok(Certificate::NonContractible { line_winding });
    }
    let table = InvariantTable::from_crossings(crossings);
    // first return: the earliest parameter at which the curve meets its past
    let first = crossings.iter().min_by(|a, b| a.l_prime.total_cmp(&b.l_prime));
    if let Some(c) = first {
        let w = table.get(c.ctype);
        if c.ctype != 0 && w != 0 {
            return Ok(Certificate::NonzeroInvariant { g: c.ctype, w });
        }
    }
    table
        .0
        .iter()
        .next()
        .map(|(&g, &w)| Certificate::NonzeroInvariant { g, w })
        .ok_or(KnotError::NoCertificate)
}

pub fn certify_nontrivial(knot: &FramedCurve, opts: &CrossingOptions) -> Result<Certificate, KnotError> {
    certificate_from(knot, &crossings(knot, opts)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotReport {
    pub theta_winding: Option<i64>,
    pub line_winding: i64,
    pub crossings: Vec<Crossing>,
    /// `W_g` proper only when `contractible`; otherwise the same signed
    /// counts, which are not isotopy invariants.
    pub contractible: bool,
    #[serde(rename = "W")]
    pub table: InvariantTable,
    pub certificate: Option<Certificate>,
}

/// Crossings, invariant table and certificate in one pass.
pub fn analyze(knot: &FramedCurve, opts: &CrossingOptions) -> Result<KnotReport, KnotError> {
    let crossings = crossings(knot, opts)?;
    let line_winding = knot.line_winding();
    let table = InvariantTable::from_crossings(&crossings);
    let certificate = match certificate_from(knot, &crossings) {
        Ok(c) => Some(c),
        Err(KnotError::NoCertificate) => None,
        Err(e) => return Err(e),
    };
    Ok(KnotReport {
        theta_winding: knot.theta_winding(),
        line_winding,
        contractible: line_winding == 0,
        crossings,
        table,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Circle, Lemniscate, Rose};

    fn lemniscate() -> FramedCurve {
        FramedCurve::tangent(Arc::new(Lemniscate::default())).unwrap()
    }

    #[test]
    fn tangent_lift_matches_velocity_angle() {
        let k = lemniscate();
        for i in 0..100 {
            let t = i as f64 / 100.0 + 0.003;
            let v = k.velocity(t).normalized().unwrap();
            assert!(k.hat(t).distance(v) < 1e-12);
        }
        assert!((k.line_lift(1.25) - k.line_lift(0.25)).abs() < 1e-12);
        let c = FramedCurve::tangent(Arc::new(Circle::default())).unwrap();
        assert!((c.line_lift(1.1) - c.line_lift(0.1) - TAU).abs() < 1e-12);
    }

    #[test]
    fn circle_is_non_contractible() {
        let k = FramedCurve::tangent(Arc::new(Circle::default())).unwrap();
        let r = analyze(&k, &Default::default()).unwrap();
        assert_eq!(r.line_winding, 2);
        assert_eq!(r.theta_winding, Some(1));
        assert!(r.crossings.is_empty());
        assert!(!r.contractible && r.table.is_empty());
        assert_eq!(r.certificate, Some(Certificate::NonContractible { line_winding: 2 }));
        assert!(matches!(
            w_invariant(&k, &Default::default()),
            Err(KnotError::NonContractible { line_winding: 2 })
        ));
    }

    #[test]
    fn lemniscate_invariant() {
        let k = lemniscate();
        let r = analyze(&k, &Default::default()).unwrap();
        assert_eq!(r.theta_winding, Some(0));
        assert_eq!(r.crossings.len(), 1);
        let c = r.crossings[0];
        assert_eq!((c.sign, c.ctype), (1, 2));
        assert_eq!(r.table.0, BTreeMap::from([(2, 1)]));
        assert_eq!(r.certificate, Some(Certificate::NonzeroInvariant { g: 2, w: 1 }));
        // independent oracle: the arc from ¼ to ¾ turns the tangent by
        // −3π/2 (velocity (−1,−1)/√2 → (1,−1)/√2 clockwise through −x)
        let a = k.line_lift(0.75) - k.line_lift(0.25);
        assert!((a + 1.5 * PI).abs() < 1e-9);
    }

    #[test]
    fn lemniscate_reversed_has_same_table() {
        let rev = crate::curves::FnCurve::new(
            "reversed lemniscate",
            |t| Lemniscate::default().point(1.0 - t),
            |t| -Lemniscate::default().velocity(1.0 - t),
        );
        let k = FramedCurve::tangent(Arc::new(rev)).unwrap();
        let t = w_invariant(&k, &Default::default()).unwrap();
        assert_eq!(t.0, BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn signs_flip_with_the_frame() {
        let k = lemniscate();
        assert_eq!(crossing_sign(&k, 0.25, 0.75).unwrap(), 1);
        assert_eq!(crossing_sign(&k, 0.75, 0.25).unwrap(), 1);
        // velocities at the crossing point at −3π/4 and −π/4; a frame at
        // +π/4 and −π/4 has the opposite orientation
        let base = Arc::new(Lemniscate::default());
        let swapped = FramedCurve::with_line_field(base, |t| PI / 4.0 * (TAU * t).sin()).unwrap();
        assert_eq!(crossing_sign(&swapped, 0.25, 0.75).unwrap(), -1);
    }

    #[test]
    fn both_smoothings_agree() {
        let k = lemniscate();
        assert_eq!(smoothing_types(&k, 0.25, 0.75).unwrap(), (2, 2));
        assert_eq!(smoothing_types(&k, 0.75, 0.25).unwrap(), (2, 2));
    }

    #[test]
    fn fiber_only_loop_is_trivial() {
        let loop_: Vec<f64> = (0..=20)
            .map(|i| 0.8 * PI * i as f64 / 20.0)
            .chain((1..20).rev().map(|i| 0.8 * PI * i as f64 / 20.0))
            .map(line_class)
            .collect();
        assert_eq!(loop_type(&loop_).unwrap(), 0);
        let generator: Vec<f64> = (0..32).map(|i| line_class(PI * i as f64 / 32.0)).collect();
        assert_eq!(loop_type(&generator).unwrap(), 1);
    }

    #[test]
    fn rose_three_certified() {
        let k = FramedCurve::tangent(Arc::new(Rose::new(3).unwrap())).unwrap();
        let r = analyze(&k, &Default::default()).unwrap();
        assert_eq!(r.crossings.len(), 3);
        assert!(r.crossings.iter().all(|c| c.sign == 1));
        assert_eq!(r.theta_winding, Some(2));
        assert!(r.certificate.is_some());
    }

    #[test]
    fn report_json_shape() {
        let r = analyze(&lemniscate(), &Default::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["W"]["2"], 1);
        assert_eq!(v["crossings"][0]["type"], 2);
        assert!(v["crossings"][0]["l'"].is_number());
        assert_eq!(v["certificate"]["kind"], "nonzero_invariant");
    }
}
