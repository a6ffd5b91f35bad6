//! Piecewise linear knots in `PΩN` over the flat disk: membership in
//! `K(n, ε)`, the singularity taxonomy of PL projections, and the
//! interpolation operator that deforms a sampled isotopy into PL knots.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curves::{Circle, Lemniscate, PlaneCurve};
use crate::lift::{fiber_delta, minimal_linear_curve, ProjPoint, FLAT_DISK_INJ};
use crate::vec2::Vec2;

use super::KnotError;

/// `max(d_h, d_v)` without the injectivity check, for separation estimates.
pub fn raw_d0(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let d_v = fiber_delta(p, q).abs().min(fiber_delta(q, p).abs());
    p.base.distance(q.base).max(d_v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlViolation {
    /// 1: not contractible, 2: adjacent vertices too far apart, 3: no
    /// minimal linear edge (or an interior sample off the edge).
    pub condition: u8,
    pub edge: Option<usize>,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlReport {
    pub member: bool,
    pub violation: Option<PlViolation>,
}

impl PlReport {
    fn fail(condition: u8, edge: Option<usize>, value: f64) -> Self {
        Self {
            member: false,
            violation: Some(PlViolation { condition, edge, value }),
        }
    }
}

fn check_preconditions(n: usize, eps: f64) -> Result<(), KnotError> {
    if n < 4 {
        return Err(KnotError::Pl(format!("n = {n} < 4")));
    }
    let bound = FLAT_DISK_INJ.min(FRAC_PI_2);
    if !(eps > 0.0 && eps < bound) {
        return Err(KnotError::Pl(format!("eps = {eps} outside (0, {bound})")));
    }
    Ok(())
}

/// Membership of the closed PL knot with the given `n` vertices in
/// `K(n, eps)`; reports the first violated condition.
pub fn pl_validate(vertices: &[ProjPoint], n: usize, eps: f64) -> Result<PlReport, KnotError> {
    check_preconditions(n, eps)?;
    if vertices.len() != n {
        return Err(KnotError::Pl(format!("{} vertices, expected {n}", vertices.len())));
    }
    let edges = || (0..n).map(|k| (k, &vertices[k], &vertices[(k + 1) % n]));
    for (k, p, q) in edges() {
        let d0 = raw_d0(p, q);
        if d0 >= eps {
            return Ok(PlReport::fail(2, Some(k), d0));
        }
    }
    for (k, p, q) in edges() {
        if minimal_linear_curve(p, q).is_err() {
            return Ok(PlReport::fail(3, Some(k), raw_d0(p, q)));
        }
    }
    // every edge turns through the shorter fiber arc, so the closed knot is
    // contractible iff these rotations cancel
    let total: f64 = edges().map(|(_, p, q)| fiber_delta(p, q)).sum();
    let turns = total / PI;
    if turns.round() != 0.0 || (turns - turns.round()).abs() > 1e-6 {
        return Ok(PlReport::fail(1, None, turns));
    }
    Ok(PlReport {
        member: true,
        violation: None,
    })
}

/// As [`pl_validate`] for a densely sampled closed curve with `m` samples
/// per edge; interior samples must lie on the minimal linear edge within
/// `tol` in `d0`.
pub fn pl_validate_sampled(samples: &[ProjPoint], n: usize, eps: f64, tol: f64) -> Result<PlReport, KnotError> {
    check_preconditions(n, eps)?;
    if samples.is_empty() || samples.len() % n != 0 {
        return Err(KnotError::Pl(format!("{} samples is not a multiple of n = {n}", samples.len())));
    }
    let m = samples.len() / n;
    let vertices: Vec<ProjPoint> = samples.iter().step_by(m).copied().collect();
    let report = pl_validate(&vertices, n, eps)?;
    if !report.member {
        return Ok(report);
    }
    for k in 0..n {
        let edge = minimal_linear_curve(&vertices[k], &vertices[(k + 1) % n]).map_err(|e| KnotError::Pl(e.to_string()))?;
        for j in 1..m {
            let off = raw_d0(&samples[k * m + j], &edge.eval(j as f64 / m as f64));
            if off > tol {
                return Ok(PlReport::fail(3, Some(k), off));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    Cusp,
    SelfTangency,
    Transverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub kind: SingularityKind,
    pub vertex: usize,
    pub edge: usize,
}

/// Classifies a closed PL projection whose vertex `i` lies on edge `j`
/// (from `P_j` to `P_{j+1}`).
pub fn singularity_classify(bases: &[Vec2], i: usize, j: usize, tol: f64) -> Result<SingularityReport, KnotError> {
    let n = bases.len();
    if n < 3 || i >= n || j >= n {
        return Err(KnotError::Pl(format!("vertex {i} or edge {j} out of range for {n} vertices")));
    }
    let prev = (i + n - 1) % n;
    if j == i || j == prev {
        return Err(KnotError::Pl(format!("edge {j} is incident to vertex {i}")));
    }
    let (a, b) = (bases[j], bases[(j + 1) % n]);
    let dir = b - a;
    let len = dir.norm();
    if len == 0.0 {
        return Err(KnotError::Pl(format!("edge {j} is degenerate")));
    }
    let p = bases[i];
    let along = (p - a).dot(dir) / (len * len);
    let off = (p - a).cross(dir).abs() / len;
    if off > tol || along < -tol / len || along > 1.0 + tol / len {
        return Err(KnotError::Pl(format!("vertex {i} is {off:e} from edge {j}")));
    }
    let unit = dir * (1.0 / len);
    let (before, after) = (bases[prev], bases[(i + 1) % n]);
    const ANGULAR_TOL: f64 = 1e-6;
    let parallel = |v: Vec2| v.normalized().is_some_and(|v| v.cross(unit).abs() < ANGULAR_TOL);
    let kind = if parallel(p - before) || parallel(after - p) {
        SingularityKind::Cusp
    } else {
        let (sa, sb) = (unit.cross(before - a), unit.cross(after - a));
        if sa * sb > 0.0 {
            SingularityKind::SelfTangency
        } else {
            SingularityKind::Transverse
        }
    };
    Ok(SingularityReport { kind, vertex: i, edge: j })
}

/// A homotopy `G: [0, 1] × S¹ → PΩN`; `eval(s, ·)` has period 1.
pub trait Isotopy: Send + Sync {
    fn eval(&self, s: f64, t: f64) -> ProjPoint;
}

impl<F: Fn(f64, f64) -> ProjPoint + Send + Sync> Isotopy for F {
    fn eval(&self, s: f64, t: f64) -> ProjPoint {
        self(s, t)
    }
}

/// The operator `H(l, s, ·)`: on the part of each of the `n` cells
/// `[k/n, (k+1)/n)` below `l` the knot is replaced by the minimal linear
/// curve from `G(s, k/n)` to `G(s, (k+l)/n)`. `H(0) = G`, and `H(1, s, ·)`
/// is the PL knot through the samples `G(s, k/n)`.
pub fn pl_refine(g: &dyn Isotopy, n: usize, eps: f64, l: f64, s: f64, t: f64) -> Result<ProjPoint, KnotError> {
    if n == 0 || !(0.0..=1.0).contains(&l) {
        return Err(KnotError::Pl(format!("invalid stage l = {l} or n = {n}")));
    }
    let x = t.rem_euclid(1.0) * n as f64;
    let k = x.floor();
    let tau = x - k;
    if tau >= l {
        return Ok(g.eval(s, t));
    }
    let nf = n as f64;
    let p = g.eval(s, k / nf);
    let q = g.eval(s, (k + l) / nf);
    let d0 = raw_d0(&p, &q);
    if d0 >= eps {
        return Err(KnotError::Pl(format!("adjacent samples {d0:.3e} apart exceed eps = {eps}; increase n")));
    }
    let edge = minimal_linear_curve(&p, &q).map_err(|e| KnotError::Pl(e.to_string()))?;
    Ok(edge.eval(tau / l))
}

/// Minimum `d0` between samples whose cyclic parameter distance exceeds
/// `window`; positive means embedded at sampling resolution.
pub fn embedding_separation(samples: &[ProjPoint], window: f64) -> f64 {
    let n = samples.len();
    let gap = (window * n as f64).ceil() as usize;
    let excluded = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d.min(n - d) <= gap
    };
    // sweep in x order: d0 ≥ |Δx| bounds the rest of the scan
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| samples[a].base.x.total_cmp(&samples[b].base.x).then(a.cmp(&b)));
    let mut best = f64::INFINITY;
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            if samples[j].base.x - samples[i].base.x >= best {
                break;
            }
            if !excluded(i, j) {
                best = best.min(raw_d0(&samples[i], &samples[j]));
            }
        }
    }
    best
}

/// Samples `t = k/m` of `G(s, ·)`.
pub fn sample_isotopy(g: &dyn Isotopy, s: f64, m: usize) -> Vec<ProjPoint> {
    (0..m).map(|k| g.eval(s, k as f64 / m as f64)).collect()
}

/// Resolution used to estimate the separation of each `G(s, ·)`.
pub const SEPARATION_SAMPLES: usize = 1024;
pub const SEPARATION_WINDOW: f64 = 0.05;
const MAX_N: usize = 1 << 16;

/// Smallest `n = 4·2^j` whose adjacent `d0` gaps stay below `eps/4` and half
/// the observed separation at every `s` in `stages_s`.
pub fn choose_n(g: &dyn Isotopy, eps: f64, stages_s: &[f64]) -> Result<usize, KnotError> {
    let seps: Vec<f64> = stages_s
        .iter()
        .map(|&s| embedding_separation(&sample_isotopy(g, s, SEPARATION_SAMPLES), SEPARATION_WINDOW))
        .collect();
    if let Some(&sep) = seps.iter().find(|&&d| !(d > 0.0)) {
        return Err(KnotError::Pl(format!("isotopy is not embedded (separation {sep:e})")));
    }
    let mut n = 4;
    while n <= MAX_N {
        let ok = stages_s.iter().zip(&seps).all(|(&s, &sep)| {
            let v = sample_isotopy(g, s, n);
            let bound = (eps / 4.0).min(sep / 2.0);
            (0..n).all(|k| raw_d0(&v[k], &v[(k + 1) % n]) < bound)
        });
        if ok {
            return Ok(n);
        }
        n *= 2;
    }
    Err(KnotError::Pl(format!("no n ≤ {MAX_N} meets the gap bound")))
}

/// Linear map `R(rotation)·diag(scale_x, scale_y)` followed by `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub scale_x: f64,
    pub scale_y: f64,
    pub rotation: f64,
    pub offset: Vec2,
}

impl Default for Affine {
    fn default() -> Self {
        Self {
            scale_x: 1.0,
            scale_y: 1.0,
            rotation: 0.0,
            offset: Vec2::ZERO,
        }
    }
}

impl Affine {
    pub fn lerp(a: &Affine, b: &Affine, s: f64) -> Affine {
        let mix = |x: f64, y: f64| x + s * (y - x);
        Affine {
            scale_x: mix(a.scale_x, b.scale_x),
            scale_y: mix(a.scale_y, b.scale_y),
            rotation: mix(a.rotation, b.rotation),
            offset: Vec2::lerp(a.offset, b.offset, s),
        }
    }

    pub fn linear(&self, v: Vec2) -> Vec2 {
        let (sn, cs) = self.rotation.sin_cos();
        let w = Vec2::new(v.x * self.scale_x, v.y * self.scale_y);
        Vec2::new(cs * w.x - sn * w.y, sn * w.x + cs * w.y)
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.offset + self.linear(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IsotopyLines {
    /// Tangent lines of the transformed curve.
    Tangent,
    /// A fixed line at this angle, carried by the linear map.
    Constant(f64),
}

/// A closed curve moved by affine maps interpolated from `start` to `end`.
#[derive(Clone, Debug)]
pub struct AffineIsotopy {
    pub name: String,
    pub curve: Arc<dyn PlaneCurve>,
    pub start: Affine,
    pub end: Affine,
    pub lines: IsotopyLines,
}

impl Isotopy for AffineIsotopy {
    fn eval(&self, s: f64, t: f64) -> ProjPoint {
        let a = Affine::lerp(&self.start, &self.end, s);
        let dir = match self.lines {
            IsotopyLines::Tangent => self.curve.velocity(t),
            IsotopyLines::Constant(angle) => Vec2::from_angle(angle),
        };
        ProjPoint::new(a.apply(self.curve.point(t)), a.linear(dir).angle())
    }
}

/// Ten embedded contractible isotopies over the unit disk: tangent lifts
/// of moving lemniscates and small loops carrying a fixed line.
pub fn test_isotopies() -> Vec<AffineIsotopy> {
    let lem: Arc<dyn PlaneCurve> = Arc::new(Lemniscate::default());
    let circle: Arc<dyn PlaneCurve> = Arc::new(Circle::default());
    let aff = |sx: f64, sy: f64, rot: f64, x: f64, y: f64| Affine {
        scale_x: sx,
        scale_y: sy,
        rotation: rot,
        offset: Vec2::new(x, y),
    };
    let mk = |name: &str, curve: &Arc<dyn PlaneCurve>, start, end, lines| AffineIsotopy {
        name: name.to_string(),
        curve: curve.clone(),
        start,
        end,
        lines,
    };
    use IsotopyLines::{Constant, Tangent};
    vec![
        mk("lemniscate-grow", &lem, aff(0.5, 0.5, 0.0, 0.0, 0.0), aff(0.8, 0.8, 0.0, 0.0, 0.0), Tangent),
        mk("lemniscate-turn", &lem, aff(0.7, 0.7, 0.0, 0.0, 0.0), aff(0.7, 0.7, PI / 2.0, 0.0, 0.0), Tangent),
        mk("lemniscate-stretch", &lem, aff(0.7, 0.4, 0.0, 0.0, 0.0), aff(0.7, 1.2, 0.0, 0.0, 0.0), Tangent),
        mk("lemniscate-slide", &lem, aff(0.5, 0.5, 0.0, -0.2, 0.0), aff(0.5, 0.5, 0.0, 0.3, 0.2), Tangent),
        mk("lemniscate-spiral", &lem, aff(0.8, 0.8, 0.0, 0.0, 0.0), aff(0.5, 0.5, PI, 0.1, -0.1), Tangent),
        mk("lemniscate-squash", &lem, aff(0.8, 0.8, -PI / 4.0, 0.0, 0.0), aff(0.4, 0.9, PI / 4.0, 0.0, 0.0), Tangent),
        mk("loop-grow", &circle, aff(0.3, 0.3, 0.0, 0.0, 0.0), aff(0.6, 0.6, 0.0, 0.0, 0.0), Constant(0.0)),
        mk("loop-slide", &circle, aff(0.3, 0.3, 0.0, -0.3, 0.0), aff(0.3, 0.3, 0.0, 0.3, 0.3), Constant(PI / 3.0)),
        mk("ellipse-breathe", &circle, aff(0.6, 0.2, 0.0, 0.0, 0.0), aff(0.4, 0.5, 0.5, 0.0, 0.0), Constant(1.0)),
        mk("loop-spin", &circle, aff(0.4, 0.4, 0.0, 0.1, 0.1), aff(0.4, 0.4, PI, 0.1, 0.1), Constant(0.25)),
    ]
}

/// Separation of one refinement stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSeparation {
    pub l: f64,
    pub s: f64,
    pub n: usize,
    pub separation: f64,
}

/// `H(l, s, ·)` sampled `m` times per cell.
pub fn sample_stage(g: &dyn Isotopy, n: usize, eps: f64, l: f64, s: f64, m: usize) -> Result<Vec<ProjPoint>, KnotError> {
    let total = n * m;
    (0..total)
        .map(|i| pl_refine(g, n, eps, l, s, i as f64 / total as f64))
        .collect()
}

/// Separation of `H(l, s, ·)` for `stages` equally spaced `l ∈ [0, 1]` and
/// `s ∈ {0, ½, 1}`.
pub fn refinement_separations(g: &dyn Isotopy, eps: f64, stages: usize) -> Result<Vec<StageSeparation>, KnotError> {
    const S: [f64; 3] = [0.0, 0.5, 1.0];
    let n = choose_n(g, eps, &S)?;
    // enough samples per cell to land inside the interpolated part at every l
    let per_cell = (SEPARATION_SAMPLES / n).max(8);
    let ls: Vec<f64> = match stages {
        0 => Vec::new(),
        1 => vec![1.0],
        k => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
    };
    let mut out = Vec::new();
    for &l in &ls {
        for &s in &S {
            let samples = sample_stage(g, n, eps, l, s, per_cell)?;
            out.push(StageSeparation {
                l,
                s,
                n,
                separation: embedding_separation(&samples, SEPARATION_WINDOW),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_vertices(n: usize, r: f64) -> Vec<ProjPoint> {
        (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                ProjPoint::new(Vec2::from_angle(a) * r, 0.3)
            })
            .collect()
    }

    #[test]
    fn small_loop_is_a_member() {
        let r = pl_validate(&loop_vertices(64, 0.3), 64, 0.3).unwrap();
        assert!(r.member, "{r:?}");
    }

    #[test]
    fn tight_eps_violates_the_gap_condition() {
        let v = loop_vertices(64, 0.3);
        let gap = v[0].base.distance(v[1].base);
        let r = pl_validate(&v, 64, gap * 0.5).unwrap();
        assert_eq!(r.violation.unwrap().condition, 2);
    }

    #[test]
    fn tangent_loop_is_not_contractible() {
        let v: Vec<ProjPoint> = (0..64)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 64.0;
                ProjPoint::new(Vec2::from_angle(a) * 0.3, a + FRAC_PI_2)
            })
            .collect();
        let r = pl_validate(&v, 64, 0.3).unwrap();
        assert_eq!(r.violation.unwrap().condition, 1);
    }

    #[test]
    fn preconditions() {
        assert!(pl_validate(&loop_vertices(3, 0.3), 3, 0.3).is_err());
        assert!(pl_validate(&loop_vertices(8, 0.3), 8, 1.6).is_err());
        assert!(pl_validate(&loop_vertices(8, 0.3), 9, 0.3).is_err());
    }

    #[test]
    fn singularity_taxonomy() {
        // edge 0 runs along the x axis from (−1, 0) to (1, 0)
        let base = |p: Vec2, q: Vec2, r: Vec2| vec![Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 2.0), p, q, r];
        let classify = |v: Vec<Vec2>| singularity_classify(&v, 4, 0, 1e-9).unwrap().kind;
        let origin = Vec2::ZERO;
        assert_eq!(
            classify(base(Vec2::new(0.5, 1.0), origin, Vec2::new(-0.5, 1.0))),
            SingularityKind::SelfTangency
        );
        assert_eq!(
            classify(base(Vec2::new(0.5, 1.0), origin, Vec2::new(-0.5, -1.0))),
            SingularityKind::Transverse
        );
        assert_eq!(
            classify(base(Vec2::new(0.5, 0.0), origin, Vec2::new(-0.5, 1.0))),
            SingularityKind::Cusp
        );
        assert!(singularity_classify(&base(Vec2::new(0.5, 1.0), Vec2::new(0.0, 0.5), Vec2::ZERO), 4, 0, 1e-9).is_err());
        assert!(singularity_classify(&base(origin, origin, origin), 1, 0, 1e-9).is_err());
    }

    #[test]
    fn refinement_endpoints() {
        let g = &test_isotopies()[0];
        let n = 64;
        for &t in &[0.0, 0.013, 0.3, 0.77] {
            assert_eq!(pl_refine(g, n, 0.5, 0.0, 0.5, t).unwrap(), g.eval(0.5, t));
        }
        // l = 1 puts every point on the edge between adjacent samples
        let v = sample_isotopy(g, 0.5, n);
        let stage = sample_stage(g, n, 0.5, 1.0, 0.5, 4).unwrap();
        assert!(pl_validate_sampled(&stage, n, 0.5, 1e-12).unwrap().member);
        for k in 0..n {
            assert_eq!(stage[4 * k].base, v[k].base);
        }
        // l = ½, t = ¼ of the first cell: midpoint of the edge to G(s, ½/n)
        let h = pl_refine(g, n, 0.5, 0.5, 0.5, 0.25 / n as f64).unwrap();
        let (p, q) = (g.eval(0.5, 0.0), g.eval(0.5, 0.5 / n as f64));
        assert!(h.base.distance(Vec2::lerp(p.base, q.base, 0.5)) < 1e-15);
        assert!((fiber_delta(&p, &h) - fiber_delta(&p, &q) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn refine_rejects_coarse_sampling() {
        assert!(pl_refine(&test_isotopies()[0], 4, 0.2, 1.0, 0.0, 0.1).is_err());
    }

    fn brute_separation(samples: &[ProjPoint], window: f64) -> f64 {
        let n = samples.len();
        let gap = (window * n as f64).ceil() as usize;
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                if (j - i).min(n - (j - i)) > gap {
                    best = best.min(raw_d0(&samples[i], &samples[j]));
                }
            }
        }
        best
    }

    #[test]
    fn sweep_matches_brute_force() {
        for g in test_isotopies().iter().take(4) {
            let v = sample_isotopy(g, 0.3, 700);
            assert_eq!(embedding_separation(&v, 0.05), brute_separation(&v, 0.05), "{}", g.name);
        }
    }

    #[test]
    fn separation_detects_collisions() {
        let circle = loop_vertices(256, 0.5);
        assert!(embedding_separation(&circle, 0.05) > 0.1);
        let mut forced = circle.clone();
        forced[128] = forced[0];
        assert!(embedding_separation(&forced, 0.05) < 1e-15);
    }

    #[test]
    fn lemniscate_stages_stay_embedded() {
        let seps = refinement_separations(&test_isotopies()[1], 0.2, 3).unwrap();
        assert_eq!(seps.len(), 9);
        assert!(seps.iter().all(|s| s.separation > 0.0));
    }
}
