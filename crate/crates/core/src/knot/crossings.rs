//! Double points of a closed plane curve: sweep-and-prune over a sampled
//! polyline, then Newton refinement of `γ(l) = γ(l′)` on the curve itself.

use crate::curves::PlaneCurve;
use crate::vec2::Vec2;

use super::KnotError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingOptions {
    /// Polyline resolution of the coarse search.
    pub samples: usize,
    /// Spatial tolerance on `|γ(l) − γ(l′)|` after refinement.
    pub tol: f64,
    /// `|sin|` of the crossing angle below which a double point counts as a
    /// tangency.
    pub angular_tol: f64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            samples: 2048,
            tol: 1e-9,
            angular_tol: 1e-6,
        }
    }
}

/// A double point with `l < l′`, both in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoublePoint {
    pub l: f64,
    pub l_prime: f64,
    pub point: Vec2,
    /// `|sin|` of the angle between the two branches.
    pub sin_angle: f64,
}

fn cyclic_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Parameters `(s, u)` where segments `p0p1` and `q0q1` meet, if they do.
fn segment_intersection(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let w = q0 - p0;
    let a = w.cross(s) / denom;
    let b = w.cross(r) / denom;
    const SLACK: f64 = 1e-9;
    ((-SLACK..=1.0 + SLACK).contains(&a) && (-SLACK..=1.0 + SLACK).contains(&b)).then_some((a, b))
}

/// Newton iteration on `F(l, l′) = γ(l) − γ(l′)`.
fn polish(curve: &dyn PlaneCurve, mut l: f64, mut lp: f64) -> Option<(f64, f64, f64)> {
    for _ in 0..60 {
        let f = curve.point(l) - curve.point(lp);
        let (a, b) = (curve.velocity(l), -curve.velocity(lp));
        let det = a.cross(b);
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        // solve [a b] (dl, dlp)ᵀ = −f
        let dl = -f.cross(b) / det;
        let dlp = -a.cross(f) / det;
        l += dl;
        lp += dlp;
        if dl.abs().max(dlp.abs()) < 1e-15 {
            break;
        }
    }
    let residual = curve.point(l).distance(curve.point(lp));
    residual.is_finite().then_some((l, lp, residual))
}

/// Every double point of a closed curve, each reported once; a point where
/// `m` branches meet is reported as `m(m−1)/2` pairs.
pub fn find_double_points(curve: &dyn PlaneCurve, opts: &CrossingOptions) -> Result<Vec<DoublePoint>, KnotError> {
    if !curve.closed() {
        return Err(KnotError::OpenCurve);
    }
    let n = opts.samples.max(8);
    let pts: Vec<Vec2> = (0..n).map(|i| curve.point(i as f64 / n as f64)).collect();
    let mut boxes: Vec<(f64, f64, f64, f64, usize)> = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y), i)
        })
        .collect();
    boxes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.4.cmp(&b.4)));

    let step = 1.0 / n as f64;
    let mut found: Vec<DoublePoint> = Vec::new();
    for (idx, bi) in boxes.iter().enumerate() {
        for bj in &boxes[idx + 1..] {
            if bj.0 > bi.1 {
                break;
            }
            if bj.2 > bi.3 || bi.2 > bj.3 {
                continue;
            }
            let (i, j) = (bi.4, bj.4);
            let gap = (i as isize - j as isize).rem_euclid(n as isize) as usize;
            if gap <= 1 || gap >= n - 1 {
                continue;
            }
            let Some((a, b)) = segment_intersection(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) else {
                continue;
            };
            let (l0, lp0) = ((i as f64 + a) * step, (j as f64 + b) * step);
            let Some((l, lp, residual)) = polish(curve, l0, lp0) else {
                let (da, db) = (pts[(i + 1) % n] - pts[i], pts[(j + 1) % n] - pts[j]);
                let coarse_sin = (da.cross(db) / (da.norm() * db.norm())).abs();
                if coarse_sin < 1e-3 {
                    return Err(KnotError::SelfTangency {
                        l: l0.rem_euclid(1.0),
                        l_prime: lp0.rem_euclid(1.0),
                        sin_angle: coarse_sin,
                    });
                }
                continue;
            };
            if residual > opts.tol || cyclic_distance(l, lp) < 2.0 * step {
                continue;
            }
            // Newton should stay near its start; a far jump means the coarse
            // hit was spurious
            if cyclic_distance(l, l0) > 4.0 * step || cyclic_distance(lp, lp0) > 4.0 * step {
                continue;
            }
            let (mut l, mut lp) = (l.rem_euclid(1.0), lp.rem_euclid(1.0));
            if l > lp {
                std::mem::swap(&mut l, &mut lp);
            }
            let (va, vb) = (curve.velocity(l), curve.velocity(lp));
            let sin_angle = (va.cross(vb) / (va.norm() * vb.norm())).abs();
            if sin_angle < opts.angular_tol {
                return Err(KnotError::SelfTangency { l, l_prime: lp, sin_angle });
            }
            let dup = found
                .iter()
                .any(|c| cyclic_distance(c.l, l) < 1e-7 && cyclic_distance(c.l_prime, lp) < 1e-7);
            if !dup {
                found.push(DoublePoint {
                    l,
                    l_prime: lp,
                    point: curve.point(l),
                    sin_angle,
                });
            }
        }
    }
    found.sort_by(|a, b| a.l.total_cmp(&b.l).then(a.l_prime.total_cmp(&b.l_prime)));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Circle, Lemniscate, Rose, TrigCurve};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force oracle: all pairs of a fine polyline.
    fn brute_force(curve: &dyn PlaneCurve, n: usize) -> Vec<Vec2> {
        let pts: Vec<Vec2> = (0..n).map(|i| curve.point(i as f64 / n as f64)).collect();
        let mut hits: Vec<Vec2> = Vec::new();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if let Some((a, _)) = segment_intersection(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                    let p = Vec2::lerp(pts[i], pts[(i + 1) % n], a);
                    hits.push(p);
                }
            }
        }
        hits
    }

    #[test]
    fn circle_has_none() {
        assert!(find_double_points(&Circle::default(), &Default::default()).unwrap().is_empty());
    }

    #[test]
    fn lemniscate_has_one_at_origin() {
        let d = find_double_points(&Lemniscate::default(), &Default::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].l - 0.25).abs() < 1e-12 && (d[0].l_prime - 0.75).abs() < 1e-12);
        assert!(d[0].point.norm() < 1e-12);
        assert!((d[0].sin_angle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rose_three_has_a_triple_point() {
        let rose = Rose::new(3).unwrap();
        let d = find_double_points(&rose, &Default::default()).unwrap();
        assert_eq!(d.len(), 3);
        // the brute-force oracle sees the same three branch pairs near the
        // origin (a triple point splits into three nearby segment hits)
        let oracle = brute_force(&rose, 999);
        assert_eq!(oracle.len(), 3);
        for c in &d {
            assert!(c.point.norm() < 1e-9);
        }
    }

    #[test]
    fn matches_brute_force_on_random_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let c = TrigCurve::random(&mut rng, 3);
            let Ok(d) = find_double_points(&c, &Default::default()) else {
                continue;
            };
            let oracle = brute_force(&c, 4001);
            assert_eq!(d.len(), oracle.len(), "{c:?}");
            for p in oracle {
                assert!(d.iter().any(|x| x.point.distance(p) < 1e-3));
            }
        }
    }

    #[test]
    fn grazing_crossing_is_a_tangency() {
        // thin bow-tie y = ±εx·√(1 − x²/4) whose branches cross at angle 2ε
        let eps = 1e-8;
        let c = crate::curves::FnCurve::new(
            "bow-tie",
            move |t| {
                let u = std::f64::consts::TAU * t;
                let x = 2.0 * u.cos();
                Vec2::new(x, u.sin() * eps * x)
            },
            move |t| {
                let u = std::f64::consts::TAU * t;
                let (x, dx) = (2.0 * u.cos(), -2.0 * u.sin());
                Vec2::new(dx, eps * (u.cos() * x + u.sin() * dx)) * std::f64::consts::TAU
            },
        );
        assert!(matches!(
            find_double_points(&c, &Default::default()),
            Err(KnotError::SelfTangency { .. })
        ));
    }
}
