//! Seeded random immersed curves and crossing-preserving perturbations.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{PlaneCurve, TrigCurve};

use super::{analyze, CrossingOptions, FramedCurve, KnotReport};

/// Rejection thresholds for corpus curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusOptions {
    pub degree: usize,
    /// Minimum speed as a fraction of the mean speed.
    pub min_speed_ratio: f64,
    /// Minimum `|sin|` of every crossing angle.
    pub min_crossing_sin: f64,
    /// Minimum distance between distinct double points.
    pub min_crossing_separation: f64,
    /// Maximum tangent turning between consecutive samples of 4096.
    pub max_turn_per_sample: f64,
    pub max_crossings: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self {
            degree: 3,
            min_speed_ratio: 0.05,
            min_crossing_sin: 0.05,
            min_crossing_separation: 1e-3,
            max_turn_per_sample: 0.5,
            max_crossings: 16,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusCurve {
    pub curve: TrigCurve,
    pub knot: FramedCurve,
    pub report: KnotReport,
}

fn speed_and_turning_ok(curve: &TrigCurve, opts: &CorpusOptions) -> bool {
    const N: usize = 4096;
    let samples = curve.sample(N);
    let speeds: Vec<f64> = samples.iter().map(|s| s.velocity.norm()).collect();
    let mean = speeds.iter().sum::<f64>() / N as f64;
    if speeds.iter().any(|&s| s < opts.min_speed_ratio * mean) {
        return false;
    }
    (0..N).all(|i| {
        let (a, b) = (samples[i].velocity, samples[(i + 1) % N].velocity);
        a.cross(b).atan2(a.dot(b)).abs() <= opts.max_turn_per_sample
    })
}

/// Analyzes a candidate and applies the rejection rules.
pub fn admit(curve: &TrigCurve, opts: &CorpusOptions, crossing: &CrossingOptions) -> Option<CorpusCurve> {
    if !speed_and_turning_ok(curve, opts) {
        return None;
    }
    let knot = FramedCurve::tangent(Arc::new(curve.clone())).ok()?;
    let doubles = super::find_double_points(curve, crossing).ok()?;
    if doubles.is_empty() || doubles.len() > opts.max_crossings {
        return None;
    }
    if doubles.iter().any(|d| d.sin_angle < opts.min_crossing_sin) {
        return None;
    }
    for (i, a) in doubles.iter().enumerate() {
        if doubles[i + 1..]
            .iter()
            .any(|b| a.point.distance(b.point) < opts.min_crossing_separation)
        {
            return None;
        }
    }
    let report = analyze(&knot, crossing).ok()?;
    Some(CorpusCurve {
        curve: curve.clone(),
        knot,
        report,
    })
}

/// `size` admissible random trigonometric curves, each with at least one
/// self-intersection.
pub fn random_corpus(seed: u64, size: usize, opts: &CorpusOptions) -> Vec<CorpusCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crossing = CrossingOptions::default();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let batch: Vec<TrigCurve> = (0..2 * size).map(|_| TrigCurve::random(&mut rng, opts.degree)).collect();
        let admitted: Vec<Option<CorpusCurve>> = batch.par_iter().map(|c| admit(c, opts, &crossing)).collect();
        out.extend(admitted.into_iter().flatten().take(size - out.len()));
    }
    out
}

#[derive(Clone, Debug)]
pub struct Perturbation {
    pub curve: TrigCurve,
    pub report: KnotReport,
}

/// `count` random perturbations `curve + amplitude·δ` that keep the number
/// of crossings and pass the corpus rules.
pub fn perturbations(
    base: &CorpusCurve,
    seed: u64,
    count: usize,
    amplitude: f64,
    opts: &CorpusOptions,
) -> Vec<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crossing = CrossingOptions::default();
    let target = base.report.crossings.len();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 50 {
        attempts += 1;
        let batch: Vec<TrigCurve> = (0..count)
            .map(|_| base.curve.plus(&TrigCurve::random(&mut rng, opts.degree).scaled(amplitude)))
            .collect();
        let admitted: Vec<Option<Perturbation>> = batch
            .par_iter()
            .map(|c| {
                admit(c, opts, &crossing)
                    .filter(|p| p.report.crossings.len() == target)
                    .map(|p| Perturbation {
                        curve: p.curve,
                        report: p.report,
                    })
            })
            .collect();
        out.extend(admitted.into_iter().flatten().take(count - out.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_admissible() {
        let a = random_corpus(5, 4, &Default::default());
        let b = random_corpus(5, 4, &Default::default());
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.curve, y.curve);
            assert_eq!(x.report, y.report);
            assert!(!x.report.crossings.is_empty());
        }
    }

    #[test]
    fn perturbations_keep_crossing_count() {
        let c = &random_corpus(9, 1, &Default::default())[0];
        let p = perturbations(c, 1, 10, 0.02, &Default::default());
        assert_eq!(p.len(), 10);
        for q in &p {
            assert_eq!(q.report.crossings.len(), c.report.crossings.len());
        }
    }
}
