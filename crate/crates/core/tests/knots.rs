use std::f64::consts::PI;
use std::sync::Arc;

use lens_scatter::curves::{FnCurve, Lemniscate, PlaneCurve, TrigCurve};
use lens_scatter::knot::corpus::{random_corpus, CorpusOptions};
use lens_scatter::knot::pl::{
    embedding_separation, pl_refine, pl_validate, raw_d0, refinement_separations, sample_isotopy, Affine,
    AffineIsotopy, Isotopy, IsotopyLines,
};
use lens_scatter::knot::{analyze, crossing_sign, crossing_type, smoothing_types, CrossingOptions, FramedCurve};
use lens_scatter::lift::ProjPoint;
use lens_scatter::vec2::Vec2;
use proptest::prelude::*;

fn one_curve(seed: u64) -> TrigCurve {
    random_corpus(seed, 1, &CorpusOptions::default()).remove(0).curve
}

fn reversed(c: &TrigCurve) -> TrigCurve {
    let neg = |v: &[f64]| v.iter().map(|x| -x).collect();
    TrigCurve {
        x_cos: c.x_cos.clone(),
        x_sin: neg(&c.x_sin),
        y_cos: c.y_cos.clone(),
        y_sin: neg(&c.y_sin),
    }
}

fn shifted(c: &TrigCurve, by: f64) -> FnCurve {
    let (a, b) = (c.clone(), c.clone());
    FnCurve::new("shifted", move |t| a.point(t + by), move |t| b.velocity(t + by))
}

fn table_of(curve: Arc<dyn PlaneCurve>) -> lens_scatter::knot::InvariantTable {
    let knot = FramedCurve::tangent(curve).unwrap();
    analyze(&knot, &CrossingOptions::default()).unwrap().table
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tangent_lift_crossings_are_positive_and_well_defined(seed in any::<u64>()) {
        let curve = one_curve(seed);
        let knot = FramedCurve::tangent(Arc::new(curve)).unwrap();
        let report = analyze(&knot, &CrossingOptions::default()).unwrap();
        prop_assert!(!report.crossings.is_empty());
        prop_assert!(report.certificate.is_some());
        for c in &report.crossings {
            prop_assert_eq!(c.sign, 1);
            prop_assert_eq!(crossing_sign(&knot, c.l_prime, c.l).unwrap(), c.sign);
            prop_assert_eq!(crossing_type(&knot, c.l_prime, c.l).unwrap(), c.ctype);
            if report.contractible {
                let (a, b) = smoothing_types(&knot, c.l, c.l_prime).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn tables_ignore_reparametrization(seed in any::<u64>(), by in 0.0f64..1.0) {
        // W is an invariant only of contractible knots
        let curve = random_corpus(seed, 4, &CorpusOptions::default())
            .into_iter()
            .find(|c| c.report.contractible)
            .map(|c| c.curve);
        prop_assume!(curve.is_some());
        let curve = curve.unwrap();
        let base = table_of(Arc::new(curve.clone()));
        prop_assert_eq!(&table_of(Arc::new(reversed(&curve))), &base);
        prop_assert_eq!(&table_of(Arc::new(shifted(&curve, by))), &base);
    }

    #[test]
    fn refined_affine_lemniscates_stay_embedded(
        s0 in 0.4f64..0.8,
        s1 in 0.4f64..0.8,
        aspect in 0.6f64..1.4,
        rot in -PI..PI,
        dx in -0.1f64..0.1,
    ) {
        let g = AffineIsotopy {
            name: "random".into(),
            curve: Arc::new(Lemniscate::default()),
            start: Affine { scale_x: s0, scale_y: s0, rotation: 0.0, offset: Vec2::ZERO },
            end: Affine { scale_x: s1, scale_y: s1 * aspect, rotation: rot, offset: Vec2::new(dx, 0.0) },
            lines: IsotopyLines::Tangent,
        };
        for stage in refinement_separations(&g, 0.2, 3).unwrap() {
            prop_assert!(stage.separation > 0.0, "{:?}", stage);
        }
    }
}

fn turning_lemniscate() -> AffineIsotopy {
    AffineIsotopy {
        name: "turn".into(),
        curve: Arc::new(Lemniscate::default()),
        start: Affine { scale_x: 0.6, scale_y: 0.6, rotation: 0.0, offset: Vec2::ZERO },
        end: Affine { scale_x: 0.6, scale_y: 0.6, rotation: 1.0, offset: Vec2::ZERO },
        lines: IsotopyLines::Tangent,
    }
}

#[test]
fn refinement_starts_at_the_isotopy_and_ends_piecewise_linear() {
    let g = turning_lemniscate();
    let n = 256;
    for s in [0.0, 0.5, 1.0] {
        for i in 0..97 {
            let t = i as f64 / 97.0;
            assert!(raw_d0(&pl_refine(&g, n, 0.2, 0.0, s, t).unwrap(), &g.eval(s, t)) < 1e-12);
        }
        let vertices: Vec<_> = (0..n).map(|k| pl_refine(&g, n, 0.2, 1.0, s, k as f64 / n as f64).unwrap()).collect();
        for (k, v) in vertices.iter().enumerate() {
            assert!(raw_d0(v, &g.eval(s, k as f64 / n as f64)) < 1e-12);
        }
        assert!(pl_validate(&vertices, n, 0.2).unwrap().member);
    }
}

#[test]
fn a_curve_through_one_point_twice_has_zero_separation() {
    let g = turning_lemniscate();
    // the lemniscate crosses itself, so the base-only lift collides in PΩN
    // once every line is forced to the same class
    let flat: Vec<_> = sample_isotopy(&g, 0.0, 1024)
        .into_iter()
        .map(|p| ProjPoint::new(p.base, 0.0))
        .collect();
    assert!(embedding_separation(&flat, 0.05) < 1e-2);
    assert!(embedding_separation(&sample_isotopy(&g, 0.0, 1024), 0.05) > 0.05);
}
