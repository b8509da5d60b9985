//! Properties of the combination rules and the validification transform.

use pim_core::combiners::running::{dempster_contour, tnorm_contour};
use pim_core::combiners::{aggregate_hose, dempster_combine, gbayes_upper, product_test_pvalue};
use pim_core::numerics::std_normal_cdf;
use pim_core::priors::{FiniteCredalSet, NormalPrior};
use pim_core::validify::{CombinerGenerator, Generator, ValidifyConfig, Validifier};
use pim_core::{
    upper_prob, Assertion, CombinerSpec, IntervalPrior, SamplingModel, ScalarNormalModel, TNorm,
    UpperProbability,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn setup() -> (ScalarNormalModel, IntervalPrior) {
    (ScalarNormalModel::new(10).unwrap(), IntervalPrior::new(1.0, 2.0, 0.1).unwrap())
}

proptest! {
    #[test]
    fn consonant_above_dempster_and_both_below_vacuous(y in -2.0f64..5.0, t in -3.0f64..6.0) {
        let (m, p) = setup();
        let c = tnorm_contour(&m, &p, y, t);
        let d = dempster_contour(&m, &p, y, t);
        prop_assert!(c >= d);
        // Dominance by the vacuous contour needs a unit normalizer, i.e. y in
        // [a, b]; under prior-data conflict the renormalization inflates both.
        if (1.0..=2.0).contains(&y) {
            prop_assert!(c <= m.contour_value(y, t) + 1e-15);
            prop_assert!(d <= m.contour_value(y, t) + 1e-15);
            prop_assert!((c - d).abs() <= 1e-15);
        }
    }

    #[test]
    fn dempster_dominance_on_separated_assertions(y in -2.0f64..5.0, inside in any::<bool>(), s in 0.0f64..1.0, w in 0.0f64..1.0) {
        let (m, p) = setup();
        let a = if inside {
            let lo = 1.0 + s;
            Assertion::open(lo, lo + w * (2.0 - lo))
        } else if s < 0.5 {
            Assertion::open(-1.0 - 2.0 * w, 1.0 - 2.0 * s)
        } else {
            Assertion::closed(2.0 + s, 2.0 + s + w)
        };
        prop_assume!(!a.is_empty());
        let d = dempster_combine(&p.to_focal(), &m.vacuous_contour(y)).unwrap();
        let bound = upper_prob(&m.vacuous_contour(y), &a).unwrap() * p.upper(&a).unwrap();
        prop_assert!(d.upper(&a).unwrap() + 1e-12 >= bound);
    }

    #[test]
    fn product_test_never_exceeds_plausibility(pl in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        prop_assert!(product_test_pvalue(pl, q).unwrap() <= pl);
    }

    #[test]
    fn hose_small_weight(y in -1.0f64..3.0, t in -2.0f64..4.0) {
        let (m, p) = setup();
        let h = aggregate_hose(&m.vacuous_contour(y), &p.contour(), 1e-6).unwrap();
        prop_assert!((h.at(t) - m.contour_value(y, t).min(1.0)).abs() < 1e-5);
    }

    #[test]
    fn singleton_gbayes_is_the_posterior(y in -2.0f64..4.0, mean in -2.0f64..2.0, var in 0.1f64..4.0, lo in -3.0f64..3.0, w in 0.0f64..3.0) {
        let m = ScalarNormalModel::new(10).unwrap();
        let credal = FiniteCredalSet::new(vec![NormalPrior::new(mean, var).unwrap()]).unwrap();
        let got = gbayes_upper(&credal, &m, y, &Assertion::open(lo, lo + w)).unwrap();
        let nv = 10.0 * var;
        let pm = (nv * y + mean) / (nv + 1.0);
        let sd = (var / (nv + 1.0)).sqrt();
        let oracle = std_normal_cdf((lo + w - pm) / sd) - std_normal_cdf((lo - pm) / sd);
        prop_assert!((got - oracle).abs() < 1e-9);
    }
}

#[test]
fn conflict_lifts_combined_contours_above_vacuous() {
    let (m, p) = setup();
    // y = 0: the normalizer is β ∨ π_y(a) = 0.1, so inside [a, b] the
    // combined contour is ten times the vacuous one.
    let (y, t) = (0.0, 1.0);
    assert!((tnorm_contour(&m, &p, y, t) - 10.0 * m.contour_value(y, t)).abs() < 1e-15);
    assert!(dempster_contour(&m, &p, y, t) > m.contour_value(y, t));
}

fn validifier() -> &'static (CombinerGenerator, Validifier) {
    static V: OnceLock<(CombinerGenerator, Validifier)> = OnceLock::new();
    V.get_or_init(|| {
        let (m, p) = setup();
        let g = CombinerGenerator {
            spec: CombinerSpec::TNorm(TNorm::Product),
            model: m,
            prior: p.to_focal(),
        };
        let cfg = ValidifyConfig {
            mc_reps: 4000,
            seed: 5,
            ..ValidifyConfig::default()
        };
        let v = Validifier::new(&g, &p.to_focal(), &SamplingModel::Scalar(m), &cfg).unwrap();
        (g, v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validified_is_monotone_in_the_generator(y in -1.0f64..3.0, t1 in -1.0f64..3.0, t2 in -1.0f64..3.0) {
        let (g, v) = validifier();
        let (h1, h2) = (g.value(y, t1).unwrap(), g.value(y, t2).unwrap());
        let (p1, p2) = (v.transform(h1), v.transform(h2));
        if h1 <= h2 {
            prop_assert!(p1 <= p2);
        } else {
            prop_assert!(p1 >= p2);
        }
        prop_assert!((0.0..=1.0).contains(&p1));
    }
}

#[test]
fn validified_reaches_one_at_the_generator_peak() {
    let (g, v) = validifier();
    for y in [0.5, 0.9, 1.1, 1.5, 2.4] {
        let c = g.contour(y).unwrap();
        let sup = pim_core::possibility::global_sup(&c, &c.default_grid()).unwrap();
        assert_eq!(v.transform(sup), 1.0);
    }
}

#[test]
fn validified_vacuous_no_larger_than_generator() {
    let m = ScalarNormalModel::new(10).unwrap();
    let h = move |y: f64| Ok(m.vacuous_contour(y));
    let cfg = ValidifyConfig {
        mc_reps: 10_000,
        seed: 8,
        ..ValidifyConfig::default()
    };
    let v = Validifier::new(&h, &pim_core::FocalPrior::vacuous(), &SamplingModel::Scalar(m), &cfg).unwrap();
    for i in 0..=100 {
        let x = i as f64 / 100.0;
        let sigma = (x * (1.0 - x) / 10_000.0).sqrt();
        assert!(v.transform(x) <= x + 3.0 * sigma, "x={x}");
    }
}
