//! Sampling-model and prior properties.

use pim_core::diagnostics::{ks_pvalue, ks_uniform_statistic, JointSampler};
use pim_core::numerics::std_normal_quantile;
use pim_core::priors::CompatiblePrior;
use pim_core::rng::stream;
use pim_core::{
    plausibility_region, Assertion, IntervalPrior, IntervalSet, MvNormalModel, Observation, SamplingModel,
    ScalarNormalModel, SparsityPrior, UpperProbability,
};
use proptest::prelude::*;

fn ks_ok(values: &[f64]) -> (bool, f64) {
    let d = ks_uniform_statistic(values);
    (d <= 1.5 * 1.36 / (values.len() as f64).sqrt(), d)
}

#[test]
fn scalar_vacuous_contour_is_uniform_at_the_truth() {
    let m = ScalarNormalModel::new(10).unwrap();
    let js = JointSampler::new(CompatiblePrior::Point(0.7), SamplingModel::Scalar(m), 100_000, 17).unwrap();
    let v = js.map(|t, y| Ok(m.contour_value(y.as_slice()[0], t.as_slice()[0]))).unwrap();
    let (ok, d) = ks_ok(&v);
    assert!(ok, "KS distance {d}");
    assert!(ks_pvalue(d, v.len()) > 0.01);
}

#[test]
fn mv_vacuous_contour_is_uniform_at_the_truth() {
    for dim in [2usize, 5] {
        let m = MvNormalModel::new(dim).unwrap();
        let theta: Vec<f64> = (0..dim).map(|i| 0.3 * i as f64 - 0.4).collect();
        let mut v = Vec::with_capacity(100_000);
        for b in 0..100 {
            let mut rng = stream(23, b);
            for _ in 0..1000 {
                let y = m.sample(&theta, &mut rng);
                v.push(m.contour_value(&y, &theta));
            }
        }
        let (ok, d) = ks_ok(&v);
        assert!(ok, "dim {dim}: KS distance {d}");
    }
}

proptest! {
    #[test]
    fn scalar_contour_strictly_decreasing(y in -5.0f64..5.0, d1 in 0.0f64..1.5, extra in 1e-3f64..1.0, right in any::<bool>()) {
        let m = ScalarNormalModel::new(10).unwrap();
        let s = if right { 1.0 } else { -1.0 };
        prop_assert!(m.contour_value(y, y + s * d1) > m.contour_value(y, y + s * (d1 + extra)));
    }

    #[test]
    fn mv_contour_strictly_decreasing(y0 in -3.0f64..3.0, y1 in -3.0f64..3.0, ang in 0.0f64..6.28, r in 0.0f64..3.0, extra in 1e-3f64..1.0) {
        let m = MvNormalModel::new(2).unwrap();
        let y = [y0, y1];
        let at = |rad: f64| [y0 + rad * ang.cos(), y1 + rad * ang.sin()];
        prop_assert!(m.contour_value(&y, &at(r)) > m.contour_value(&y, &at(r + extra)));
    }

    #[test]
    fn interval_half_width(y in -5.0f64..5.0, n in 1u32..200) {
        let m = ScalarNormalModel::new(n).unwrap();
        let c = m.vacuous_contour(y);
        let r = plausibility_region(&c, 0.05, &c.default_grid()).unwrap();
        let expected = 2.0 * std_normal_quantile(0.975).unwrap() / (n as f64).sqrt();
        prop_assert!((r.measure() - expected).abs() < 1e-9);
    }

    #[test]
    fn prior_contour_is_singleton_upper(a in -3.0f64..3.0, w in 0.0f64..2.0, beta in 0.0f64..1.0, x in -5.0f64..5.0) {
        let p = IntervalPrior::new(a, a + w, beta).unwrap();
        let focal = p.to_focal();
        let single = IntervalSet::from_interval(pim_core::Interval::point(x));
        prop_assert!((p.q(x) - p.upper_prob(&single)).abs() < 1e-15);
        prop_assert!((focal.q(x) - focal.upper(&Assertion::singleton(x)).unwrap()).abs() < 1e-12);
        prop_assert!((focal.q(x) - p.q(x)).abs() < 1e-12);
    }

    #[test]
    fn sparsity_prior_depends_only_on_support_size(
        coords in proptest::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0], 1..6),
        varpi in 0.01f64..0.99,
        seed in any::<u64>(),
    ) {
        let d = coords.len();
        let p = SparsityPrior::new(d, varpi).unwrap();
        let mut perm = coords.clone();
        let k = (seed as usize) % d;
        perm.rotate_left(k);
        let flipped: Vec<f64> = perm.iter().enumerate().map(|(i, x)| if (seed >> i) & 1 == 1 { -x } else { *x }).collect();
        prop_assert_eq!(p.q(&coords), p.q(&flipped));
        prop_assert_eq!(p.q(&vec![0.0; d]), 1.0);
        prop_assert!(p.levels().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn compatible_samples_are_plausible(a in -3.0f64..3.0, w in 0.0f64..2.0, beta in 0.0f64..1.0, seed in any::<u64>()) {
        let p = IntervalPrior::new(a, a + w, beta).unwrap();
        let q = p.compatible(a - 1.0);
        let mut rng = stream(seed, 0);
        for _ in 0..200 {
            prop_assert!(p.q(q.sample_scalar(&mut rng)) > 0.0);
        }
    }
}

#[test]
fn observation_dimension_checked_by_mv_model() {
    let m = MvNormalModel::new(3).unwrap();
    assert!(m.vacuous_contour(&Observation::new(vec![1.0, 2.0]).unwrap()).is_err());
}
