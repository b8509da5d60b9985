use crate::assertion::{Assertion, IntervalSet};
use crate::error::{Error, Result};
use crate::models::ScalarNormalModel;
use crate::numerics::std_normal_cdf;
use crate::priors::{FiniteCredalSet, NormalPrior};
use crate::possibility::UpperProbability;

/// `N(m, v)` prior with `Y | θ ~ N(θ, 1/n)` gives the posterior
/// `N((n v y + m)/(n v + 1), v/(n v + 1))`.
pub fn conjugate_posterior(prior: &NormalPrior, model: &ScalarNormalModel, y: f64) -> NormalPrior {
    let nv = model.n() as f64 * prior.var;
    NormalPrior {
        mean: (nv * y + prior.mean) / (nv + 1.0),
        var: prior.var / (nv + 1.0),
    }
}

fn normal_prob(p: &NormalPrior, set: &IntervalSet) -> f64 {
    let sd = p.var.sqrt();
    set.parts()
        .iter()
        .map(|iv| std_normal_cdf((iv.hi - p.mean) / sd) - std_normal_cdf((iv.lo - p.mean) / sd))
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// Posteriors of every member of a finite credal set at one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct GBayesPosterior {
    posteriors: Vec<NormalPrior>,
}

impl GBayesPosterior {
    pub fn new(credal: &FiniteCredalSet, model: &ScalarNormalModel, y: f64) -> Self {
        GBayesPosterior {
            posteriors: credal
                .priors()
                .iter()
                .map(|p| conjugate_posterior(p, model, y))
                .collect(),
        }
    }

    pub fn posteriors(&self) -> &[NormalPrior] {
        &self.posteriors
    }
}

impl UpperProbability for GBayesPosterior {
    fn dim(&self) -> usize {
        1
    }

    /// `sup_{Q ∈ 𝒬} Q(A | y)`.
    fn upper(&self, a: &Assertion) -> Result<f64> {
        let set = a.as_interval_set().ok_or(Error::DimensionMismatch {
            expected: 1,
            actual: a.dim(),
        })?;
        Ok(self
            .posteriors
            .iter()
            .map(|p| normal_prob(p, &set))
            .fold(0.0, f64::max))
    }
}

/// Generalized-Bayes upper probability of `A` given `y`.
pub fn gbayes_upper(credal: &FiniteCredalSet, model: &ScalarNormalModel, y: f64, a: &Assertion) -> Result<f64> {
    GBayesPosterior::new(credal, model, y).upper(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn setup() -> (ScalarNormalModel, NormalPrior) {
        (ScalarNormalModel::new(10).unwrap(), NormalPrior::new(0.0, 1.0).unwrap())
    }

    #[test]
    fn single_prior_posterior_probability() {
        let (m, p) = setup();
        let credal = FiniteCredalSet::new(vec![p]).unwrap();
        let got = gbayes_upper(&credal, &m, 1.5, &Assertion::open(1.0, 5.0)).unwrap();
        // Posterior N(15/11, 1/11).
        let s = 11f64.sqrt();
        let oracle = std_normal_cdf((5.0 - 15.0 / 11.0) * s) - std_normal_cdf((1.0 - 15.0 / 11.0) * s);
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(got, 0.8861, epsilon = 1e-4);
        assert_eq!(gbayes_upper(&credal, &m, 1.5, &Assertion::Full(1)).unwrap(), 1.0);
    }

    #[test]
    fn envelope_dominates_members() {
        let (m, p) = setup();
        let q = NormalPrior::new(5.0, 1.0).unwrap();
        let both = FiniteCredalSet::new(vec![p, q]).unwrap();
        for (lo, hi) in [(1.0, 5.0), (-1.0, 0.0), (2.0, 2.5), (4.0, 9.0)] {
            let a = Assertion::open(lo, hi);
            let env = gbayes_upper(&both, &m, 1.5, &a).unwrap();
            for member in [p, q] {
                let single = FiniteCredalSet::new(vec![member]).unwrap();
                assert!(env >= gbayes_upper(&single, &m, 1.5, &a).unwrap());
            }
        }
    }
}
