//! Monte Carlo validity diagnostics.
//!
//! Every study draws `(Θ, Y)` from one compatible prior and the sampling
//! model in blocks of [`BLOCK`] replicates, each block on its own random
//! stream, so reports are bitwise reproducible for any thread count.

use rayon::prelude::*;

use crate::assertion::Assertion;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::models::SamplingModel;
use crate::point::{Observation, ParamPoint};
use crate::possibility::plausibility_region;
use crate::priors::CompatiblePrior;
use crate::rng::{stream, Stream, BLOCK};

/// Builds the IM contour for an observation.
pub type ImBuilder<'a> = dyn Fn(&Observation) -> Result<Contour> + Sync + 'a;

/// Upper (or precise) probability of an assertion given an observation.
pub type AssertionProb<'a> = dyn Fn(&Observation, &Assertion) -> Result<f64> + Sync + 'a;

/// Conditioning hits below which error bars are widened.
pub const MIN_HITS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSampler {
    pub prior: CompatiblePrior,
    pub model: SamplingModel,
    pub reps: usize,
    pub seed: u64,
}

impl JointSampler {
    pub fn new(prior: CompatiblePrior, model: SamplingModel, reps: usize, seed: u64) -> Result<Self> {
        if reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if model.dim() != 1 {
            return Err(Error::invalid("compatible priors are scalar; use a scalar model"));
        }
        Ok(JointSampler { prior, model, reps, seed })
    }

    /// Applies `f` to every replicate `(Θ, Y)`, returning results in
    /// replicate order.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&ParamPoint, &Observation) -> Result<T> + Sync,
    {
        let blocks = self.reps.div_ceil(BLOCK);
        let per_block = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng: Stream = stream(self.seed, b as u64);
                let len = BLOCK.min(self.reps - b * BLOCK);
                let mut out = Vec::with_capacity(len);
                for _ in 0..len {
                    let theta = self.prior.sample(&mut rng);
                    let y = self.model.sample(&theta, &mut rng)?;
                    out.push(f(&theta, &y)?);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(per_block.into_iter().flatten().collect())
    }
}

/// `0, 0.01, …, 1`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// `0.01, …, 0.99`.
pub fn interior_alpha_grid() -> Vec<f64> {
    (1..100).map(|i| i as f64 / 100.0).collect()
}

/// Empirical CDF on an α grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfReport {
    pub alpha: Vec<f64>,
    pub cdf: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Values entering the CDF (conditioning hits for conditional studies).
    pub reps: usize,
    pub seed: u64,
    /// Set when `reps` fell below [`MIN_HITS`] and the error bars use the
    /// worst-case binomial variance.
    pub widened: bool,
}

impl CdfReport {
    /// ECDF of `values` on `alpha`.
    pub fn from_values(mut values: Vec<f64>, alpha: &[f64], seed: u64) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let widened = n < MIN_HITS;
        let (cdf, stderr) = alpha
            .iter()
            .map(|&a| {
                if n == 0 {
                    return (0.0, 0.5);
                }
                let p = values.partition_point(|&v| v <= a) as f64 / n as f64;
                let var = if widened { 0.25 } else { p * (1.0 - p) };
                (p, (var / n as f64).sqrt())
            })
            .unzip();
        CdfReport {
            alpha: alpha.to_vec(),
            cdf,
            stderr,
            reps: n,
            seed,
            widened,
        }
    }

    /// Largest `cdf − α − k·stderr` over the grid; `≤ 0` means the CDF sits
    /// on or below the diagonal within `k` standard errors.
    pub fn max_excess(&self, k: f64) -> f64 {
        self.alpha
            .iter()
            .zip(&self.cdf)
            .zip(&self.stderr)
            .map(|((a, c), s)| c - a - k * s)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise maximum over reports on a common grid.
    pub fn envelope(reports: &[CdfReport]) -> Result<CdfReport> {
        let first = reports.first().ok_or_else(|| Error::invalid("no reports to combine"))?;
        let mut out = first.clone();
        for r in &reports[1..] {
            if r.alpha != out.alpha {
                return Err(Error::invalid("reports use different α grids"));
            }
            for i in 0..out.cdf.len() {
                if r.cdf[i] > out.cdf[i] {
                    out.cdf[i] = r.cdf[i];
                    out.stderr[i] = r.stderr[i];
                }
            }
            out.widened |= r.widened;
        }
        Ok(out)
    }
}

/// `α ↦ P{π_Y(Θ) ≤ α}` for the IM built by `im`.
pub fn validity_cdf(im: &ImBuilder<'_>, js: &JointSampler, alpha: &[f64]) -> Result<CdfReport> {
    let values = js.map(|theta, y| Ok(im(y)?.eval(theta.as_slice())))?;
    Ok(CdfReport::from_values(values, alpha, js.seed))
}

/// `α ↦ P{Π_Y(A) ≤ α | Θ ∈ A}` for a data-dependent probability such as a
/// Bayesian posterior.
pub fn conditional_validity(
    post: &AssertionProb<'_>,
    js: &JointSampler,
    a: &Assertion,
    alpha: &[f64],
) -> Result<CdfReport> {
    let values = js.map(|theta, y| {
        if a.contains(theta.as_slice()) {
            Ok(Some(post(y, a)?))
        } else {
            Ok(None)
        }
    })?;
    let hits: Vec<f64> = values.into_iter().flatten().collect();
    Ok(CdfReport::from_values(hits, alpha, js.seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub alpha: f64,
    pub coverage: f64,
    pub mean_length: f64,
    pub stderr_coverage: f64,
    pub stderr_length: f64,
    pub reps: usize,
    pub seed: u64,
}

/// Coverage and mean size of `{ϑ : π_Y(ϑ) > α}`.
///
/// Regions are taken over `grid` when given, else over each contour's own
/// bounding window.
pub fn coverage_length(
    im: &ImBuilder<'_>,
    js: &JointSampler,
    alpha: f64,
    grid: Option<&GridSpec>,
) -> Result<CoverageReport> {
    let rows = js.map(|theta, y| {
        let c = im(y)?;
        let g = match grid {
            Some(g) => g.clone(),
            None => c.default_grid(),
        };
        let r = plausibility_region(&c, alpha, &g)?;
        Ok((r.contains(theta.as_slice()), r.measure()))
    })?;
    let n = rows.len() as f64;
    let cov = rows.iter().filter(|r| r.0).count() as f64 / n;
    let mean = rows.iter().map(|r| r.1).sum::<f64>() / n;
    let var = rows.iter().map(|r| (r.1 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(CoverageReport {
        alpha,
        coverage: cov,
        mean_length: mean,
        stderr_coverage: (cov * (1.0 - cov) / n).sqrt(),
        stderr_length: (var / n).sqrt(),
        reps: rows.len(),
        seed: js.seed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionRow {
    pub alpha: f64,
    /// `min_θ P̂_{Y|θ}{Π̄_Y(A) ≤ α}` over the tested θ.
    pub min_prob: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub prior_upper: f64,
    pub thetas: Vec<f64>,
    pub rows: Vec<ContractionRow>,
    /// Smallest α at which almost-sure contraction is flagged.
    pub flagged_at: Option<f64>,
}

/// Looks for an `α < Q̄(A)` with `P_{Y|θ}{Π̄_Y(A) ≤ α} ≈ 1` for every tested
/// `θ ∈ A`, within three standard errors.
#[allow(clippy::too_many_arguments)]
pub fn contraction_check(
    im_upper: &AssertionProb<'_>,
    prior_upper: f64,
    model: &SamplingModel,
    a: &Assertion,
    theta_grid: &[f64],
    alpha: &[f64],
    reps: usize,
    seed: u64,
) -> Result<ContractionReport> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    let thetas: Vec<f64> = theta_grid.iter().copied().filter(|t| a.contains(&[*t])).collect();
    if thetas.is_empty() {
        return Err(Error::invalid("no θ-grid point lies in the assertion"));
    }
    let tested: Vec<f64> = alpha.iter().copied().filter(|&x| x < prior_upper).collect();
    let blocks = reps.div_ceil(BLOCK);
    // Sorted Π̄_Y(A) draws per θ.
    let draws = thetas
        .par_iter()
        .map(|&t| {
            let theta = ParamPoint::scalar(t);
            let mut v = Vec::with_capacity(reps);
            for b in 0..blocks {
                let mut rng = stream(seed, b as u64);
                for _ in 0..BLOCK.min(reps - b * BLOCK) {
                    let y = model.sample(&theta, &mut rng)?;
                    v.push(im_upper(&y, a)?);
                }
            }
            v.sort_by(f64::total_cmp);
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = reps as f64;
    let rows: Vec<ContractionRow> = tested
        .iter()
        .map(|&al| {
            let p = draws
                .iter()
                .map(|v| v.partition_point(|&x| x <= al) as f64 / n)
                .fold(1.0, f64::min);
            ContractionRow {
                alpha: al,
                min_prob: p,
                stderr: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect();
    let flagged_at = rows
        .iter()
        .find(|r| r.min_prob >= 1.0 - 3.0 * r.stderr.max(1.0 / n))
        .map(|r| r.alpha);
    Ok(ContractionReport {
        prior_upper,
        thetas,
        rows,
        flagged_at,
    })
}

/// Kolmogorov–Smirnov distance of `values` from `Unif(0, 1)`.
pub fn ks_uniform_statistic(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i as f64 + 1.0) / n - x).max(x - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the KS statistic `d` from `n` values.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combiners::conjugate_posterior;
    use crate::models::ScalarNormalModel;
    use crate::numerics::std_normal_cdf;
    use crate::priors::NormalPrior;

    fn scalar() -> (ScalarNormalModel, SamplingModel) {
        let m = ScalarNormalModel::new(10).unwrap();
        (m, SamplingModel::Scalar(m))
    }

    fn q_star() -> CompatiblePrior {
        CompatiblePrior::AtomUniform {
            atom: 0.0,
            atom_weight: 0.1,
            lo: 1.0,
            hi: 2.0,
        }
    }

    #[test]
    fn vacuous_cdf_is_uniform() {
        let (m, sm) = scalar();
        let js = JointSampler::new(q_star(), sm, 20_000, 3).unwrap();
        let im = move |y: &Observation| Ok(m.vacuous_contour(y.as_slice()[0]));
        let r = validity_cdf(&im, &js, &default_alpha_grid()).unwrap();
        assert!(r.max_excess(3.0) <= 0.0);
        for (a, c) in r.alpha.iter().zip(&r.cdf) {
            assert!((a - c).abs() < 0.015, "α={a}: {c}");
        }
        assert!(r.cdf.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn constant_one_contour_never_below_one() {
        let (_, sm) = scalar();
        let js = JointSampler::new(q_star(), sm, 3000, 3).unwrap();
        let im = |_: &Observation| Ok(Contour::constant(1, vec![(0.0, 1.0)], 1.0));
        let r = validity_cdf(&im, &js, &default_alpha_grid()).unwrap();
        assert!(r.cdf[..100].iter().all(|c| *c == 0.0));
        assert_eq!(r.cdf[100], 1.0);
    }

    #[test]
    fn full_space_conditional_cdf() {
        let (m, sm) = scalar();
        let prior = NormalPrior::new(0.0, 1.0).unwrap();
        let js = JointSampler::new(CompatiblePrior::Normal(prior), sm, 3000, 5).unwrap();
        let post = move |y: &Observation, a: &Assertion| {
            let p = conjugate_posterior(&prior, &m, y.as_slice()[0]);
            let set = a.as_interval_set().unwrap();
            let sd = p.var.sqrt();
            Ok(set
                .parts()
                .iter()
                .map(|iv| std_normal_cdf((iv.hi - p.mean) / sd) - std_normal_cdf((iv.lo - p.mean) / sd))
                .sum())
        };
        let r = conditional_validity(&post, &js, &Assertion::Full(1), &default_alpha_grid()).unwrap();
        assert_eq!(r.reps, 3000);
        assert!(r.cdf[..100].iter().all(|c| *c == 0.0));
    }

    #[test]
    fn few_hits_widen_error_bars() {
        let r = CdfReport::from_values(vec![0.2; 10], &[0.1, 0.5], 0);
        assert!(r.widened);
        assert!((r.stderr[1] - (0.25f64 / 10.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coverage_at_zero_and_consistency_with_cdf() {
        let (m, sm) = scalar();
        let js = JointSampler::new(q_star(), sm, 5000, 9).unwrap();
        let im = move |y: &Observation| Ok(m.vacuous_contour(y.as_slice()[0]));
        let r0 = coverage_length(&im, &js, 0.0, None).unwrap();
        assert_eq!(r0.coverage, 1.0);
        let r = coverage_length(&im, &js, 0.2, None).unwrap();
        let cdf = validity_cdf(&im, &js, &[0.2]).unwrap();
        assert!((r.coverage - (1.0 - cdf.cdf[0])).abs() <= 3.0 * r.stderr_coverage + 1e-12);
    }

    #[test]
    fn contraction_of_a_constant_contour() {
        let (_, sm) = scalar();
        let a = Assertion::open(1.0, 2.0);
        let im = |_: &Observation, _: &Assertion| Ok(0.3);
        let grid: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
        let alpha = default_alpha_grid();
        let r = contraction_check(&im, 1.0, &sm, &a, &grid, &alpha, 1000, 1).unwrap();
        assert_eq!(r.flagged_at, Some(0.3));
        assert!(r.thetas.iter().all(|t| *t > 1.0 && *t < 2.0));
    }

    #[test]
    fn vacuous_im_does_not_contract() {
        let (m, sm) = scalar();
        let a = Assertion::open(1.0, 1.5);
        let im = move |y: &Observation, a: &Assertion| {
            crate::possibility::upper_prob(&m.vacuous_contour(y.as_slice()[0]), a)
        };
        let grid: Vec<f64> = (0..=20).map(|i| 0.9 + i as f64 * 0.04).collect();
        let r = contraction_check(&im, 1.0, &sm, &a, &grid, &default_alpha_grid(), 2000, 2).unwrap();
        assert_eq!(r.flagged_at, None);
    }

    #[test]
    fn ks_helpers() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_uniform_statistic(&v) <= 0.0005 + 1e-12);
        assert!(ks_pvalue(ks_uniform_statistic(&v), 1000) > 0.99);
        let skewed: Vec<f64> = v.iter().map(|x| x * x).collect();
        assert!(ks_pvalue(ks_uniform_statistic(&skewed), 1000) < 1e-6);
        // Kolmogorov distribution: P(K > 1.3581) ≈ 0.05.
        assert!((ks_pvalue(1.3581 / (1e6f64).sqrt(), 1_000_000) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let (m, sm) = scalar();
        let js = JointSampler::new(q_star(), sm, 5000, 21).unwrap();
        let im = move |y: &Observation| Ok(m.vacuous_contour(y.as_slice()[0]));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| validity_cdf(&im, &js, &default_alpha_grid()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
