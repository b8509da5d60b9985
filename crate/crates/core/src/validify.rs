//! Validification: turn a generator contour `h_y(ϑ)` into the strongly
//! valid consonant IM
//!
//! `π^v_y(ϑ) = P̄_𝒬{h_Y(Θ) ≤ h_y(ϑ)} = ∫₀¹ sup_{θ : q(θ) > α} F_θ(h_y(ϑ)) dα`,
//! where `F_θ(x) = P_{Y|θ}{h_Y(θ) ≤ x}`.
//!
//! For a nested focal prior the Choquet integral is the finite sum
//! `Σ_j m(T_j) sup_{θ ∈ T_j} F_θ(x)`. `F_θ` does not depend on the observed
//! `y`, so the inner CDFs are estimated once, sorted, and then queried by
//! binary search. All `θ` share the same standard-normal draws, which keeps
//! the supremum over a grid of `θ` free of selection bias and makes the
//! transform of an exactly valid contour a single ECDF.

use std::sync::Arc;

use rayon::prelude::*;

use crate::assertion::IntervalSet;
use crate::combiners::CombinerSpec;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::models::{SamplingModel, ScalarNormalModel};
use crate::point::Observation;
use crate::possibility::plausibility_region;
use crate::priors::FocalPrior;
use crate::region::Region;
use crate::rng::{stream, BLOCK};

#[derive(Debug, Clone, PartialEq)]
pub struct ValidifyConfig {
    /// Draws of `Y` per `θ`.
    pub mc_reps: usize,
    /// Points on the hull of the prior's finite breakpoints.
    pub inner_points: usize,
    /// Points on the widened grid used for unbounded focal elements.
    pub outer_points: usize,
    /// Widening of the outer grid; `5/√n` when `None`.
    pub outer_margin: Option<f64>,
    /// Grid center when the prior has no finite breakpoints.
    pub center: f64,
    pub seed: u64,
}

impl Default for ValidifyConfig {
    fn default() -> Self {
        ValidifyConfig {
            mc_reps: 10_000,
            inner_points: 201,
            outer_points: 401,
            outer_margin: None,
            center: 0.0,
            seed: 0,
        }
    }
}

/// A generator contour `(y, ϑ) ↦ h_y(ϑ)` for the scalar model.
pub trait Generator: Sync {
    fn contour(&self, y: f64) -> Result<Contour>;

    fn value(&self, y: f64, theta: f64) -> Result<f64> {
        Ok(self.contour(y)?.at(theta))
    }
}

impl<F> Generator for F
where
    F: Fn(f64) -> Result<Contour> + Sync,
{
    fn contour(&self, y: f64) -> Result<Contour> {
        self(y)
    }
}

/// A combiner output used as a generator.
#[derive(Debug, Clone)]
pub struct CombinerGenerator {
    pub spec: CombinerSpec,
    pub model: ScalarNormalModel,
    pub prior: FocalPrior,
}

impl Generator for CombinerGenerator {
    fn contour(&self, y: f64) -> Result<Contour> {
        self.spec.contour(&self.model, &self.prior, y)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || lo == hi {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * step }).collect()
}

/// Estimated map `x ↦ Σ_j m(T_j) sup_{θ ∈ T_j} F̂_θ(x)`.
#[derive(Debug, Clone)]
pub struct Validifier {
    thetas: Vec<f64>,
    /// Sorted `h_Y(θ)` draws, one row per `θ`.
    draws: Vec<Vec<f64>>,
    /// `(mass, indices of θ in the focal element)`.
    levels: Vec<(f64, Vec<usize>)>,
    reps: usize,
}

impl Validifier {
    pub fn new(
        h: &dyn Generator,
        prior: &FocalPrior,
        model: &SamplingModel,
        cfg: &ValidifyConfig,
    ) -> Result<Self> {
        let model = *model.as_scalar().ok_or(Error::DimensionMismatch {
            expected: 1,
            actual: model.dim(),
        })?;
        if cfg.mc_reps == 0 {
            return Err(Error::invalid("mc_reps must be positive"));
        }
        let thetas = theta_grid(prior, &model, cfg);
        let mut levels = Vec::with_capacity(prior.elements().len());
        for (t, m) in prior.focal() {
            let idx: Vec<usize> = (0..thetas.len()).filter(|&i| t.contains(thetas[i])).collect();
            if idx.is_empty() {
                return Err(Error::invalid(format!("no θ-grid point falls in focal element {t}")));
            }
            levels.push((m, idx));
        }

        let blocks = cfg.mc_reps.div_ceil(BLOCK);
        let draws = thetas
            .par_iter()
            .map(|&theta| {
                let mut v = Vec::with_capacity(cfg.mc_reps);
                for b in 0..blocks {
                    let mut rng = stream(cfg.seed, b as u64);
                    let len = BLOCK.min(cfg.mc_reps - b * BLOCK);
                    for _ in 0..len {
                        let y = model.sample(theta, &mut rng);
                        v.push(h.value(y, theta)?);
                    }
                }
                v.sort_by(f64::total_cmp);
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;

        let lo = draws.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let hi = draws.iter().map(|v| v[v.len() - 1]).fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            return Err(Error::DegenerateGenerator);
        }
        Ok(Validifier {
            thetas,
            draws,
            levels,
            reps: cfg.mc_reps,
        })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    /// `F̂_θ(x)` at the `i`-th grid point.
    pub fn inner_cdf(&self, i: usize, x: f64) -> f64 {
        self.draws[i].partition_point(|&v| v <= x) as f64 / self.reps as f64
    }

    /// The validified value for a generator value `x = h_y(ϑ)`.
    pub fn transform(&self, x: f64) -> f64 {
        let total: f64 = self
            .levels
            .iter()
            .map(|(m, idx)| {
                // The CDFs share one sort order per θ, so count first, divide once.
                let best = idx
                    .iter()
                    .map(|&i| self.draws[i].partition_point(|&v| v <= x))
                    .max()
                    .unwrap_or(0);
                m * best as f64
            })
            .sum();
        (total / self.reps as f64).clamp(0.0, 1.0)
    }

    /// Binomial standard error of [`Validifier::transform`].
    pub fn stderr(&self, x: f64) -> f64 {
        let p = self.transform(x);
        (p * (1.0 - p) / self.reps as f64).sqrt()
    }

    /// `ϑ ↦ transform(h_y(ϑ))`.
    pub fn contour(self: &Arc<Self>, h: &dyn Generator, y: f64) -> Result<Contour> {
        let me = Arc::clone(self);
        Ok(h.contour(y)?.map(move |x| me.transform(x)))
    }
}

fn theta_grid(prior: &FocalPrior, model: &ScalarNormalModel, cfg: &ValidifyConfig) -> Vec<f64> {
    let margin = cfg.outer_margin.unwrap_or(5.0 * model.sd());
    let (lo, hi) = prior.finite_hull().unwrap_or((cfg.center, cfg.center));
    let mut pts = linspace(lo, hi, cfg.inner_points);
    pts.extend(linspace(lo - margin, hi + margin, cfg.outer_points));
    // Finite endpoints of bounded sets, so closed boundaries are always hit.
    pts.extend(prior.breakpoints());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Validified contour at `y`.
pub fn validify(
    h: &dyn Generator,
    prior: &FocalPrior,
    model: &SamplingModel,
    y: &Observation,
    cfg: &ValidifyConfig,
) -> Result<Contour> {
    let y = scalar_obs(y)?;
    let v = Arc::new(Validifier::new(h, prior, model, cfg)?);
    v.contour(h, y)
}

/// `{ϑ : π^v_y(ϑ) > α}` over `grid`.
pub fn validified_region(
    h: &dyn Generator,
    prior: &FocalPrior,
    model: &SamplingModel,
    y: &Observation,
    alpha: f64,
    grid: &GridSpec,
    cfg: &ValidifyConfig,
) -> Result<Region> {
    plausibility_region(&validify(h, prior, model, y, cfg)?, alpha, grid)
}

fn scalar_obs(y: &Observation) -> Result<f64> {
    if y.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: y.dim(),
        });
    }
    Ok(y.as_slice()[0])
}

/// Focal prior with a single element: all mass on `set`.
pub fn single_level(set: IntervalSet) -> Result<FocalPrior> {
    FocalPrior::new(vec![(set, 1.0)])
}
