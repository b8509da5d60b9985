//! Sparse normal mean: `Y ~ N_d(θ, I_d)` with the sparsity prior, combined by
//! the product t-norm. The normalizer `sup_t π_y(t) q(t)` reduces to a
//! maximum over the `d + 1` top-k truncations of `y`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::contour::{Contour, Shape};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::models::MvNormalModel;
use crate::point::{Observation, ParamPoint};
use crate::possibility::grid_region;
use crate::priors::SparsityPrior;
use crate::rng::{stream, BLOCK};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseDemoConfig {
    pub dim: usize,
    pub varpi: f64,
    pub y: Observation,
    pub grid: GridSpec,
    pub mc_reps: usize,
    pub seed: u64,
    /// Size of the near-zero coordinates in the reference points `v_1, v_2`.
    pub eps: f64,
}

impl SparseDemoConfig {
    /// `y = (1, 0.3)`, `ϖ = 0.5` on `[−3, 5]²`.
    pub fn demo(seed: u64) -> Self {
        SparseDemoConfig {
            dim: 2,
            varpi: 0.5,
            y: Observation::new(vec![1.0, 0.3]).expect("finite"),
            grid: "-3:5:0.02,-3:5:0.02".parse().expect("valid grid"),
            mc_reps: 100_000,
            seed,
            eps: 0.01,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if self.y.dim() != self.dim || self.grid.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: if self.y.dim() != self.dim { self.y.dim() } else { self.grid.dim() },
            });
        }
        if !(self.eps > 0.0) {
            return Err(Error::invalid("eps must be positive"));
        }
        Ok(())
    }

    pub fn prior(&self) -> Result<SparsityPrior> {
        SparsityPrior::new(self.dim, self.varpi)
    }

    pub fn model(&self) -> Result<MvNormalModel> {
        MvNormalModel::new(self.dim)
    }
}

/// Keeps the `k` largest-`|y|` coordinates, zeroing the rest. Ties go to the
/// lower index.
pub fn topk_argmax(y: &Observation, k: usize) -> Result<ParamPoint> {
    let v = y.as_slice();
    if k > v.len() {
        return Err(Error::invalid(format!("k = {k} exceeds dimension {}", v.len())));
    }
    let mut order: Vec<usize> = (0..v.len()).collect();
    // Stable sort keeps lower indices first among equal magnitudes.
    order.sort_by(|&i, &j| v[j].abs().total_cmp(&v[i].abs()));
    let mut out = vec![0.0; v.len()];
    for &i in &order[..k] {
        out[i] = v[i];
    }
    ParamPoint::new(out)
}

/// `max_k π_y(θ̂^k) q_k` and the first maximizing `k`.
pub fn sparse_normalizer(y: &Observation, prior: &SparsityPrior) -> Result<(f64, usize)> {
    let model = MvNormalModel::new(prior.dim())?;
    if y.dim() != prior.dim() {
        return Err(Error::DimensionMismatch {
            expected: prior.dim(),
            actual: y.dim(),
        });
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for k in 0..=prior.dim() {
        let t = topk_argmax(y, k)?;
        let v = model.contour_value(y.as_slice(), t.as_slice()) * prior.levels()[k];
        if v > best.0 {
            best = (v, k);
        }
    }
    Ok(best)
}

/// `π_y(ϑ) q(ϑ) / sup`, evaluated directly.
fn tnorm_value(model: &MvNormalModel, prior: &SparsityPrior, y: &[f64], norm: f64, theta: &[f64]) -> f64 {
    (model.contour_value(y, theta) * prior.q(theta) / norm).min(1.0)
}

fn tnorm_contour_at(model: MvNormalModel, prior: SparsityPrior, y: &Observation, bounds: Vec<(f64, f64)>) -> Result<Contour> {
    let (norm, _) = sparse_normalizer(y, &prior)?;
    if !(norm > 0.0) {
        return Err(Error::ZeroContour);
    }
    let yv = y.as_slice().to_vec();
    let breakpoints = yv.iter().map(|c| vec![0.0, *c]).collect();
    Ok(Contour::new(model.dim(), bounds, Shape::General { breakpoints }, move |p| {
        tnorm_value(&model, &prior, &yv, norm, p)
    }))
}

fn grid_bounds(grid: &GridSpec) -> Vec<(f64, f64)> {
    grid.axes().iter().map(|a| (a.lo, a.hi)).collect()
}

/// Product t-norm combination of the vacuous contour with the sparsity prior.
pub fn sparse_tnorm_contour(cfg: &SparseDemoConfig) -> Result<Contour> {
    cfg.validate()?;
    tnorm_contour_at(cfg.model()?, cfg.prior()?, &cfg.y, grid_bounds(&cfg.grid))
}

/// The reference points `v_0 = 0`, `v_1 = (0, ε)`, `v_2 = (ε, ε)`.
pub fn reference_points(eps: f64) -> [[f64; 2]; 3] {
    [[0.0, 0.0], [0.0, eps], [eps, eps]]
}

/// Weighted sum of Monte Carlo CDFs,
/// `(1 − q_1) F_{v_0}(x) + (q_1 − q_2) F_{v_1}(x) + q_2 F_{v_2}(x)`,
/// where `F_v` is the law of the t-norm contour at `v` under `Y ~ N(v, I)`.
#[derive(Debug, Clone)]
pub struct SparseValidifier {
    weights: [f64; 3],
    draws: [Vec<f64>; 3],
}

impl SparseValidifier {
    pub fn new(varpi: f64, eps: f64, mc_reps: usize, seed: u64) -> Result<Self> {
        if mc_reps == 0 {
            return Err(Error::invalid("mc_reps must be positive"));
        }
        let prior = SparsityPrior::new(2, varpi)?;
        let model = MvNormalModel::new(2)?;
        let q = prior.levels();
        let weights = [1.0 - q[1], q[1] - q[2], q[2]];
        let refs = reference_points(eps);
        let blocks = mc_reps.div_ceil(BLOCK);
        let per: Vec<Vec<f64>> = refs
            .par_iter()
            .map(|v| {
                let mut out = Vec::with_capacity(mc_reps);
                for b in 0..blocks {
                    let mut rng = stream(seed, b as u64);
                    for _ in 0..BLOCK.min(mc_reps - b * BLOCK) {
                        let y = Observation::new(model.sample(v, &mut rng))?;
                        let (norm, _) = sparse_normalizer(&y, &prior)?;
                        out.push(tnorm_value(&model, &prior, y.as_slice(), norm, v));
                    }
                }
                out.sort_by(f64::total_cmp);
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut it = per.into_iter();
        let draws = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        Ok(SparseValidifier { weights, draws })
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    pub fn transform(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.draws)
            .map(|(w, d)| w * d.partition_point(|&v| v <= x) as f64 / d.len() as f64)
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

/// Validified t-norm contour for `dim = 2`.
pub fn sparse_validified_contour(cfg: &SparseDemoConfig) -> Result<Contour> {
    cfg.validate()?;
    if cfg.dim != 2 {
        return Err(Error::invalid("the validified sparse contour is implemented for dim = 2 only"));
    }
    let v = Arc::new(SparseValidifier::new(cfg.varpi, cfg.eps, cfg.mc_reps, cfg.seed)?);
    Ok(sparse_tnorm_contour(cfg)?.map(move |x| v.transform(x)))
}

/// Grid area (or volume) of `{ϑ : c(ϑ) > α}`.
pub fn region_area(c: &Contour, alpha: f64, grid: &GridSpec) -> Result<f64> {
    if grid.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: grid.dim(),
        });
    }
    Ok(grid_region(c, alpha, grid).measure())
}
