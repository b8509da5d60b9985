//! Sampling models and their closed-form vacuous-prior contours.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::contour::{Contour, Shape};
use crate::error::{Error, Result};
use crate::numerics::{chisq_sf, std_normal_quantile};
use crate::point::{Observation, ParamPoint};
use crate::rng::Stream;

/// `Y | θ ~ N(θ, 1/n)` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarNormalModel {
    n: u32,
}

impl ScalarNormalModel {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("precision index n must be at least 1"));
        }
        Ok(ScalarNormalModel { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sd(&self) -> f64 {
        1.0 / (self.n as f64).sqrt()
    }

    /// `π_y(ϑ) = 2{1 − Φ(√n |y − ϑ|)}`.
    pub fn contour_value(&self, y: f64, theta: f64) -> f64 {
        libm::erfc((self.n as f64 / 2.0).sqrt() * (y - theta).abs())
    }

    pub fn vacuous_contour(&self, y: f64) -> Contour {
        let m = *self;
        let half = 4.0 * self.sd();
        Contour::new(1, vec![(y - half, y + half)], Shape::Unimodal { mode: y }, move |p| {
            m.contour_value(y, p[0])
        })
    }

    /// Closed-form `{ϑ : π_y(ϑ) > α} = y ± Φ⁻¹(1 − α/2)/√n` for α ∈ (0, 1).
    pub fn plausibility_interval(&self, y: f64, alpha: f64) -> Result<(f64, f64)> {
        let half = std_normal_quantile(1.0 - alpha / 2.0)? * self.sd();
        Ok((y - half, y + half))
    }

    pub fn sample(&self, theta: f64, rng: &mut Stream) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        theta + z * self.sd()
    }
}

/// `Y | θ ~ N_d(θ, I_d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvNormalModel {
    dim: usize,
}

impl MvNormalModel {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(MvNormalModel { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `π_y(ϑ) = 1 − G_d(‖y − ϑ‖²)`.
    pub fn contour_value(&self, y: &[f64], theta: &[f64]) -> f64 {
        let r2: f64 = y.iter().zip(theta).map(|(a, b)| (a - b) * (a - b)).sum();
        chisq_sf(r2, self.dim as f64).expect("positive dimension")
    }

    pub fn vacuous_contour(&self, y: &Observation) -> Result<Contour> {
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: y.dim(),
            });
        }
        let m = *self;
        let yv = y.as_slice().to_vec();
        let half = 3.0 + (self.dim as f64).sqrt();
        let bounds = yv.iter().map(|c| (c - half, c + half)).collect();
        Ok(Contour::new(
            self.dim,
            bounds,
            Shape::General {
                breakpoints: yv.iter().map(|c| vec![*c]).collect(),
            },
            move |p| m.contour_value(&yv, p),
        ))
    }

    pub fn sample(&self, theta: &[f64], rng: &mut Stream) -> Vec<f64> {
        theta
            .iter()
            .map(|t| {
                let z: f64 = rng.sample(StandardNormal);
                t + z
            })
            .collect()
    }
}

/// Either of the two normal models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingModel {
    Scalar(ScalarNormalModel),
    Mv(MvNormalModel),
}

impl SamplingModel {
    pub fn dim(&self) -> usize {
        match self {
            SamplingModel::Scalar(_) => 1,
            SamplingModel::Mv(m) => m.dim(),
        }
    }

    pub fn sample(&self, theta: &ParamPoint, rng: &mut Stream) -> Result<Observation> {
        if theta.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: theta.dim(),
            });
        }
        Ok(match self {
            SamplingModel::Scalar(m) => Observation::scalar(m.sample(theta.as_slice()[0], rng)),
            SamplingModel::Mv(m) => Observation::new(m.sample(theta.as_slice(), rng))?,
        })
    }

    pub fn vacuous_contour(&self, y: &Observation) -> Result<Contour> {
        match self {
            SamplingModel::Scalar(m) => {
                if y.dim() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        actual: y.dim(),
                    });
                }
                Ok(m.vacuous_contour(y.first()))
            }
            SamplingModel::Mv(m) => m.vacuous_contour(y),
        }
    }

    pub fn as_scalar(&self) -> Option<&ScalarNormalModel> {
        match self {
            SamplingModel::Scalar(m) => Some(m),
            SamplingModel::Mv(_) => None,
        }
    }
}

impl std::str::FromStr for SamplingModel {
    type Err = Error;

    /// `normal:n` or `mvnormal:d`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected normal:n or mvnormal:d"))?;
        let k: u32 = arg
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, "expected a positive integer"))?;
        match kind.trim() {
            "normal" => Ok(SamplingModel::Scalar(ScalarNormalModel::new(k)?)),
            "mvnormal" => Ok(SamplingModel::Mv(MvNormalModel::new(k as usize)?)),
            other => Err(Error::parse(s, format!("unknown model `{other}`"))),
        }
    }
}
