//! Plausibility contours: the point functions that determine a consonant IM.
//!
//! A [`Contour`] is an immutable, shareable function from parameter points to
//! `[0, 1]` together with enough structural information for exact suprema:
//! a recommended bounding box, a [`Shape`] hint and, for scalar contours with
//! jumps, one-sided limits at the jump points.
//!
//! Pointwise combinations ([`Contour::zip_with`], [`Contour::map`]) assume the
//! combining operation is non-decreasing in each argument (products, minima,
//! positive scalings, clamping). Under that assumption the shape hint of the
//! result is derived from the parents and exactness is preserved.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridSpec};

/// Side of a one-sided limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Structural hint used to pick between exact and grid suprema.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// No exploitable structure beyond known jump locations per axis; the
    /// breakpoints are injected into every grid.
    General { breakpoints: Vec<Vec<f64>> },
    /// Scalar, continuous, non-increasing in `|ϑ − mode|` on each side.
    Unimodal { mode: f64 },
    /// Scalar and piecewise between `breakpoints`: on each open piece the
    /// contour is unimodal about `mode` (restricted to the piece), or
    /// constant when `mode` is `None`. Values at the breakpoints themselves
    /// are arbitrary.
    Piecewise {
        breakpoints: Vec<f64>,
        mode: Option<f64>,
    },
}

impl Shape {
    pub fn constant() -> Self {
        Shape::Piecewise {
            breakpoints: Vec::new(),
            mode: None,
        }
    }

    /// True when scalar suprema can be computed without a grid.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Shape::General { .. })
    }

    /// Breakpoints per axis for grid injection.
    pub fn breakpoints(&self, dim: usize) -> Vec<Vec<f64>> {
        match self {
            Shape::General { breakpoints } => breakpoints.clone(),
            Shape::Unimodal { mode } => vec![vec![*mode]],
            Shape::Piecewise { breakpoints, mode } => {
                let mut b = breakpoints.clone();
                b.extend(mode.iter().copied());
                vec![b]
            }
        }
        .into_iter()
        .chain(std::iter::repeat(Vec::new()))
        .take(dim)
        .collect()
    }

    fn scalar_breaks(&self) -> Vec<f64> {
        match self {
            Shape::General { breakpoints } => breakpoints.first().cloned().unwrap_or_default(),
            Shape::Unimodal { .. } => Vec::new(),
            Shape::Piecewise { breakpoints, .. } => breakpoints.clone(),
        }
    }

    /// Shape of a monotone pointwise combination of two contours.
    pub fn combine(a: &Shape, b: &Shape, dim: usize) -> Shape {
        use Shape::*;
        let merged = |x: &[f64], y: &[f64]| {
            let mut v: Vec<f64> = x.iter().chain(y).copied().collect();
            v.sort_by(|p, q| p.partial_cmp(q).unwrap());
            v.dedup();
            v
        };
        match (a, b) {
            (Unimodal { mode: m1 }, Unimodal { mode: m2 }) if m1 == m2 => Unimodal { mode: *m1 },
            (Unimodal { mode }, Piecewise { breakpoints, mode: pm })
            | (Piecewise { breakpoints, mode: pm }, Unimodal { mode })
                if pm.is_none() || *pm == Some(*mode) =>
            {
                Piecewise {
                    breakpoints: breakpoints.clone(),
                    mode: Some(*mode),
                }
            }
            (
                Piecewise {
                    breakpoints: b1,
                    mode: m1,
                },
                Piecewise {
                    breakpoints: b2,
                    mode: m2,
                },
            ) if m1.is_none() || m2.is_none() || m1 == m2 => Piecewise {
                breakpoints: merged(b1, b2),
                mode: m1.or(*m2),
            },
            _ if dim == 1 => General {
                breakpoints: vec![merged(&a.scalar_breaks(), &b.scalar_breaks())],
            },
            _ => {
                let ba = a.breakpoints(dim);
                let bb = b.breakpoints(dim);
                General {
                    breakpoints: ba.iter().zip(&bb).map(|(x, y)| merged(x, y)).collect(),
                }
            }
        }
    }
}

type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type LimitFn = dyn Fn(f64, Side) -> f64 + Send + Sync;

/// A plausibility contour.
#[derive(Clone)]
pub struct Contour {
    eval: Arc<EvalFn>,
    limit: Option<Arc<LimitFn>>,
    dim: usize,
    bounds: Vec<(f64, f64)>,
    shape: Shape,
}

impl fmt::Debug for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Contour")
            .field("dim", &self.dim)
            .field("bounds", &self.bounds)
            .field("shape", &self.shape)
            .finish_non_exhaustive()
    }
}

/// Grid step used when a caller does not supply a grid.
pub fn default_step(dim: usize) -> f64 {
    match dim {
        1 => 0.005,
        2 => 0.02,
        _ => 0.25,
    }
}

impl Contour {
    pub fn new(
        dim: usize,
        bounds: Vec<(f64, f64)>,
        shape: Shape,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(bounds.len(), dim, "one bounding interval per dimension");
        Contour {
            eval: Arc::new(eval),
            limit: None,
            dim,
            bounds,
            shape,
        }
    }

    /// Attaches one-sided limits for a scalar contour with jumps.
    pub fn with_limit(mut self, limit: impl Fn(f64, Side) -> f64 + Send + Sync + 'static) -> Self {
        self.limit = Some(Arc::new(limit));
        self
    }

    pub fn constant(dim: usize, bounds: Vec<(f64, f64)>, value: f64) -> Self {
        Contour::new(dim, bounds, Shape::constant(), move |_| value)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Value at `p`, clamped into `[0, 1]`.
    pub fn eval(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.dim);
        let v = (self.eval)(p);
        if v.is_nan() {
            0.0
        } else {
            v.clamp(0.0, 1.0)
        }
    }

    pub fn try_eval(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: p.len(),
            });
        }
        Ok(self.eval(p))
    }

    /// Scalar shorthand.
    pub fn at(&self, x: f64) -> f64 {
        self.eval(&[x])
    }

    /// One-sided limit of a scalar contour at `x`.
    pub fn limit(&self, x: f64, side: Side) -> f64 {
        match &self.limit {
            Some(l) => l(x, side).clamp(0.0, 1.0),
            None => self.at(x),
        }
    }

    /// Grid spanning the bounding box at the default step.
    pub fn default_grid(&self) -> GridSpec {
        self.grid_with_step(default_step(self.dim))
    }

    pub fn grid_with_step(&self, step: f64) -> GridSpec {
        GridSpec::new(
            self.bounds
                .iter()
                .map(|&(lo, hi)| Axis::new(lo, hi.max(lo + step), step).expect("valid bounds"))
                .collect(),
        )
        .expect("non-empty")
    }

    pub fn breakpoints(&self) -> Vec<Vec<f64>> {
        self.shape.breakpoints(self.dim)
    }

    /// Pointwise `op(self, other)`; `op` must be non-decreasing in both
    /// arguments.
    pub fn zip_with(
        &self,
        other: &Contour,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static,
    ) -> Result<Contour> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let bounds = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| (a.0.min(b.0), a.1.max(b.1)))
            .collect();
        let shape = Shape::combine(&self.shape, &other.shape, self.dim);
        let (a, b) = (self.clone(), other.clone());
        let op_eval = op.clone();
        let mut out = Contour::new(self.dim, bounds, shape, move |p| {
            op_eval(a.eval(p), b.eval(p))
        });
        if self.limit.is_some() || other.limit.is_some() {
            let (a, b) = (self.clone(), other.clone());
            out = out.with_limit(move |x, s| op(a.limit(x, s), b.limit(x, s)));
        }
        Ok(out)
    }

    /// Pointwise `f(self)`; `f` must be non-decreasing.
    pub fn map(&self, f: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static) -> Contour {
        let a = self.clone();
        let f_eval = f.clone();
        let mut out = Contour::new(self.dim, self.bounds.clone(), self.shape.clone(), move |p| {
            f_eval(a.eval(p))
        });
        if self.limit.is_some() {
            let a = self.clone();
            out = out.with_limit(move |x, s| f(a.limit(x, s)));
        }
        out
    }

    pub fn scale(&self, k: f64) -> Contour {
        self.map(move |v| k * v)
    }

    pub fn product(&self, other: &Contour) -> Result<Contour> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn minimum(&self, other: &Contour) -> Result<Contour> {
        self.zip_with(other, f64::min)
    }

    /// Replaces the recommended bounding box.
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Contour {
        assert_eq!(bounds.len(), self.dim);
        self.bounds = bounds;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent(mode: f64) -> Contour {
        Contour::new(1, vec![(mode - 1.0, mode + 1.0)], Shape::Unimodal { mode }, move |p| {
            1.0 - (p[0] - mode).abs()
        })
    }

    #[test]
    fn eval_is_clamped() {
        let c = tent(0.0);
        assert_eq!(c.at(5.0), 0.0);
        assert_eq!(c.at(0.0), 1.0);
        assert_eq!(c.scale(3.0).at(0.0), 1.0);
    }

    #[test]
    fn shape_combination_rules() {
        let steps = Shape::Piecewise {
            breakpoints: vec![1.0, 2.0],
            mode: None,
        };
        let uni = Shape::Unimodal { mode: 0.5 };
        assert_eq!(
            Shape::combine(&uni, &steps, 1),
            Shape::Piecewise {
                breakpoints: vec![1.0, 2.0],
                mode: Some(0.5)
            }
        );
        let other = Shape::Unimodal { mode: 0.7 };
        assert!(matches!(Shape::combine(&uni, &other, 1), Shape::General { .. }));
        assert_eq!(Shape::combine(&uni, &uni, 1), uni);
    }

    #[test]
    fn zip_carries_limits_and_breakpoints() {
        let step = Contour::new(
            1,
            vec![(0.0, 3.0)],
            Shape::Piecewise {
                breakpoints: vec![1.0],
                mode: None,
            },
            |p| if p[0] >= 1.0 { 1.0 } else { 0.2 },
        )
        .with_limit(|x, s| match s {
            Side::Left if x <= 1.0 => 0.2,
            Side::Right if x < 1.0 => 0.2,
            _ => 1.0,
        });
        let prod = tent(0.5).product(&step).unwrap();
        assert!((prod.limit(1.0, Side::Left) - 0.1).abs() < 1e-12);
        assert!((prod.limit(1.0, Side::Right) - 0.5).abs() < 1e-12);
        assert_eq!(prod.breakpoints(), vec![vec![1.0, 0.5]]);
        assert_eq!(prod.bounds(), &[(-0.5, 3.0)]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let c = tent(0.0);
        let d = Contour::constant(2, vec![(0.0, 1.0); 2], 1.0);
        assert!(matches!(c.product(&d), Err(Error::DimensionMismatch { .. })));
        assert!(c.try_eval(&[0.0, 1.0]).is_err());
    }
}
