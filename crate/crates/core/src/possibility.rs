//! Possibility-measure calculus on contours: upper and lower probabilities,
//! plausibility regions and normalization.

use crate::assertion::{Assertion, Interval, IntervalSet};
use crate::contour::{Contour, Shape, Side};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::region::{Region, RegionKind};

/// Anything that assigns upper probabilities to assertions.
pub trait UpperProbability {
    fn dim(&self) -> usize;

    fn upper(&self, a: &Assertion) -> Result<f64>;

    /// Conjugate lower probability `1 − upper(Aᶜ)`.
    fn lower(&self, a: &Assertion) -> Result<f64> {
        Ok(1.0 - self.upper(&a.complement())?)
    }
}

impl UpperProbability for Contour {
    fn dim(&self) -> usize {
        Contour::dim(self)
    }

    fn upper(&self, a: &Assertion) -> Result<f64> {
        upper_prob(self, a)
    }
}

fn check_dim(c: &Contour, a: &Assertion) -> Result<()> {
    if c.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: a.dim(),
        });
    }
    Ok(())
}

/// `sup_{ϑ ∈ A} c(ϑ)`.
///
/// Exact for scalar interval assertions on unimodal or piecewise contours;
/// otherwise a grid supremum over the contour's default grid with its
/// breakpoints injected.
pub fn upper_prob(c: &Contour, a: &Assertion) -> Result<f64> {
    check_dim(c, a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    if c.shape().is_exact() {
        if let Some(set) = a.as_interval_set() {
            return Ok(exact_sup(c, &set));
        }
    }
    upper_prob_on_grid(c, a, &c.default_grid())
}

/// Grid supremum over `A ∩ grid`, with breakpoints and finite assertion
/// endpoints added as extra evaluation points.
pub fn upper_prob_on_grid(c: &Contour, a: &Assertion, grid: &GridSpec) -> Result<f64> {
    check_dim(c, a)?;
    if grid.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: grid.dim(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let mut breaks = c.breakpoints();
    let mut best: f64 = 0.0;
    if let Some(set) = a.as_interval_set() {
        breaks[0].extend(set.endpoints());
        // Open endpoints: approach from inside.
        for iv in set.parts() {
            if iv.lo.is_finite() && !iv.lo_closed {
                best = best.max(c.limit(iv.lo, Side::Right));
            }
            if iv.hi.is_finite() && !iv.hi_closed {
                best = best.max(c.limit(iv.hi, Side::Left));
            }
        }
    }
    let mesh = grid.mesh_with(&breaks);
    let mut buf = vec![0.0; c.dim()];
    for i in 0..mesh.len() {
        mesh.point_into(i, &mut buf);
        if a.contains(&buf) {
            best = best.max(c.eval(&buf));
        }
    }
    Ok(best)
}

/// `1 − upper_prob(c, Aᶜ)`.
pub fn lower_prob(c: &Contour, a: &Assertion) -> Result<f64> {
    check_dim(c, a)?;
    Ok(1.0 - upper_prob(c, &a.complement())?)
}

/// The scalar cells determined by sorted breakpoints: open pieces between
/// them and the breakpoints themselves.
fn cells(breaks: &[f64]) -> Vec<Interval> {
    let mut out = Vec::with_capacity(2 * breaks.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    for &b in breaks {
        out.push(Interval::open(lo, b));
        out.push(Interval::point(b));
        lo = b;
    }
    out.push(Interval::open(lo, f64::INFINITY));
    out
}

fn sorted_breaks(shape: &Shape) -> (Vec<f64>, Option<f64>) {
    let (mut b, mode) = match shape {
        Shape::Unimodal { mode } => (Vec::new(), Some(*mode)),
        Shape::Piecewise { breakpoints, mode } => (breakpoints.clone(), *mode),
        Shape::General { .. } => unreachable!("exact path needs a structured shape"),
    };
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.dedup();
    (b, mode)
}

/// Some point strictly inside a non-degenerate interval.
fn interior_point(j: &Interval) -> f64 {
    match (j.lo.is_finite(), j.hi.is_finite()) {
        (true, true) => 0.5 * (j.lo + j.hi),
        (true, false) => j.lo + 1.0,
        (false, true) => j.hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Value at `x ∈ closure(J)`, taking one-sided limits at open ends.
fn value_in_piece(c: &Contour, j: &Interval, x: f64) -> f64 {
    if x == j.lo && !j.lo_closed {
        c.limit(x, Side::Right)
    } else if x == j.hi && !j.hi_closed {
        c.limit(x, Side::Left)
    } else {
        c.at(x)
    }
}

/// Location and value of the supremum over a piece intersection `J`.
fn piece_peak(c: &Contour, j: &Interval, mode: Option<f64>) -> (f64, f64) {
    if j.lo == j.hi {
        return (j.lo, c.at(j.lo));
    }
    let t = match mode {
        Some(m) => m.clamp(j.lo, j.hi),
        None => interior_point(j),
    };
    (t, value_in_piece(c, j, t))
}

fn exact_sup(c: &Contour, set: &IntervalSet) -> f64 {
    let (breaks, mode) = sorted_breaks(c.shape());
    let cells = cells(&breaks);
    let mut best: f64 = 0.0;
    for iv in set.parts() {
        for cell in &cells {
            let j = iv.intersect(cell);
            if j.is_empty() {
                continue;
            }
            best = best.max(piece_peak(c, &j, mode).1);
        }
    }
    best
}

/// Boundary of `{f > α}` on a monotone stretch between `outside` (where
/// `f ≤ α`) and `inside` (where `f > α`).
fn bisect_level(c: &Contour, mut outside: f64, mut inside: f64, alpha: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        if c.at(mid) > alpha {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    outside
}

fn exact_region(c: &Contour, alpha: f64, lo: f64, hi: f64) -> IntervalSet {
    let (breaks, mode) = sorted_breaks(c.shape());
    let window = Interval::closed(lo, hi);
    let mut pieces = Vec::new();
    for cell in cells(&breaks) {
        let j = cell.intersect(&window);
        if j.is_empty() {
            continue;
        }
        let (t, peak) = piece_peak(c, &j, mode);
        if peak <= alpha {
            continue;
        }
        if j.lo == j.hi || mode.is_none() {
            pieces.push(j);
            continue;
        }
        let mut out = j;
        if t > j.lo && value_in_piece(c, &j, j.lo) <= alpha {
            out.lo = bisect_level(c, j.lo, t, alpha);
            out.lo_closed = false;
        }
        if t < j.hi && value_in_piece(c, &j, j.hi) <= alpha {
            out.hi = bisect_level(c, j.hi, t, alpha);
            out.hi_closed = false;
        }
        pieces.push(out);
    }
    IntervalSet::from_intervals(pieces)
}

/// `{ϑ : c(ϑ) > α}` restricted to the grid window.
///
/// Scalar structured contours get an exact union of intervals; everything
/// else is a grid mask.
pub fn plausibility_region(c: &Contour, alpha: f64, grid: &GridSpec) -> Result<Region> {
    if grid.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: grid.dim(),
        });
    }
    if c.dim() == 1 && c.shape().is_exact() {
        let ax = grid.axis(0);
        return Ok(Region {
            level: alpha,
            kind: RegionKind::Intervals(exact_region(c, alpha, ax.lo, ax.hi)),
        });
    }
    Ok(grid_region(c, alpha, grid))
}

/// Grid-mask region, with breakpoints snapped onto the mesh so every mesh
/// point stands for one grid cell.
pub fn grid_region(c: &Contour, alpha: f64, grid: &GridSpec) -> Region {
    let mesh = grid.mesh_snapped(&c.breakpoints());
    let mut buf = vec![0.0; c.dim()];
    let inside = (0..mesh.len())
        .map(|i| {
            mesh.point_into(i, &mut buf);
            c.eval(&buf) > alpha
        })
        .collect();
    Region {
        level: alpha,
        kind: RegionKind::Mask {
            mesh,
            inside,
            cell_volume: grid.cell_volume(),
        },
    }
}

/// Supremum over the whole space: exact when the shape allows it, otherwise
/// over `grid` with breakpoints injected.
pub fn global_sup(c: &Contour, grid: &GridSpec) -> Result<f64> {
    if c.dim() == 1 && c.shape().is_exact() {
        return Ok(exact_sup(c, &IntervalSet::real_line()));
    }
    upper_prob_on_grid(c, &Assertion::Full(c.dim()), grid)
}

/// Divides `c` by its supremum.
pub fn normalize(c: &Contour, grid: &GridSpec) -> Result<Contour> {
    let sup = global_sup(c, grid)?;
    if !(sup > 0.0) || !sup.is_finite() {
        return Err(Error::ZeroContour);
    }
    if sup == 1.0 {
        return Ok(c.clone());
    }
    Ok(c.scale(1.0 / sup))
}
