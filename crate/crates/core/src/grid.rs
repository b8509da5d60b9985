//! Rectangular evaluation grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One grid axis `lo, lo + step, …, ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::invalid("grid bounds and step must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::invalid(format!("grid step must be positive, got {step}")));
        }
        if lo >= hi {
            return Err(Error::invalid(format!("grid needs lo < hi, got {lo} >= {hi}")));
        }
        Ok(Axis { lo, hi, step })
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Regular points with the in-range breakpoints added.
    pub fn points_with(&self, breakpoints: &[f64]) -> Vec<f64> {
        let mut pts = self.points();
        pts.extend(breakpoints.iter().copied().filter(|b| *b >= self.lo && *b <= self.hi));
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// Regular points, with the point nearest to each in-range breakpoint
    /// moved exactly onto it. Keeps the cell count uniform while making sure
    /// measure-zero features such as coordinate axes are sampled.
    pub fn points_snapped(&self, breakpoints: &[f64]) -> Vec<f64> {
        let mut pts = self.points();
        let last = pts.len() - 1;
        for &b in breakpoints {
            if !(b >= self.lo - 0.5 * self.step && b <= self.point(last) + 0.5 * self.step) {
                continue;
            }
            let i = (((b - self.lo) / self.step).round().max(0.0) as usize).min(last);
            pts[i] = b;
        }
        pts
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `lo:hi:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(s, "expected lo:hi:step"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::parse(s, e.to_string()))
        };
        Axis::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// A product grid, one axis per parameter dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("grid needs at least one axis"));
        }
        Ok(GridSpec { axes })
    }

    pub fn scalar(lo: f64, hi: f64, step: f64) -> Result<Self> {
        Self::new(vec![Axis::new(lo, hi, step)?])
    }

    /// Same axis repeated `dim` times.
    pub fn cube(dim: usize, lo: f64, hi: f64, step: f64) -> Result<Self> {
        Self::new(vec![Axis::new(lo, hi, step)?; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    /// Mesh of regular points with breakpoints inserted per axis.
    pub fn mesh_with(&self, breakpoints: &[Vec<f64>]) -> Mesh {
        Mesh::new(
            self.axes
                .iter()
                .enumerate()
                .map(|(i, a)| a.points_with(breakpoints.get(i).map(Vec::as_slice).unwrap_or(&[])))
                .collect(),
        )
    }

    /// Mesh of regular points with breakpoints snapped per axis.
    pub fn mesh_snapped(&self, breakpoints: &[Vec<f64>]) -> Mesh {
        Mesh::new(
            self.axes
                .iter()
                .enumerate()
                .map(|(i, a)| a.points_snapped(breakpoints.get(i).map(Vec::as_slice).unwrap_or(&[])))
                .collect(),
        )
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:step[,lo:hi:step…]`.
    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .split(',')
            .map(str::parse::<Axis>)
            .collect::<Result<Vec<_>>>()?;
        GridSpec::new(axes)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Explicit tensor-product point set, indexed in row-major order with the
/// last axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    coords: Vec<Vec<f64>>,
    len: usize,
}

impl Mesh {
    pub fn new(coords: Vec<Vec<f64>>) -> Self {
        let len = coords.iter().map(Vec::len).product();
        Mesh { coords, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn axis_coords(&self, i: usize) -> &[f64] {
        &self.coords[i]
    }

    /// Writes the `idx`-th point into `buf`.
    pub fn point_into(&self, mut idx: usize, buf: &mut [f64]) {
        for d in (0..self.coords.len()).rev() {
            let n = self.coords[d].len();
            buf[d] = self.coords[d][idx % n];
            idx /= n;
        }
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let mut buf = vec![0.0; self.coords.len()];
        self.point_into(idx, &mut buf);
        buf
    }

    /// Index of the mesh point nearest to `p`, or `None` outside the hull.
    pub fn nearest_index(&self, p: &[f64]) -> Option<usize> {
        let mut idx = 0;
        for (d, xs) in self.coords.iter().enumerate() {
            let x = p[d];
            if x < xs[0] || x > xs[xs.len() - 1] {
                return None;
            }
            let j = xs.partition_point(|c| *c < x);
            let k = if j == 0 {
                0
            } else if j == xs.len() || (x - xs[j - 1]) <= (xs[j] - x) {
                j - 1
            } else {
                j
            };
            idx = idx * xs.len() + k;
        }
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_counts_include_endpoint() {
        let a = Axis::new(0.0, 1.0, 0.25).unwrap();
        assert_eq!(a.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Axis::new(-2.0, 4.0, 0.01).unwrap().len(), 601);
    }

    #[test]
    fn axis_rejects_bad_specs() {
        assert!(Axis::new(0.0, 1.0, 0.0).is_err());
        assert!(Axis::new(1.0, 1.0, 0.1).is_err());
        assert!("0:1".parse::<Axis>().is_err());
        assert!("a:1:0.1".parse::<Axis>().is_err());
    }

    #[test]
    fn breakpoints_inserted_or_snapped() {
        let a = Axis::new(-0.3, 0.3, 0.1).unwrap();
        let inserted = a.points_with(&[0.05, 7.0]);
        assert!(inserted.contains(&0.05) && !inserted.contains(&7.0));
        assert_eq!(inserted.len(), a.len() + 1);
        let snapped = a.points_snapped(&[0.0, 0.16, 9.0]);
        assert!(snapped.contains(&0.0) && snapped.contains(&0.16));
        assert_eq!(snapped.len(), a.len());
        assert!(snapped.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mesh_indexing() {
        let g: GridSpec = "0:1:0.5,10:12:1".parse().unwrap();
        let m = g.mesh_with(&[]);
        assert_eq!(m.len(), 9);
        assert_eq!(m.point(0), vec![0.0, 10.0]);
        assert_eq!(m.point(5), vec![0.5, 12.0]);
        assert_eq!(m.nearest_index(&[0.6, 11.2]), Some(4));
        assert_eq!(m.nearest_index(&[2.0, 11.0]), None);
    }
}
