//! Plausibility regions `{ϑ : π(ϑ) > α}`.

use crate::assertion::IntervalSet;
use crate::grid::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    /// Exact scalar region.
    Intervals(IntervalSet),
    /// Grid mask; each mesh point stands for one cell of `cell_volume`.
    Mask {
        mesh: Mesh,
        inside: Vec<bool>,
        cell_volume: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub level: f64,
    pub kind: RegionKind,
}

impl Region {
    pub fn contains(&self, p: &[f64]) -> bool {
        match &self.kind {
            RegionKind::Intervals(s) => s.contains(p[0]),
            RegionKind::Mask { mesh, inside, .. } => {
                mesh.nearest_index(p).map(|i| inside[i]).unwrap_or(false)
            }
        }
    }

    /// Total length (scalar) or grid area/volume.
    pub fn measure(&self) -> f64 {
        match &self.kind {
            RegionKind::Intervals(s) => s.measure(),
            RegionKind::Mask {
                inside,
                cell_volume,
                ..
            } => inside.iter().filter(|b| **b).count() as f64 * cell_volume,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.kind {
            RegionKind::Intervals(s) => s.is_empty(),
            RegionKind::Mask { inside, .. } => !inside.iter().any(|b| *b),
        }
    }

    pub fn intervals(&self) -> Option<&IntervalSet> {
        match &self.kind {
            RegionKind::Intervals(s) => Some(s),
            RegionKind::Mask { .. } => None,
        }
    }
}
