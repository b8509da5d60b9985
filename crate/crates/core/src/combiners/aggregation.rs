use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::possibility::normalize;

/// Equal weight on data and prior.
pub const DEFAULT_WEIGHT: f64 = 0.5;

/// `1 ∧ (1 − w)⁻¹ π_y(ϑ) ∧ w⁻¹ q(ϑ)`, left un-normalized.
pub fn aggregate_hose(pi_y: &Contour, q: &Contour, w: f64) -> Result<Contour> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::invalid(format!("aggregation weight must lie in (0, 1), got {w}")));
    }
    pi_y.zip_with(q, move |p, r| (p / (1.0 - w)).min(r / w).min(1.0))
}

/// Aggregated contour divided by its supremum.
pub fn aggregate_hose_normalized(pi_y: &Contour, q: &Contour, w: f64) -> Result<Contour> {
    let c = aggregate_hose(pi_y, q, w)?;
    normalize(&c, &c.default_grid())
}

/// `[1 − {1 − q(ϑ)}²] ∧ [1 − {1 − π_y(ϑ)}²]`.
pub fn aggregate_squared(pi_y: &Contour, q: &Contour) -> Result<Contour> {
    let sq = |x: f64| 1.0 - (1.0 - x) * (1.0 - x);
    pi_y.zip_with(q, move |p, r| sq(p).min(sq(r)))
}
