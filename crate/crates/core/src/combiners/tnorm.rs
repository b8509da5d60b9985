use crate::contour::Contour;
use crate::error::Result;
use crate::possibility::normalize;

/// Triangular norm used to conjoin two contours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TNorm {
    #[default]
    Product,
    Minimum,
}

impl TNorm {
    pub fn apply(&self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.min(b),
        }
    }
}

/// `π_y(ϑ) ⋆ q(ϑ) / sup_t {π_y(t) ⋆ q(t)}`.
///
/// The normalizer is exact for scalar structured contours (e.g. the normal
/// vacuous contour against a piecewise-constant prior), otherwise a grid
/// supremum with breakpoints injected.
pub fn tnorm_combine(pi_y: &Contour, q: &Contour, t: TNorm) -> Result<Contour> {
    let joined = pi_y.zip_with(q, move |a, b| t.apply(a, b))?;
    normalize(&joined, &joined.default_grid())
}
