//! Closed forms for the scalar normal model with an interval prior
//! `q = β + (1 − β) 1[a, b]`, usable as independent cross-checks of the
//! general combiners.

use crate::models::ScalarNormalModel;
use crate::priors::IntervalPrior;

/// Dempster contour `π_y q / {β + (1 − β)(1[y ∈ [a,b]] + π_y(a) 1[y < a] + π_y(b) 1[y > b])}`.
pub fn dempster_contour(model: &ScalarNormalModel, prior: &IntervalPrior, y: f64, theta: f64) -> f64 {
    let pi = |t: f64| model.contour_value(y, t);
    let IntervalPrior { a, b, beta } = *prior;
    let fit = if y < a {
        pi(a)
    } else if y > b {
        pi(b)
    } else {
        1.0
    };
    pi(theta) * prior.q(theta) / (beta + (1.0 - beta) * fit)
}

/// Product t-norm normalizer `sup_t π_y(t) q(t)`:
/// 1 on `[a, b]`, `β ∨ π_y(a)` below, `β ∨ π_y(b)` above.
pub fn tnorm_normalizer(model: &ScalarNormalModel, prior: &IntervalPrior, y: f64) -> f64 {
    let pi = |t: f64| model.contour_value(y, t);
    let IntervalPrior { a, b, beta } = *prior;
    if y < a {
        beta.max(pi(a))
    } else if y > b {
        beta.max(pi(b))
    } else {
        1.0
    }
}

/// Variant normalizer with a `(1 − β) ∨ π_y(b)` term for `y > b`. Not the
/// definition; kept so tests can show where the two depart.
pub fn tnorm_normalizer_variant(model: &ScalarNormalModel, prior: &IntervalPrior, y: f64) -> f64 {
    let IntervalPrior { b, beta, .. } = *prior;
    if y > b {
        (1.0 - beta).max(model.contour_value(y, b))
    } else {
        tnorm_normalizer(model, prior, y)
    }
}

/// Consonance-preserving (product t-norm) contour.
pub fn tnorm_contour(model: &ScalarNormalModel, prior: &IntervalPrior, y: f64, theta: f64) -> f64 {
    model.contour_value(y, theta) * prior.q(theta) / tnorm_normalizer(model, prior, y)
}
