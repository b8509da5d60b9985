//! Rules that combine the vacuous-prior contour with partial prior
//! information.

mod aggregation;
mod dempster;
mod gbayes;
pub mod running;
mod tnorm;

use std::fmt;
use std::str::FromStr;

pub use aggregation::{aggregate_hose, aggregate_hose_normalized, aggregate_squared, DEFAULT_WEIGHT};
pub use dempster::{dempster_combine, DempsterIm};
pub use gbayes::{conjugate_posterior, gbayes_upper, GBayesPosterior};
pub use tnorm::{tnorm_combine, TNorm};

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::models::ScalarNormalModel;
use crate::priors::FocalPrior;

/// Level-α product test: reject "Θ ∈ A" when `Π̄_Y(A) · Q̄(A) ≤ α`.
///
/// Returns the product, which serves as the p-value.
pub fn product_test_pvalue(plaus: f64, prior_upper: f64) -> Result<f64> {
    for (name, v) in [("plausibility", plaus), ("prior upper probability", prior_upper)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    Ok(plaus * prior_upper)
}

/// Combiner selection as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombinerSpec {
    Vacuous,
    Hose(f64),
    Squared,
    Dempster,
    TNorm(TNorm),
    GBayes,
}

impl CombinerSpec {
    /// Column-safe label, e.g. `hose_0.5` or `tnorm_product`.
    pub fn label(&self) -> String {
        self.to_string().replace(':', "_")
    }

    /// Contour of the combined IM for the scalar normal model at `y`.
    ///
    /// The Dempster entry is the contour `ϑ ↦ Π̄({ϑ})` of a non-consonant IM.
    pub fn contour(&self, model: &ScalarNormalModel, prior: &FocalPrior, y: f64) -> Result<Contour> {
        let pi_y = model.vacuous_contour(y);
        match *self {
            CombinerSpec::Vacuous => Ok(pi_y),
            CombinerSpec::Hose(w) => aggregate_hose(&pi_y, &prior.contour(), w),
            CombinerSpec::Squared => aggregate_squared(&pi_y, &prior.contour()),
            CombinerSpec::Dempster => Ok(dempster_combine(prior, &pi_y)?.contour()),
            CombinerSpec::TNorm(t) => tnorm_combine(&pi_y, &prior.contour(), t),
            CombinerSpec::GBayes => Err(Error::invalid(
                "the generalized Bayes envelope has no plausibility contour",
            )),
        }
    }
}

impl fmt::Display for CombinerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombinerSpec::Vacuous => write!(f, "vacuous"),
            CombinerSpec::Hose(w) => write!(f, "hose:{w}"),
            CombinerSpec::Squared => write!(f, "squared"),
            CombinerSpec::Dempster => write!(f, "dempster"),
            CombinerSpec::TNorm(TNorm::Product) => write!(f, "tnorm:product"),
            CombinerSpec::TNorm(TNorm::Minimum) => write!(f, "tnorm:min"),
            CombinerSpec::GBayes => write!(f, "gbayes"),
        }
    }
}

impl FromStr for CombinerSpec {
    type Err = Error;

    /// `vacuous | hose:w | squared | dempster | tnorm:product | tnorm:min | gbayes`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "vacuous" => return Ok(CombinerSpec::Vacuous),
            "squared" => return Ok(CombinerSpec::Squared),
            "dempster" => return Ok(CombinerSpec::Dempster),
            "gbayes" => return Ok(CombinerSpec::GBayes),
            "hose" => return Ok(CombinerSpec::Hose(DEFAULT_WEIGHT)),
            "tnorm" | "tnorm:product" => return Ok(CombinerSpec::TNorm(TNorm::Product)),
            "tnorm:min" | "tnorm:minimum" => return Ok(CombinerSpec::TNorm(TNorm::Minimum)),
            _ => {}
        }
        if let Some(w) = t.strip_prefix("hose:") {
            let w: f64 = w
                .parse()
                .map_err(|_| Error::parse(s, "hose weight must be a number"))?;
            if !(w > 0.0 && w < 1.0) {
                return Err(Error::parse(s, "hose weight must lie in (0, 1)"));
            }
            return Ok(CombinerSpec::Hose(w));
        }
        Err(Error::parse(s, "unknown combiner"))
    }
}

/// Parses a comma-separated combiner list.
pub fn parse_combiner_list(s: &str) -> Result<Vec<CombinerSpec>> {
    let list = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(Error::parse(s, "no combiners given"));
    }
    Ok(list)
}
