use crate::assertion::Assertion;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::possibility::{upper_prob, UpperProbability};
use crate::priors::FocalPrior;

/// Dempster's-rule combination of a nested focal prior with the
/// vacuous-prior IM:
///
/// `Π̄(A) = Σ_{T : A ∩ T ≠ ∅} m(T) Π̄_y(A ∩ T) / Σ_T m(T) Π̄_y(T)`.
#[derive(Debug, Clone)]
pub struct DempsterIm {
    prior: FocalPrior,
    vacuous: Contour,
    denominator: f64,
}

pub fn dempster_combine(prior: &FocalPrior, vacuous: &Contour) -> Result<DempsterIm> {
    if vacuous.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: vacuous.dim(),
        });
    }
    let mut denominator = 0.0;
    for (t, m) in prior.focal() {
        denominator += m * upper_prob(vacuous, &Assertion::Intervals(t.clone()))?;
    }
    if !(denominator > 0.0) {
        return Err(Error::Conflict("Dempster normalizer is zero".into()));
    }
    Ok(DempsterIm {
        prior: prior.clone(),
        vacuous: vacuous.clone(),
        denominator,
    })
}

impl DempsterIm {
    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    /// `ϑ ↦ Π̄({ϑ}) = π_y(ϑ) q(ϑ) / denominator`.
    pub fn contour(&self) -> Contour {
        self.prior
            .contour()
            .product(&self.vacuous)
            .expect("both scalar")
            .scale(1.0 / self.denominator)
    }
}

impl UpperProbability for DempsterIm {
    fn dim(&self) -> usize {
        1
    }

    fn upper(&self, a: &Assertion) -> Result<f64> {
        let set = a.as_interval_set().ok_or(Error::DimensionMismatch {
            expected: 1,
            actual: a.dim(),
        })?;
        let mut num = 0.0;
        for (t, m) in self.prior.focal() {
            let cut = set.intersect(t);
            if cut.is_empty() {
                continue;
            }
            num += m * upper_prob(&self.vacuous, &Assertion::Intervals(cut))?;
        }
        Ok((num / self.denominator).min(1.0))
    }
}
