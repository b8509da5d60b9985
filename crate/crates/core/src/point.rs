//! Parameter points and observations.

use crate::error::{Error, Result};

/// A point in the parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint(Vec<f64>);

impl ParamPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("parameter point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("parameter point coordinates must be finite"));
        }
        Ok(ParamPoint(coords))
    }

    pub fn scalar(x: f64) -> Self {
        ParamPoint(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ParamPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Observed data, one real per model dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation(Vec<f64>);

impl Observation {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("observation needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observation values must be finite"));
        }
        Ok(Observation(values))
    }

    pub fn scalar(y: f64) -> Self {
        Observation(vec![y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// First coordinate; the whole observation for scalar models.
    pub fn first(&self) -> f64 {
        self.0[0]
    }
}

impl AsRef<[f64]> for Observation {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
