//! Shared fixtures for the benchmarks: the running scalar example and the
//! two-dimensional sparse demo.

use pim_core::sparse::SparseDemoConfig;
use pim_core::{FocalPrior, IntervalPrior, ScalarNormalModel};

pub fn running_model() -> ScalarNormalModel {
    ScalarNormalModel::new(10).expect("valid sample size")
}

pub fn running_prior() -> IntervalPrior {
    IntervalPrior::new(1.0, 2.0, 0.1).expect("valid prior")
}

pub fn running_focal() -> FocalPrior {
    running_prior().to_focal()
}

/// Sparse demo with a small validifier budget.
pub fn sparse_config(mc_reps: usize) -> SparseDemoConfig {
    SparseDemoConfig {
        mc_reps,
        ..SparseDemoConfig::demo(1)
    }
}
