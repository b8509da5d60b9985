//! Possibilistic inferential models with partial prior information.
//!
//! A vacuous-prior IM contour is combined with a possibility-measure prior
//! by one of several rules, and the result can be validified by Monte Carlo
//! so that the validity property holds without tuning.

pub mod assertion;
pub mod combiners;
pub mod contour;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod models;
pub mod numerics;
pub mod point;
pub mod possibility;
pub mod priors;
pub mod region;
pub mod rng;
pub mod sparse;
pub mod validify;

pub use assertion::{Assertion, Interval, IntervalSet};
pub use combiners::{CombinerSpec, TNorm};
pub use contour::{Contour, Shape, Side};
pub use error::{Error, Result};
pub use grid::{Axis, GridSpec, Mesh};
pub use models::{MvNormalModel, SamplingModel, ScalarNormalModel};
pub use point::{Observation, ParamPoint};
pub use possibility::{lower_prob, plausibility_region, upper_prob, UpperProbability};
pub use priors::{FocalPrior, IntervalPrior, PriorSpec, SparsityPrior};
pub use region::Region;
