//! Bipolar-scale algebra of aggregation operators.
//!
//! Builds symmetric pseudo-additions and pseudo-multiplications on `[-1, 1]`
//! from t-conorms and t-norms, relates them to uninorms on `[0, 1]`, and
//! audits the algebraic laws they satisfy or break.

pub mod audit;
pub mod conorms;
pub mod differences;
pub mod enumerate;
pub mod error;
pub mod generator;
pub mod ops;
pub mod plan;
pub mod scale;
pub mod symmetric;
pub mod uninorms;

pub use error::{Error, Result, ScaleError};
pub use plan::SamplingPlan;
pub use scale::{BipolarValue, ExtendedReal, InfinityMode, SignValue, UnitValue};
