//! Rearrangement calculus on `(0, 1]`, truncation and symmetrization on
//! discretized domains, Hardy-operator criteria, and harnesses that measure
//! the constants of Sobolev–Poincaré inequalities.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar for everyday use. Verification harnesses and
//! file formats work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod domain;
pub mod error;
pub mod hardy;
pub mod io;
pub mod majorize;
pub mod profile;
pub mod quad;
pub mod scalar;
pub mod space;
pub mod stepfn;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StepFunction = stepfn::StepFunction<f64>;
pub type MonotoneStep = stepfn::MonotoneStep<f64>;
pub type Profile = profile::Profile<f64>;
pub type RISpaceSpec = space::RISpaceSpec<f64>;
pub type Shape = domain::Shape<f64>;
pub type GridDomain = domain::GridDomain<f64>;
pub type SampledFunction = domain::SampledFunction<f64>;
pub type HardyParams = hardy::HardyParams<f64>;
pub type IntervalFamily = majorize::IntervalFamily<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type StepFunction = crate::stepfn::StepFunction<f32>;
    pub type MonotoneStep = crate::stepfn::MonotoneStep<f32>;
    pub type Profile = crate::profile::Profile<f32>;
    pub type RISpaceSpec = crate::space::RISpaceSpec<f32>;
    pub type Shape = crate::domain::Shape<f32>;
    pub type GridDomain = crate::domain::GridDomain<f32>;
    pub type SampledFunction = crate::domain::SampledFunction<f32>;
    pub type HardyParams = crate::hardy::HardyParams<f32>;
    pub type IntervalFamily = crate::majorize::IntervalFamily<f32>;
}
