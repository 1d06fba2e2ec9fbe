#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod functional;
pub mod gfunction;
pub mod hypothesis;
pub mod mountain_pass;
pub mod numerics;
pub mod orlicz_space;
pub mod report;
pub mod sampling;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use gfunction::GFunctionSpec;
pub use report::{Report, ToReport};
pub use sampling::SamplingPlan;
