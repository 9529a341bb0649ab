//! Ordinal-pattern analysis of time series on the complexity–entropy plane.

pub mod error;
pub mod gen_chaos;
pub mod gen_noise;
pub mod measures;
pub mod ordinal;
pub mod plane;
pub mod seed;
pub mod series;

pub use error::{Error, Result};
