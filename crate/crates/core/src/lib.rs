pub mod baselines;
pub mod config;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod metrics;
pub mod robust;
pub mod scenario;
pub mod srocr;
pub mod units;
pub mod verifier;

pub use error::{Error, Result};
