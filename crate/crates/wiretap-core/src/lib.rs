//! Reliability and secrecy exponents for wiretap channels with a cost constraint.
//!
//! Finite-alphabet pairs go through [`exponent::ExponentQuery`]; the discretized
//! Poisson and the Gaussian wiretap channels have closed forms in [`poisson`] and
//! [`gaussian`]. [`ensemble`] evaluates random-coding averages exactly at tiny
//! block lengths.

pub mod capacity;
pub mod channel;
pub mod config;
pub mod curve;
pub mod ensemble;
pub mod error;
pub mod exponent;
pub mod gaussian;
pub mod metrics;
pub mod numeric;
pub mod poisson;
pub mod tradeoff;

pub use channel::{CostedInput, DiscreteChannel, WiretapPair};
pub use curve::{CurvePoint, ExponentCurve};
pub use error::{Error, Result};
pub use exponent::{ExponentQuery, ExponentValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
