//! Plumbing behind the `wiretap` binary: figure definitions, the self-test
//! suite and curve output.

pub mod error;
pub mod figures;
pub mod output;
pub mod selftest;

pub use error::CliError;
