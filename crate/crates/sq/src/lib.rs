//! File formats, property suites and the command-line front end for `sq-core`.

pub mod cli;
pub mod formats;
pub mod specs;
pub mod suite;
pub mod work;

/// An error caused by the invocation rather than the computation; exits with code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);
