//! Finite quandles, constant cocycle cohomology and simple-connectedness.
//!
//! Groups and quandles are stored as operation tables on `0..n`. The crate
//! is `no_std` (it needs `alloc`); the `std` feature only adds
//! `std::error::Error` support through the error type.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod arith;
pub mod catalog;
pub mod cocycle;
pub mod cohomology;
pub mod construct;
pub mod corpus;
pub mod error;
pub mod families;
pub mod group;
pub mod iso;
pub mod linalg;
pub mod partition;
pub mod pc;
pub mod perm;
pub mod quandle;
pub mod simply;

pub use error::{Error, Result};
