//! Persistence diagrams of random point clouds viewed as discrete measures,
//! persistence surfaces as kernel density estimators of the expected
//! diagram, and cross-validated bandwidth selection.
//!
//! The pipeline runs point cloud → filtration → diagram → weighted measure
//! → surface, with [`bandwidth::select_bandwidth`] choosing the kernel
//! bandwidth and [`bandwidth::mc_expected_density`] providing a Monte Carlo
//! histogram of the expected diagram to check against.

pub mod error;
pub mod experiment;
pub mod filtration;
pub mod geometry;
pub mod io;
pub mod persistence;
pub mod representation;
pub mod bandwidth;
pub mod rng;

pub use error::{Error, Result};
