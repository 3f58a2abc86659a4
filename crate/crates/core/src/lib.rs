//! Gibbsian lattice and continuum particle models, their random-cluster
//! representations, percolation estimators and exact samplers.

pub mod error;
pub mod geometry;
pub mod model;
pub mod percolation;
pub mod random_cluster;
pub mod samplers;
pub mod stats;

pub use error::{Error, Result};
