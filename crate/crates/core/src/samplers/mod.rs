//! The random thinning map `F`, the Gibbs-sampler chain built from it,
//! dominated coupling from the past and continuum Swendsen-Wang.
//!
//! Randomness is keyed by `(seed, purpose, time, replica)`: the map used at
//! a given time index is the same in every run, which is what makes coupling
//! from the past work.

mod cftp;
mod io;
mod mcmc;
pub(crate) mod random_map;
mod setup;
mod swendsen_wang;

pub use cftp::{cftp_sample, CftpOutcome, CftpSchedule};
pub use io::{write_sample_csv, RunMetadata};
pub use mcmc::{mcmc_final, mcmc_run, mcmc_visit};
pub use random_map::RandomMapRealization;
pub use setup::{BoundaryCondition, SamplerSetup};
pub use swendsen_wang::{swendsen_wang_recolor, swendsen_wang_run, swendsen_wang_step};

use rayon::prelude::*;

use crate::error::Result;
use crate::model::Particle;

/// `F` applied to `input` with the realization of `species` at `time`.
pub fn apply_f(
    setup: &SamplerSetup,
    boundary: &[Particle],
    replica: u64,
    time: i64,
    species: crate::model::Species,
    input: &[Particle],
) -> Vec<Particle> {
    setup.apply(boundary, replica, time, species, input)
}

/// Independent CFTP samples for replicas `first..first + count`, in replica order.
pub fn cftp_replicas(setup: &SamplerSetup, schedule: &CftpSchedule, first: u64, count: usize) -> Vec<Result<CftpOutcome>> {
    (0..count as u64)
        .into_par_iter()
        .map(|r| cftp_sample(setup, schedule, first + r))
        .collect()
}
