//! Potentials, Hamiltonians and conditional intensities.

mod continuum;
mod lattice;
mod particles;
mod potential;

pub use continuum::{area_hamiltonian, hamiltonian_continuum, papangelou_intensity};
pub use lattice::{hamiltonian_lattice_ising, hamiltonian_lattice_wr, LatticeSpinConfig};
pub use particles::{ActivityParams, Origin, Particle, PointId, Species, SpinPointConfig};
pub use potential::{edge_prob_from_energy, Potential};
