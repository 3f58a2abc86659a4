//! Windows, distances, cell lists and replayable random streams.

mod cells;
mod lattice;
mod poisson;
pub mod rng;
mod window;

pub use cells::CellGrid;
pub use lattice::{LatticeRegion, Site};
pub use poisson::{poisson_count, sample_poisson_collar, sample_poisson_window};
pub use rng::{derive_stream, Purpose, RngStream, StreamKey};
pub use window::{BoundaryMode, Point, Window, MAX_DIM};
