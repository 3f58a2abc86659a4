//! Random graphs, cluster analysis and percolation estimators.

mod bernoulli;
mod continuum;
mod graph;
mod union_find;

pub use bernoulli::{
    estimate_theta_lattice, lattice_origin_hits, sample_bernoulli_site_bond, CoupledUniforms,
    LatticeThetaParams, PercolationEstimate, SiteBondSample,
};
pub use continuum::{
    boundary_connected_count, estimate_theta_continuum, random_edges, sample_poisson_random_edge,
    ConnectionRule, ContinuumThetaParams,
};
pub use graph::{clusters, Graph};
pub use union_find::UnionFind;
