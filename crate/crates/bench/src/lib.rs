//! Benchmark fixtures.

use rcsim_core::geometry::Window;
use rcsim_core::model::{ActivityParams, Potential};
use rcsim_core::samplers::{BoundaryCondition, SamplerSetup};

/// Soft-potential setup on a `side x side` window with a plus boundary.
pub fn plus_setup(side: f64, z: f64) -> SamplerSetup {
    SamplerSetup::new(
        Window::cube(2, side).unwrap().with_collar(1.0).unwrap(),
        ActivityParams::symmetric(z).unwrap(),
        Potential::paper_soft(),
        BoundaryCondition::PlusPoisson { z, per_step: false },
        1,
    )
    .unwrap()
}

/// Same without boundary particles.
pub fn free_setup(side: f64, z: f64) -> SamplerSetup {
    SamplerSetup::new(
        Window::cube(2, side).unwrap(),
        ActivityParams::symmetric(z).unwrap(),
        Potential::paper_soft(),
        BoundaryCondition::Free,
        1,
    )
    .unwrap()
}
