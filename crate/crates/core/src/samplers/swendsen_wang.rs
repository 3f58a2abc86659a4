use super::setup::SamplerSetup;
use crate::error::Result;
use crate::geometry::{derive_stream, Purpose, StreamKey};
use crate::model::{Particle, Species, SpinPointConfig};
use crate::random_cluster::{couple_graph_to_particles, couple_particles_to_graph};

/// One continuum Swendsen-Wang step at sweep index `t`:
/// join equal-species particles by random edges (boundary particles wired and
/// plus), recolor clusters by fair coins with the boundary cluster plus, then
/// refresh positions with `X+ = F+_t(X-)`, `X- = F-_t(X+)`.
pub fn swendsen_wang_step(
    setup: &SamplerSetup,
    boundary: &[Particle],
    state: &SpinPointConfig,
    t: i64,
    replica: u64,
) -> Result<SpinPointConfig> {
    let fresh;
    let boundary = if setup.resamples_boundary() {
        fresh = setup.boundary_points_at(replica, t);
        &fresh[..]
    } else {
        boundary
    };
    let recolored = swendsen_wang_recolor(setup, boundary, state, t, replica)?;
    Ok(refresh(setup, boundary, recolored, t, replica))
}

/// The cluster move alone, without position refresh.
pub fn swendsen_wang_recolor(
    setup: &SamplerSetup,
    boundary: &[Particle],
    state: &SpinPointConfig,
    t: i64,
    replica: u64,
) -> Result<SpinPointConfig> {
    let mut edge_rng = derive_stream(setup.seed, StreamKey::new(Purpose::ClusterEdges, t, replica));
    let mut coin_rng = derive_stream(setup.seed, StreamKey::new(Purpose::Coloring, t, replica));
    let mut rc = couple_particles_to_graph(state, boundary, &setup.window, &setup.potential, &mut edge_rng)?;
    Ok(couple_graph_to_particles(&mut rc, &mut coin_rng))
}

fn refresh(setup: &SamplerSetup, boundary: &[Particle], state: SpinPointConfig, t: i64, replica: u64) -> SpinPointConfig {
    let plus = setup.apply(boundary, replica, t, Species::Plus, &state.minus);
    let minus = setup.apply(boundary, replica, t, Species::Minus, &plus);
    SpinPointConfig::new(plus, minus)
}

/// Runs `steps` Swendsen-Wang steps from `init`, using sweep indices
/// `first_t, first_t + 1, ...`, and returns every visited state after `init`.
pub fn swendsen_wang_run(
    setup: &SamplerSetup,
    init: SpinPointConfig,
    first_t: i64,
    steps: usize,
    replica: u64,
) -> Result<Vec<SpinPointConfig>> {
    let boundary = setup.boundary_points(replica);
    let mut out = Vec::with_capacity(steps);
    let mut state = init;
    for s in 0..steps {
        state = swendsen_wang_step(setup, &boundary, &state, first_t + s as i64, replica)?;
        out.push(state.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Window};
    use crate::model::{ActivityParams, Potential};
    use crate::samplers::BoundaryCondition;

    fn setup(pot: Potential) -> SamplerSetup {
        SamplerSetup::new(
            Window::cube(2, 3.0).unwrap(),
            ActivityParams::symmetric(1.0).unwrap(),
            pot,
            BoundaryCondition::Free,
            4,
        )
        .unwrap()
    }

    #[test]
    fn zero_potential_splits_species_evenly() {
        let s = setup(Potential::Soft { c: 0.0, r_max: 1.0, exponent: 2.0 });
        let pts: Vec<Point> = (0..6).map(|i| Point::xy(0.4 * i as f64 + 0.1, 1.0)).collect();
        let cfg = SpinPointConfig::from_points(&pts, &[]);
        let n = 10_000;
        let mut plus = 0usize;
        for t in 0..n {
            plus += swendsen_wang_recolor(&s, &[], &cfg, t, 0).unwrap().plus.len();
        }
        let total = (6 * n) as f64;
        assert!((plus as f64 - total / 2.0).abs() < 3.0 * (total / 4.0).sqrt());
    }

    #[test]
    fn hard_core_pair_keeps_one_color() {
        let s = setup(Potential::HardCore { r: 0.3 });
        let cfg = SpinPointConfig::from_points(&[Point::xy(1.0, 1.0), Point::xy(1.5, 1.0)], &[]);
        for t in 0..500 {
            let out = swendsen_wang_recolor(&s, &[], &cfg, t, 0).unwrap();
            assert!(out.plus.len() == 2 || out.minus.len() == 2);
        }
    }

    #[test]
    fn run_is_deterministic() {
        let s = setup(Potential::paper_soft());
        let a = swendsen_wang_run(&s, SpinPointConfig::default(), 1, 20, 0).unwrap();
        let b = swendsen_wang_run(&s, SpinPointConfig::default(), 1, 20, 0).unwrap();
        assert_eq!(a, b);
    }
}
