use std::collections::HashSet;

use proptest::prelude::*;
use rcsim_core::geometry::{CellGrid, Point, Window};
use rcsim_core::model::{ActivityParams, Particle, PointId, Potential, Species, SpinPointConfig};
use rcsim_core::samplers::{
    cftp_sample, mcmc_final, swendsen_wang_run, BoundaryCondition, CftpSchedule, SamplerSetup,
};
use rcsim_core::stats::chi_square_homogeneity;
use rcsim_core::Error;

fn setup(side: f64, z: f64, bc: BoundaryCondition, seed: u64) -> SamplerSetup {
    let w = Window::cube(2, side).unwrap();
    let w = if bc == BoundaryCondition::Free { w } else { w.with_collar(1.0).unwrap() };
    SamplerSetup::new(w, ActivityParams::symmetric(z).unwrap(), Potential::paper_soft(), bc, seed).unwrap()
}

fn ids(v: &[Particle]) -> HashSet<PointId> {
    v.iter().map(|p| p.id).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_anti_monotone_and_dominated(seed in any::<u64>(), t in -1000i64..1000, mask in any::<u64>(), z in 0.5f64..3.0) {
        let s = setup(4.0, z, BoundaryCondition::Free, seed);
        let big = s.realization(7, t, Species::Plus).draws;
        let small: Vec<Particle> = big.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, p)| *p).collect();
        let y = ids(&s.realization(0, t, Species::Minus).draws);
        let f_small = ids(&s.apply(&[], 0, t, Species::Minus, &small));
        let f_big = ids(&s.apply(&[], 0, t, Species::Minus, &big));
        prop_assert!(f_big.is_subset(&f_small));
        prop_assert!(f_small.is_subset(&y));
        prop_assert_eq!(ids(&s.apply(&[], 0, t, Species::Minus, &[])), y);
    }

    #[test]
    fn cftp_chains_stay_ordered(seed in any::<u64>(), z in 0.5f64..2.5, per_step in any::<bool>()) {
        let s = setup(4.0, z, BoundaryCondition::PlusPoisson { z, per_step }, seed);
        match cftp_sample(&s, &CftpSchedule::default(), 0) {
            Ok(o) => {
                prop_assert!(o.start < 0);
                prop_assert!(o.state.plus.iter().chain(&o.state.minus).all(|p| s.window.contains(&p.pos)));
            }
            Err(Error::Invariant(m)) => prop_assert!(false, "{}", m),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn cftp_sample_ignores_schedule(seed in any::<u64>(), first in 1i64..6) {
        let s = setup(2.5, 1.0, BoundaryCondition::Free, seed);
        let a = cftp_sample(&s, &CftpSchedule::default(), 3).unwrap();
        let b = cftp_sample(&s, &CftpSchedule::geometric(-first, 24).unwrap(), 3).unwrap();
        prop_assert_eq!(a.state, b.state);
    }

    #[test]
    fn minus_particles_avoid_hard_core_boundary(seed in any::<u64>()) {
        let w = Window::cube(2, 3.0).unwrap().with_collar(1.0).unwrap();
        let s = SamplerSetup::new(
            w.clone(),
            ActivityParams::symmetric(2.0).unwrap(),
            Potential::HardCore { r: 0.4 },
            BoundaryCondition::PlusPoisson { z: 2.0, per_step: false },
            seed,
        ).unwrap();
        let b = s.boundary_points(0);
        let state = mcmc_final(&s, Vec::new(), 5, 0).unwrap();
        for m in &state.minus {
            for p in state.plus.iter().chain(&b) {
                prop_assert!(w.distance(&m.pos, &p.pos).unwrap() > 0.8);
            }
        }
    }
}

fn interspecies_pairs(s: &SpinPointConfig, w: &Window) -> usize {
    let pos: Vec<Point> = s.plus.iter().chain(&s.minus).map(|p| p.pos).collect();
    if pos.is_empty() {
        return 0;
    }
    let grid = CellGrid::build(w, &pos, 1.0).unwrap();
    let np = s.plus.len();
    grid.neighbor_pairs().into_iter().filter(|&(i, j)| (i < np) != (j < np)).count()
}

fn histogram(values: impl Iterator<Item = usize>, cells: usize) -> Vec<u64> {
    let mut h = vec![0u64; cells];
    for v in values {
        h[v.min(cells - 1)] += 1;
    }
    h
}

#[test]
fn swendsen_wang_preserves_equilibrium() {
    let s = setup(3.0, 1.0, BoundaryCondition::Free, 31);
    let n = 2000u64;
    let before: Vec<SpinPointConfig> = (0..n).map(|r| mcmc_final(&s, Vec::new(), 200, r).unwrap()).collect();
    let after: Vec<SpinPointConfig> = (n..2 * n)
        .map(|r| {
            let init = mcmc_final(&s, Vec::new(), 200, r).unwrap();
            swendsen_wang_run(&s, init, 1000, 100, r).unwrap().pop().unwrap()
        })
        .collect();
    for (name, f) in [
        ("plus count", &(|c: &SpinPointConfig| c.plus.len()) as &dyn Fn(&SpinPointConfig) -> usize),
        ("minus count", &|c: &SpinPointConfig| c.minus.len()),
        ("interspecies pairs", &|c: &SpinPointConfig| interspecies_pairs(c, &s.window)),
    ] {
        let a = histogram(before.iter().map(f), 40);
        let b = histogram(after.iter().map(f), 40);
        let t = chi_square_homogeneity(&a, &b).unwrap();
        assert!(t.p_value > 0.001, "{name}: p = {}", t.p_value);
    }
}

#[test]
fn free_boundary_mcmc_is_exchangeable() {
    let s = setup(3.0, 0.5, BoundaryCondition::Free, 32);
    let states: Vec<SpinPointConfig> = (0..10_000).map(|r| mcmc_final(&s, Vec::new(), 100, r).unwrap()).collect();
    let a = histogram(states.iter().map(|c| c.plus.len()), 30);
    let b = histogram(states.iter().map(|c| c.minus.len()), 30);
    let t = chi_square_homogeneity(&a, &b).unwrap();
    assert!(t.p_value > 0.001, "p = {}", t.p_value);
}
