use super::setup::SamplerSetup;
use crate::error::{invalid, Result};
use crate::model::{Particle, Species, SpinPointConfig};

/// Runs the alternating chain `X-_0 = F-_0(X+_0)`, then for `k = 1..=sweeps`
/// `X+_k = F+_k(X-_{k-1})`, `X-_k = F-_k(X+_k)`, calling `visit(k, state)`
/// for every state `k = 0..=sweeps`.
pub fn mcmc_visit<F: FnMut(usize, &SpinPointConfig)>(
    setup: &SamplerSetup,
    init_plus: Vec<Particle>,
    sweeps: usize,
    replica: u64,
    mut visit: F,
) -> Result<()> {
    if sweeps == 0 {
        return invalid("sweeps must be >= 1");
    }
    let boundary = setup.boundary_points(replica);
    let minus = setup.apply(&boundary, replica, 0, Species::Minus, &init_plus);
    let mut state = SpinPointConfig::new(init_plus, minus);
    visit(0, &state);
    for k in 1..=sweeps {
        let t = k as i64;
        state.plus = setup.apply(&boundary, replica, t, Species::Plus, &state.minus);
        state.minus = setup.apply(&boundary, replica, t, Species::Minus, &state.plus);
        visit(k, &state);
    }
    Ok(())
}

/// All states `0..=sweeps` of the chain.
pub fn mcmc_run(
    setup: &SamplerSetup,
    init_plus: Vec<Particle>,
    sweeps: usize,
    replica: u64,
) -> Result<Vec<SpinPointConfig>> {
    let mut out = Vec::with_capacity(sweeps + 1);
    mcmc_visit(setup, init_plus, sweeps, replica, |_, s| out.push(s.clone()))?;
    Ok(out)
}

/// The state after `sweeps` sweeps.
pub fn mcmc_final(setup: &SamplerSetup, init_plus: Vec<Particle>, sweeps: usize, replica: u64) -> Result<SpinPointConfig> {
    let mut last = SpinPointConfig::default();
    mcmc_visit(setup, init_plus, sweeps, replica, |k, s| {
        if k == sweeps {
            last = s.clone();
        }
    })?;
    Ok(last)
}
