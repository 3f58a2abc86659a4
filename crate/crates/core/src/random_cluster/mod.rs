//! Random-cluster measures, Edwards-Sokal couplings and exact small-box oracles.
//!
//! All boundaries are wired: the exterior counts as a single cluster.

mod continuum;
mod exact;
mod lattice;

pub use continuum::{
    continuum_rc_weight, couple_graph_to_particles, couple_particles_to_graph, ContinuumRcGraph,
};
pub use exact::{Alphabet, ExactDistribution, MAX_OUTCOMES};
pub use lattice::{
    check_identity_magnetization, couple_bonds_to_spins, couple_sites_to_wr, couple_spins_to_bonds,
    couple_wr_to_sites, enumerate_bond_rc, enumerate_gibbs_plus_lattice, enumerate_site_rc,
    site_rc_conditional, site_rc_conditional_from_kappa, site_rc_kappa, IdentityCheck, LatticeModel,
};

use crate::error::{invalid, Result};
use crate::geometry::{LatticeRegion, Window};
use crate::model::Potential;

/// A random-cluster measure on a finite region.
#[derive(Clone, Copy, Debug)]
pub enum RcWeighting<'a> {
    /// Bonds of `region.edges()`.
    LatticeBond { region: &'a LatticeRegion, p: f64 },
    /// Interior sites, exterior occupied.
    LatticeSite { region: &'a LatticeRegion, p: f64 },
    Continuum { window: &'a Window, potential: &'a Potential },
}

#[derive(Debug)]
pub enum RcConfig<'a> {
    Bonds(&'a [bool]),
    Sites(&'a [bool]),
    Graph(&'a mut ContinuumRcGraph),
}

/// Unnormalized weight `2^k p^{#included} (1-p)^{#excluded}`.
pub fn rc_weight(weighting: RcWeighting<'_>, config: RcConfig<'_>) -> Result<f64> {
    match (weighting, config) {
        (RcWeighting::LatticeBond { region, p }, RcConfig::Bonds(open)) => {
            lattice::check_bond_len(region, open)?;
            check_p(p)?;
            Ok(lattice::log_bond_weight(region, p, open).exp())
        }
        (RcWeighting::LatticeSite { region, p }, RcConfig::Sites(occ)) => {
            lattice::check_site_len(region, occ)?;
            check_p(p)?;
            Ok(lattice::log_site_weight(region, p, occ).exp())
        }
        (RcWeighting::Continuum { window, potential }, RcConfig::Graph(g)) => {
            continuum_rc_weight(g, window, potential)
        }
        _ => invalid("configuration kind does not match the weighting"),
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("p must lie in [0, 1], got {p}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch() {
        let r = LatticeRegion::new(&[1, 1]).unwrap();
        let w = rc_weight(RcWeighting::LatticeBond { region: &r, p: 0.5 }, RcConfig::Bonds(&[false; 4])).unwrap();
        assert!((w - 4.0 / 16.0).abs() < 1e-15);
        let w = rc_weight(RcWeighting::LatticeSite { region: &r, p: 0.5 }, RcConfig::Sites(&[true])).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        assert!(rc_weight(RcWeighting::LatticeSite { region: &r, p: 0.5 }, RcConfig::Bonds(&[true])).is_err());
    }
}
