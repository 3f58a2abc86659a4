use crate::error::{invalid, Result};
use crate::geometry::LatticeRegion;

/// Spin values on a lattice box and its boundary, indexed like
/// [`LatticeRegion`] (interior first, then boundary).
///
/// Ising uses `{-1, +1}`; Widom-Rowlinson uses `{-1, 0, +1}` (0 = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpinConfig {
    values: Vec<i8>,
}

impl LatticeSpinConfig {
    pub fn new(region: &LatticeRegion, values: Vec<i8>) -> Result<Self> {
        if values.len() != region.len() + region.boundary_len() {
            return invalid(format!(
                "expected {} site values, got {}",
                region.len() + region.boundary_len(),
                values.len()
            ));
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return invalid("site values must lie in {-1, 0, 1}");
        }
        Ok(Self { values })
    }

    /// Interior values followed by a constant boundary value.
    pub fn with_boundary(region: &LatticeRegion, interior: &[i8], boundary: i8) -> Result<Self> {
        if interior.len() != region.len() {
            return invalid("interior length does not match region");
        }
        let mut values = interior.to_vec();
        values.resize(region.len() + region.boundary_len(), boundary);
        Self::new(region, values)
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, index: usize) -> i8 {
        self.values[index]
    }
}

/// `J * #{nearest-neighbor pairs meeting the box with unequal spins}`.
pub fn hamiltonian_lattice_ising(cfg: &LatticeSpinConfig, region: &LatticeRegion, coupling: f64) -> f64 {
    let v = cfg.values();
    let unequal = region
        .edges()
        .iter()
        .filter(|&&(i, j)| v[i] != v[j])
        .count();
    coupling * unequal as f64
}

/// Widom-Rowlinson lattice gas energy: infinite when opposite particles are
/// adjacent on a pair meeting the box, else `-log z * #occupied interior sites`.
pub fn hamiltonian_lattice_wr(cfg: &LatticeSpinConfig, region: &LatticeRegion, z: f64) -> f64 {
    let v = cfg.values();
    if region.edges().iter().any(|&(i, j)| v[i] * v[j] == -1) {
        return f64::INFINITY;
    }
    let occupied = v[..region.len()].iter().filter(|&&s| s != 0).count();
    if occupied == 0 {
        return 0.0;
    }
    -z.ln() * occupied as f64
}
