use serde::{Deserialize, Serialize};

use super::exact::{all_configs, Alphabet, ExactDistribution};
use crate::error::{invalid, Result};
use crate::geometry::{LatticeRegion, RngStream};
use crate::model::{
    edge_prob_from_energy, hamiltonian_lattice_ising, hamiltonian_lattice_wr, LatticeSpinConfig,
};
use crate::percolation::UnionFind;

/// Nearest-neighbor lattice spin models with `+` boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeModel {
    Ising { coupling: f64 },
    WidomRowlinson { z: f64 },
}

impl LatticeModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LatticeModel::Ising { coupling } if !(coupling.is_finite() && coupling >= 0.0) => {
                invalid("Ising coupling J must be finite and >= 0")
            }
            LatticeModel::WidomRowlinson { z } if !(z.is_finite() && z > 0.0) => {
                invalid("activity z must be positive")
            }
            _ => Ok(()),
        }
    }

    /// Parameter of the matching random-cluster measure:
    /// `1 - exp(-J)` for Ising, `z / (1 + z)` for Widom-Rowlinson.
    pub fn rc_probability(&self) -> f64 {
        match *self {
            LatticeModel::Ising { coupling } => edge_prob_from_energy(coupling),
            LatticeModel::WidomRowlinson { z } => z / (1.0 + z),
        }
    }

    fn symbols(&self) -> &'static [i8] {
        match self {
            LatticeModel::Ising { .. } => &[-1, 1],
            LatticeModel::WidomRowlinson { .. } => &[-1, 0, 1],
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("p must lie in [0, 1], got {p}"));
    }
    Ok(())
}

/// `n * ln q`, with `0 * ln 0 = 0`.
fn log_pow(q: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * q.ln()
    }
}

/// Union-find over the interior sites plus one virtual vertex (index `len()`)
/// standing for the whole wired exterior.
fn wired_union_find(region: &LatticeRegion) -> UnionFind {
    UnionFind::new(region.len() + 1)
}

fn wired(region: &LatticeRegion, v: usize) -> usize {
    v.min(region.len())
}

fn bond_clusters(region: &LatticeRegion, open: &[bool]) -> UnionFind {
    let mut uf = wired_union_find(region);
    for (&(i, j), &o) in region.edges().iter().zip(open) {
        if o {
            uf.union(wired(region, i), wired(region, j));
        }
    }
    uf
}

fn site_clusters(region: &LatticeRegion, occupied: &[bool]) -> UnionFind {
    let n = region.len();
    let mut uf = wired_union_find(region);
    for &(i, j) in region.edges() {
        let occ = |v: usize| v >= n || occupied[v];
        if occ(i) && occ(j) {
            uf.union(wired(region, i), wired(region, j));
        }
    }
    uf
}

/// Log of the wired bond random-cluster weight
/// `2^k p^{#open} (1-p)^{#closed}` over the edges meeting the box.
pub(crate) fn log_bond_weight(region: &LatticeRegion, p: f64, open: &[bool]) -> f64 {
    let k = bond_clusters(region, open).components();
    let n_open = open.iter().filter(|&&o| o).count();
    k as f64 * std::f64::consts::LN_2 + log_pow(p, n_open) + log_pow(1.0 - p, open.len() - n_open)
}

/// Log of the site random-cluster weight `2^k p^{#occupied} (1-p)^{#empty}`,
/// the exterior being occupied and wired.
pub(crate) fn log_site_weight(region: &LatticeRegion, p: f64, occupied: &[bool]) -> f64 {
    let mut uf = site_clusters(region, occupied);
    let n = region.len();
    let mut roots: Vec<usize> = (0..n).filter(|&v| occupied[v]).map(|v| uf.find(v)).collect();
    roots.push(uf.find(n));
    roots.sort_unstable();
    roots.dedup();
    let k = roots.len();
    let n_occ = occupied.iter().filter(|&&o| o).count();
    k as f64 * std::f64::consts::LN_2 + log_pow(p, n_occ) + log_pow(1.0 - p, occupied.len() - n_occ)
}

pub(crate) fn check_bond_len(region: &LatticeRegion, open: &[bool]) -> Result<()> {
    if open.len() != region.edges().len() {
        return invalid(format!(
            "expected {} edge states, got {}",
            region.edges().len(),
            open.len()
        ));
    }
    Ok(())
}

pub(crate) fn check_site_len(region: &LatticeRegion, occupied: &[bool]) -> Result<()> {
    if occupied.len() != region.len() {
        return invalid(format!("expected {} site states, got {}", region.len(), occupied.len()));
    }
    Ok(())
}

/// Number of clusters of `Y \ {i}` (exterior included and wired) that touch a neighbor of `i`.
pub fn site_rc_kappa(region: &LatticeRegion, i: usize, occupied: &[bool]) -> Result<usize> {
    check_site_len(region, occupied)?;
    if i >= region.len() {
        return invalid(format!("site {i} is not in the region"));
    }
    let mut without = occupied.to_vec();
    without[i] = false;
    let mut uf = site_clusters(region, &without);
    let n = region.len();
    let mut roots = Vec::new();
    for &(a, b) in region.edges() {
        let other = if a == i {
            b
        } else if b == i {
            a
        } else {
            continue;
        };
        if other >= n || without[other] {
            roots.push(uf.find(wired(region, other)));
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

/// Conditional probability that site `i` is occupied under the site
/// random-cluster measure, given the rest of `occupied`:
/// `p / (p + (1-p) 2^{kappa - 1})`.
pub fn site_rc_conditional(region: &LatticeRegion, i: usize, occupied: &[bool], p: f64) -> Result<f64> {
    check_p(p)?;
    let kappa = site_rc_kappa(region, i, occupied)?;
    Ok(site_rc_conditional_from_kappa(kappa, p))
}

pub fn site_rc_conditional_from_kappa(kappa: usize, p: f64) -> f64 {
    if p >= 1.0 {
        return 1.0;
    }
    p / (p + (1.0 - p) * 2f64.powi(kappa as i32 - 1))
}

/// Exact Gibbs distribution of the interior spins with all boundary sites `+`.
pub fn enumerate_gibbs_plus_lattice(model: &LatticeModel, region: &LatticeRegion) -> Result<ExactDistribution> {
    model.validate()?;
    let configs = all_configs(model.symbols(), region.len())?;
    let log_w = configs
        .iter()
        .map(|c| {
            let cfg = LatticeSpinConfig::with_boundary(region, c, 1)?;
            let h = match *model {
                LatticeModel::Ising { coupling } => hamiltonian_lattice_ising(&cfg, region, coupling),
                LatticeModel::WidomRowlinson { z } => hamiltonian_lattice_wr(&cfg, region, z),
            };
            Ok(-h)
        })
        .collect::<Result<Vec<f64>>>()?;
    let alphabet = match model {
        LatticeModel::Ising { .. } => Alphabet::Spin,
        LatticeModel::WidomRowlinson { .. } => Alphabet::Occupancy,
    };
    Ok(ExactDistribution::from_log_weights(alphabet, configs, log_w))
}

fn to_bools(c: &[i8]) -> Vec<bool> {
    c.iter().map(|&v| v != 0).collect()
}

/// Exact wired bond random-cluster distribution; configurations list the
/// state of each edge of `region.edges()`.
pub fn enumerate_bond_rc(region: &LatticeRegion, p: f64) -> Result<ExactDistribution> {
    check_p(p)?;
    let configs = all_configs(&[0, 1], region.edges().len())?;
    let log_w = configs.iter().map(|c| log_bond_weight(region, p, &to_bools(c))).collect();
    Ok(ExactDistribution::from_log_weights(Alphabet::Bit, configs, log_w))
}

/// Exact site random-cluster distribution over interior occupations.
pub fn enumerate_site_rc(region: &LatticeRegion, p: f64) -> Result<ExactDistribution> {
    check_p(p)?;
    let configs = all_configs(&[0, 1], region.len())?;
    let log_w = configs.iter().map(|c| log_site_weight(region, p, &to_bools(c))).collect();
    Ok(ExactDistribution::from_log_weights(Alphabet::Bit, configs, log_w))
}

/// Both sides of the magnetization-percolation identity at interior site `site`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    /// Expected spin at the site under the `+` boundary Gibbs distribution.
    pub lhs: f64,
    /// Probability under the random-cluster measure that the site is joined to the boundary.
    pub rhs: f64,
}

impl IdentityCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Computes both sides by exact enumeration. `p_override` replaces the
/// model's random-cluster parameter (useful as a negative control).
pub fn check_identity_magnetization(
    region: &LatticeRegion,
    model: &LatticeModel,
    site: usize,
    p_override: Option<f64>,
) -> Result<IdentityCheck> {
    if site >= region.len() {
        return invalid(format!("site {site} is not in the region"));
    }
    let gibbs = enumerate_gibbs_plus_lattice(model, region)?;
    let lhs = gibbs.expectation(|c| c[site] as f64);
    let p = p_override.unwrap_or_else(|| model.rc_probability());
    let n = region.len();
    let rhs = match model {
        LatticeModel::Ising { .. } => enumerate_bond_rc(region, p)?.probability(|c| {
            let mut uf = bond_clusters(region, &to_bools(c));
            uf.connected(site, n)
        }),
        LatticeModel::WidomRowlinson { .. } => enumerate_site_rc(region, p)?.probability(|c| {
            let occ = to_bools(c);
            let mut uf = site_clusters(region, &occ);
            occ[site] && uf.connected(site, n)
        }),
    };
    Ok(IdentityCheck { lhs, rhs })
}

/// Ising spins to bonds: each edge meeting the box with equal endpoint spins
/// opens with probability `1 - exp(-J)`. One uniform is drawn per edge.
pub fn couple_spins_to_bonds(
    region: &LatticeRegion,
    spins: &LatticeSpinConfig,
    coupling: f64,
    rng: &mut RngStream,
) -> Result<Vec<bool>> {
    if spins.values().len() != region.len() + region.boundary_len() {
        return invalid("spin configuration does not match region");
    }
    let p = edge_prob_from_energy(coupling);
    let v = spins.values();
    Ok(region
        .edges()
        .iter()
        .map(|&(i, j)| {
            let u = rng.uniform();
            v[i] == v[j] && u < p
        })
        .collect())
}

/// Widom-Rowlinson spins to sites: the occupied interior set.
pub fn couple_wr_to_sites(region: &LatticeRegion, spins: &LatticeSpinConfig) -> Vec<bool> {
    spins.values()[..region.len()].iter().map(|&s| s != 0).collect()
}

/// Colors clusters: the wired cluster `+`, every other cluster by a fair coin
/// drawn in order of its smallest site index. Unoccupied sites get 0.
fn color_clusters(region: &LatticeRegion, uf: &mut UnionFind, present: impl Fn(usize) -> bool, rng: &mut RngStream) -> Vec<i8> {
    let n = region.len();
    let wired_root = uf.find(n);
    let mut color = vec![0i8; n + 1];
    color[wired_root] = 1;
    let mut values = vec![0i8; n + region.boundary_len()];
    for v in 0..n {
        if !present(v) {
            continue;
        }
        let r = uf.find(v);
        if color[r] == 0 {
            color[r] = if rng.uniform() < 0.5 { 1 } else { -1 };
        }
        values[v] = color[r];
    }
    for b in values.iter_mut().skip(n) {
        *b = 1;
    }
    values
}

/// Bonds to Ising spins.
pub fn couple_bonds_to_spins(region: &LatticeRegion, open: &[bool], rng: &mut RngStream) -> Result<LatticeSpinConfig> {
    check_bond_len(region, open)?;
    let mut uf = bond_clusters(region, open);
    let values = color_clusters(region, &mut uf, |_| true, rng);
    LatticeSpinConfig::new(region, values)
}

/// Occupied sites to Widom-Rowlinson spins.
pub fn couple_sites_to_wr(region: &LatticeRegion, occupied: &[bool], rng: &mut RngStream) -> Result<LatticeSpinConfig> {
    check_site_len(region, occupied)?;
    let mut uf = site_clusters(region, occupied);
    let values = color_clusters(region, &mut uf, |v| occupied[v], rng);
    LatticeSpinConfig::new(region, values)
}
