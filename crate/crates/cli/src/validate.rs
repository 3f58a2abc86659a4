use rcsim_core::geometry::{derive_stream, LatticeRegion, Purpose, RngStream, StreamKey};
use rcsim_core::model::LatticeSpinConfig;
use rcsim_core::random_cluster::{
    check_identity_magnetization, couple_bonds_to_spins, couple_sites_to_wr, couple_spins_to_bonds, couple_wr_to_sites,
    enumerate_bond_rc, enumerate_gibbs_plus_lattice, enumerate_site_rc, ExactDistribution, LatticeModel,
};
use rcsim_core::stats::chi_square_gof;
use serde::Serialize;

use crate::config::ValidateSpec;
use crate::error::CliError;

pub const IDENTITY_TOL: f64 = 1e-12;
pub const MIN_P_VALUE: f64 = 0.001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `value` is `|lhs - rhs|`; passes when `value <= threshold`.
    Identity,
    /// `value` is a p-value; passes when `value > threshold`.
    ChiSquare,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn identity(name: String, gap: f64) -> Check {
    Check { name, kind: CheckKind::Identity, value: gap, threshold: IDENTITY_TOL, pass: gap <= IDENTITY_TOL }
}

fn chi_square(name: String, p: f64) -> Check {
    Check { name, kind: CheckKind::ChiSquare, value: p, threshold: MIN_P_VALUE, pass: p > MIN_P_VALUE }
}

fn identity_checks(spec: &ValidateSpec, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let cases: [(&[usize], Vec<LatticeModel>); 4] = [
        (&[1, 1], vec![LatticeModel::Ising { coupling: 0.5 }, LatticeModel::Ising { coupling: 1.0 }]),
        (&[2, 2], vec![LatticeModel::Ising { coupling: 0.5 }, LatticeModel::Ising { coupling: 1.0 }]),
        (&[1, 1], [0.5, 1.0, 2.0].map(|z| LatticeModel::WidomRowlinson { z }).to_vec()),
        (&[2, 1], [0.5, 1.0, 2.0].map(|z| LatticeModel::WidomRowlinson { z }).to_vec()),
    ];
    for (extents, models) in cases {
        let region = LatticeRegion::new(extents)?;
        for model in models {
            let p = spec.inject_wrong_p.then(|| 0.5 * model.rc_probability());
            let label = match model {
                LatticeModel::Ising { coupling } => format!("ising J={coupling}"),
                LatticeModel::WidomRowlinson { z } => format!("widom_rowlinson z={z}"),
            };
            let shape = format!("{}x{}", extents[0], extents[1]);
            let mut worst: f64 = 0.0;
            for site in 0..region.len() {
                let c = check_identity_magnetization(&region, &model, site, p)?;
                worst = worst.max(c.gap());
                if let (LatticeModel::Ising { coupling }, 1) = (&model, region.len()) {
                    let closed = -(-4.0 * coupling).exp_m1() / (1.0 + (-4.0 * coupling).exp());
                    checks.push(identity(format!("{label} {shape} closed form"), (c.lhs - closed).abs()));
                }
            }
            checks.push(identity(format!("{label} {shape} magnetization vs boundary connection"), worst));
            if let (LatticeModel::WidomRowlinson { z }, 1) = (&model, region.len()) {
                let g = enumerate_gibbs_plus_lattice(&model, &region)?;
                let occ = g.probability(|c| c[0] != 0);
                checks.push(identity(format!("{label} {shape} occupancy z/(1+z)"), (occ - z / (1.0 + z)).abs()));
            }
        }
    }
    Ok(())
}

fn draw_counts<F: FnMut(&mut RngStream) -> Result<usize, CliError>>(
    n: usize,
    cells: usize,
    rng: &mut RngStream,
    mut draw: F,
) -> Result<Vec<u64>, CliError> {
    let mut counts = vec![0u64; cells];
    for _ in 0..n {
        counts[draw(rng)?] += 1;
    }
    Ok(counts)
}

fn locate(d: &ExactDistribution, config: &[i8]) -> Result<usize, CliError> {
    d.index_of(config)
        .ok_or_else(|| CliError::Validation(format!("coupled sample {config:?} has no enumerated outcome")))
}

fn coupling_checks(spec: &ValidateSpec, seed: u64, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let n = spec.samples;
    let stream = |k: u64| derive_stream(seed, StreamKey::new(Purpose::Custom(2), 0, k));

    let region = LatticeRegion::new(&[2, 2])?;
    let j = 0.5;
    let model = LatticeModel::Ising { coupling: j };
    let gibbs = enumerate_gibbs_plus_lattice(&model, &region)?;
    let bonds = enumerate_bond_rc(&region, model.rc_probability())?;
    let counts = draw_counts(n, bonds.len(), &mut stream(0), |rng| {
        let s = &gibbs.configs()[gibbs.sample_index(rng.uniform())];
        let spins = LatticeSpinConfig::with_boundary(&region, s, 1)?;
        let open: Vec<i8> = couple_spins_to_bonds(&region, &spins, j, rng)?.iter().map(|&o| o as i8).collect();
        locate(&bonds, &open)
    })?;
    checks.push(chi_square("ising 2x2 spins -> bonds".into(), chi_square_gof(&counts, bonds.probs())?.p_value));
    let counts = draw_counts(n, gibbs.len(), &mut stream(1), |rng| {
        let b = &bonds.configs()[bonds.sample_index(rng.uniform())];
        let open: Vec<bool> = b.iter().map(|&x| x == 1).collect();
        let spins = couple_bonds_to_spins(&region, &open, rng)?;
        locate(&gibbs, &spins.values()[..region.len()])
    })?;
    checks.push(chi_square("ising 2x2 bonds -> spins".into(), chi_square_gof(&counts, gibbs.probs())?.p_value));

    let region = LatticeRegion::new(&[2, 1])?;
    let model = LatticeModel::WidomRowlinson { z: 1.0 };
    let gibbs = enumerate_gibbs_plus_lattice(&model, &region)?;
    let sites = enumerate_site_rc(&region, model.rc_probability())?;
    let counts = draw_counts(n, sites.len(), &mut stream(2), |rng| {
        let s = &gibbs.configs()[gibbs.sample_index(rng.uniform())];
        let spins = LatticeSpinConfig::with_boundary(&region, s, 1)?;
        let occ: Vec<i8> = couple_wr_to_sites(&region, &spins).iter().map(|&o| o as i8).collect();
        locate(&sites, &occ)
    })?;
    checks.push(chi_square("widom_rowlinson 2x1 spins -> sites".into(), chi_square_gof(&counts, sites.probs())?.p_value));
    let counts = draw_counts(n, gibbs.len(), &mut stream(3), |rng| {
        let s = &sites.configs()[sites.sample_index(rng.uniform())];
        let occ: Vec<bool> = s.iter().map(|&x| x == 1).collect();
        let spins = couple_sites_to_wr(&region, &occ, rng)?;
        locate(&gibbs, &spins.values()[..region.len()])
    })?;
    checks.push(chi_square("widom_rowlinson 2x1 sites -> spins".into(), chi_square_gof(&counts, gibbs.probs())?.p_value));
    Ok(())
}

/// Exact identity checks followed by chi-square tests of both coupling directions.
pub fn run_validation(spec: &ValidateSpec, seed: u64) -> Result<ValidationReport, CliError> {
    let mut checks = Vec::new();
    identity_checks(spec, &mut checks)?;
    if spec.samples > 0 {
        coupling_checks(spec, seed, &mut checks)?;
    }
    Ok(ValidationReport { pass: checks.iter().all(|c| c.pass), checks })
}
