use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use rcsim_core::geometry::{derive_stream, LatticeRegion, Purpose, StreamKey, Window};
use rcsim_core::model::{ActivityParams, SpinPointConfig};
use rcsim_core::percolation::{
    estimate_theta_continuum, estimate_theta_lattice, lattice_origin_hits, ContinuumThetaParams, LatticeThetaParams,
    PercolationEstimate,
};
use rcsim_core::random_cluster::couple_particles_to_graph;
use rcsim_core::samplers::{cftp_sample, mcmc_final, write_sample_csv, CftpOutcome, RunMetadata, SamplerSetup};
use rcsim_core::stats::{mean_se, MeanEstimate};
use rcsim_core::Error;
use serde::Serialize;

use crate::config::{ExperimentConfig, PercolationSpec, SamplerKind, SweepParameter};
use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct CoalescenceStats {
    /// Mean of `-N_K`.
    pub time: MeanEstimate,
    pub median: u64,
    pub min: u64,
    pub max: u64,
}

/// Replica averages over the observation window, each with its standard error.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryStats {
    pub replicas: usize,
    pub subwindow_volume: f64,
    pub density_plus: MeanEstimate,
    pub density_minus: MeanEstimate,
    pub density_total: MeanEstimate,
    /// `#X+ - #X-` in the observation window.
    pub species_difference: MeanEstimate,
    /// Particles in the observation window joined to the boundary cluster, per unit volume.
    pub boundary_connected_density: MeanEstimate,
    /// Fraction of replicas with some particle of the observation window joined to the boundary.
    pub percolation_fraction: MeanEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalescence: Option<CoalescenceStats>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub non_coalesced: Vec<u64>,
}

struct ReplicaObservation {
    plus: f64,
    minus: f64,
    connected: f64,
}

fn observe(setup: &SamplerSetup, delta: &Window, state: &SpinPointConfig, replica: u64) -> Result<ReplicaObservation, CliError> {
    let (plus, minus) = state.counts_in(delta);
    let boundary = setup.boundary_points(replica);
    let mut rng = derive_stream(setup.seed, StreamKey::new(Purpose::Custom(1), 0, replica));
    let mut rc = couple_particles_to_graph(state, &boundary, &setup.window, &setup.potential, &mut rng)?;
    let connected = match rc.boundary.iter().position(|&b| b) {
        Some(anchor) => (0..rc.len())
            .filter(|&i| !rc.boundary[i] && delta.contains(&rc.particles[i].pos))
            .filter(|&i| rc.graph.connected(i, anchor))
            .count(),
        None => 0,
    };
    Ok(ReplicaObservation { plus: plus as f64, minus: minus as f64, connected: connected as f64 })
}

fn summarize(obs: &[ReplicaObservation], delta: &Window) -> SummaryStats {
    let v = delta.volume();
    let col = |f: &dyn Fn(&ReplicaObservation) -> f64| mean_se(&obs.iter().map(f).collect::<Vec<_>>());
    SummaryStats {
        replicas: obs.len(),
        subwindow_volume: v,
        density_plus: col(&|o| o.plus / v),
        density_minus: col(&|o| o.minus / v),
        density_total: col(&|o| (o.plus + o.minus) / v),
        species_difference: col(&|o| o.plus - o.minus),
        boundary_connected_density: col(&|o| o.connected / v),
        percolation_fraction: col(&|o| if o.connected > 0.0 { 1.0 } else { 0.0 }),
        coalescence: None,
        non_coalesced: Vec::new(),
    }
}

fn coalescence_stats(outcomes: &[&CftpOutcome]) -> Option<CoalescenceStats> {
    if outcomes.is_empty() {
        return None;
    }
    let mut times: Vec<u64> = outcomes.iter().map(|o| o.coalescence_time()).collect();
    let time = mean_se(&times.iter().map(|&t| t as f64).collect::<Vec<_>>());
    times.sort_unstable();
    Some(CoalescenceStats { time, median: times[times.len() / 2], min: times[0], max: times[times.len() - 1] })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_sample(out: &Path, setup: &SamplerSetup, state: &SpinPointConfig, meta: &RunMetadata) -> Result<(), CliError> {
    let dir = out.join("samples");
    let stem = format!("sample_{:06}", meta.replica);
    let mut csv = Vec::new();
    write_sample_csv(state, setup.window.dim(), &mut csv)?;
    fs::write(dir.join(format!("{stem}.csv")), csv)?;
    write_json(&dir.join(format!("{stem}.json")), meta)
}

fn metadata(setup: &SamplerSetup, replica: u64) -> RunMetadata {
    RunMetadata {
        seed: setup.seed,
        replica,
        z: [setup.activity.plus, setup.activity.minus],
        potential: setup.potential.clone(),
        bc: setup.boundary.clone(),
        n_k: None,
        sweeps: None,
    }
}

fn prepare_out(cfg: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    if cfg.write_samples {
        fs::create_dir_all(out.join("samples"))?;
    }
    Ok(())
}

/// MCMC from the empty configuration, one independent chain per replica.
pub fn cmd_sample(cfg: &ExperimentConfig, out: &Path) -> Result<SummaryStats, CliError> {
    let setup = cfg.setup()?;
    let delta = cfg.subwindow(&setup.window)?;
    prepare_out(cfg, out)?;
    let states: Vec<SpinPointConfig> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| mcmc_final(&setup, Vec::new(), cfg.sweeps, r))
        .collect::<Result<_, Error>>()?;
    let mut obs = Vec::with_capacity(states.len());
    for (r, s) in states.iter().enumerate() {
        let r = r as u64;
        if cfg.write_samples {
            write_sample(out, &setup, s, &RunMetadata { sweeps: Some(cfg.sweeps), ..metadata(&setup, r) })?;
        }
        obs.push(observe(&setup, &delta, s, r)?);
    }
    let summary = summarize(&obs, &delta);
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Perfect samples; replicas that fail to coalesce are listed and make the command fail.
pub fn cmd_cftp(cfg: &ExperimentConfig, out: &Path) -> Result<SummaryStats, CliError> {
    let setup = cfg.setup()?;
    let delta = cfg.subwindow(&setup.window)?;
    let schedule = cfg.schedule();
    prepare_out(cfg, out)?;
    let results: Vec<Result<CftpOutcome, Error>> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| cftp_sample(&setup, &schedule, r))
        .collect();
    let mut obs = Vec::new();
    let mut done = Vec::new();
    let mut failed = Vec::new();
    let mut times = String::from("replica,runs,N_K\n");
    for (r, res) in results.iter().enumerate() {
        let r = r as u64;
        match res {
            Ok(o) => {
                if cfg.write_samples {
                    write_sample(out, &setup, &o.state, &RunMetadata { n_k: Some(o.start), ..metadata(&setup, r) })?;
                }
                times.push_str(&format!("{r},{},{}\n", o.runs, o.start));
                obs.push(observe(&setup, &delta, &o.state, r)?);
                done.push(o);
            }
            Err(Error::NonCoalescence { .. }) => failed.push(r),
            Err(e) => return Err(e.clone().into()),
        }
    }
    fs::write(out.join("coalescence.csv"), times)?;
    let mut summary = summarize(&obs, &delta);
    summary.coalescence = coalescence_stats(&done);
    summary.non_coalesced = failed.clone();
    write_json(&out.join("summary.json"), &summary)?;
    if !failed.is_empty() {
        return Err(CliError::NonCoalescence(format!(
            "{} of {} replicas did not coalesce by start time {} (replicas {:?})",
            failed.len(),
            cfg.replicas,
            schedule.starts().last().expect("nonempty"),
            failed
        )));
    }
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub parameter: &'static str,
    pub rows: Vec<SweepRow>,
    /// For percolation sweeps: every coupled trial is nondecreasing along the sorted grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupled_monotone: Option<bool>,
}

/// Density against `z`, or the percolation probability against `p_s` / `p_b`.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: &Path) -> Result<SweepReport, CliError> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| CliError::config("sweep", "missing sweep section"))?;
    fs::create_dir_all(out)?;
    let report = match spec.parameter {
        SweepParameter::Z => {
            let mut rows = Vec::new();
            for (k, &z) in spec.values.iter().enumerate() {
                let activity = ActivityParams::symmetric(z).map_err(|e| CliError::config("sweep.values", e))?;
                let setup = cfg.setup_with_activity(activity)?;
                let delta = cfg.subwindow(&setup.window)?;
                let schedule = cfg.schedule();
                let first = (k * cfg.replicas) as u64;
                let states: Vec<SpinPointConfig> = (first..first + cfg.replicas as u64)
                    .into_par_iter()
                    .map(|r| match spec.sampler {
                        SamplerKind::Cftp => cftp_sample(&setup, &schedule, r).map(|o| o.state),
                        SamplerKind::Mcmc => mcmc_final(&setup, Vec::new(), cfg.sweeps, r),
                    })
                    .collect::<Result<_, Error>>()
                    .map_err(|e| match e {
                        Error::NonCoalescence { .. } => CliError::NonCoalescence(format!("z = {z}: {e}")),
                        e => e.into(),
                    })?;
                let rho: Vec<f64> = states
                    .iter()
                    .map(|s| {
                        let (p, m) = s.counts_in(&delta);
                        (p + m) as f64 / delta.volume()
                    })
                    .collect();
                let m = mean_se(&rho);
                rows.push(SweepRow { value: z, estimate: m.mean, stderr: m.std_error });
            }
            SweepReport { parameter: "z", rows, coupled_monotone: None }
        }
        p @ (SweepParameter::PS | SweepParameter::PB) => {
            let Some(PercolationSpec::Lattice { p_s, p_b, half_width, trials }) = cfg.percolation.clone() else {
                return Err(CliError::config("percolation", "a p_s / p_b sweep needs a lattice percolation section"));
            };
            let rng = derive_stream(cfg.seed, StreamKey::new(Purpose::Percolation, 0, 0));
            let mut rows = Vec::new();
            let mut hits_by_value = Vec::new();
            for &v in &spec.values {
                let (ps, pb) = if p == SweepParameter::PS { (v, p_b) } else { (p_s, v) };
                let params = LatticeThetaParams { dim: cfg.dimension, p_s: ps, p_b: pb, half_width, trials };
                let hits = lattice_origin_hits(&params, &rng).map_err(|e| CliError::config("sweep", e))?;
                let m = mean_se(&hits.iter().map(|&h| h as u8 as f64).collect::<Vec<_>>());
                rows.push(SweepRow { value: v, estimate: m.mean, stderr: m.std_error });
                hits_by_value.push((v, hits));
            }
            hits_by_value.sort_by(|a, b| a.0.total_cmp(&b.0));
            let monotone = hits_by_value
                .windows(2)
                .all(|w| w[0].1.iter().zip(&w[1].1).all(|(&a, &b)| !a || b));
            SweepReport { parameter: p.label(), rows, coupled_monotone: Some(monotone) }
        }
    };
    let mut csv = format!("{},estimate,stderr\n", report.parameter);
    for r in &report.rows {
        csv.push_str(&format!("{},{},{}\n", r.value, r.estimate, r.stderr));
    }
    fs::write(out.join("sweep.csv"), csv)?;
    write_json(&out.join("sweep.json"), &report)?;
    if report.coupled_monotone == Some(false) {
        return Err(CliError::Validation("coupled percolation trials are not monotone in the parameter".into()));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PercolationReport {
    pub model: &'static str,
    #[serde(flatten)]
    pub estimate: PercolationEstimate,
}

pub fn cmd_percolation(cfg: &ExperimentConfig, out: &Path) -> Result<PercolationReport, CliError> {
    let spec = cfg
        .percolation
        .as_ref()
        .ok_or_else(|| CliError::config("percolation", "missing percolation section"))?;
    fs::create_dir_all(out)?;
    let rng = derive_stream(cfg.seed, StreamKey::new(Purpose::Percolation, 0, 0));
    let report = match spec {
        PercolationSpec::Lattice { p_s, p_b, half_width, trials } => {
            let params = LatticeThetaParams { dim: cfg.dimension, p_s: *p_s, p_b: *p_b, half_width: *half_width, trials: *trials };
            LatticeRegion::centered(cfg.dimension, *half_width).map_err(|e| CliError::config("percolation", e))?;
            let estimate = estimate_theta_lattice(&params, &rng).map_err(|e| CliError::config("percolation", e))?;
            PercolationReport { model: "lattice", estimate }
        }
        PercolationSpec::Continuum { z, rule, trials } => {
            let w = cfg.window()?;
            let delta = cfg.subwindow(&w)?;
            let params = ContinuumThetaParams { z: *z, rule: rule.clone(), trials: *trials };
            let estimate = estimate_theta_continuum(&w, &delta, &params, &rng).map_err(|e| CliError::config("percolation", e))?;
            PercolationReport { model: "continuum", estimate }
        }
    };
    write_json(&out.join("percolation.json"), &report)?;
    Ok(report)
}

pub fn print_json<T: Serialize>(value: &T) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = serde_json::to_writer_pretty(&mut lock, value);
    let _ = writeln!(lock);
}
