use std::collections::HashSet;

use crate::error::Result;
use crate::geometry::{CellGrid, Point, RngStream, Window};
use crate::model::{Particle, Potential, Species, SpinPointConfig};
use crate::percolation::Graph;

/// Particles of both species and the boundary, joined by random edges.
///
/// Vertices are ordered: interior plus particles, interior minus particles,
/// then boundary particles (which are plus and wired together).
#[derive(Clone, Debug)]
pub struct ContinuumRcGraph {
    pub particles: Vec<Particle>,
    pub species: Vec<Species>,
    pub boundary: Vec<bool>,
    pub graph: Graph,
}

impl ContinuumRcGraph {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    fn positions(&self) -> Vec<Point> {
        self.particles.iter().map(|p| p.pos).collect()
    }
}

fn assemble(cfg: &SpinPointConfig, boundary: &[Particle], dim: usize) -> Result<ContinuumRcGraph> {
    let mut particles = Vec::with_capacity(cfg.plus.len() + cfg.minus.len() + boundary.len());
    let mut species = Vec::with_capacity(particles.capacity());
    let mut is_boundary = Vec::with_capacity(particles.capacity());
    for (s, set, b) in [
        (Species::Plus, &cfg.plus[..], false),
        (Species::Minus, &cfg.minus[..], false),
        (Species::Plus, boundary, true),
    ] {
        for p in set {
            particles.push(*p);
            species.push(s);
            is_boundary.push(b);
        }
    }
    let graph = Graph::new(dim, particles.iter().map(|p| p.pos).collect())?;
    Ok(ContinuumRcGraph {
        particles,
        species,
        boundary: is_boundary,
        graph,
    })
}

fn wire_boundary(rc: &mut ContinuumRcGraph) -> Result<()> {
    let mut prev = None;
    for v in (0..rc.len()).filter(|&v| rc.boundary[v]) {
        if let Some(u) = prev {
            rc.graph.add_edge(u, v)?;
        }
        prev = Some(v);
    }
    Ok(())
}

/// Particles to random-cluster graph: each pair of equal-species particles
/// (not both on the boundary) is joined with probability `1 - exp(-J(x - y))`.
/// Boundary particles count as plus and are wired into one cluster.
/// Pairs are visited in sorted order; a uniform is drawn only for `0 < p < 1`.
pub fn couple_particles_to_graph(
    cfg: &SpinPointConfig,
    boundary: &[Particle],
    w: &Window,
    pot: &Potential,
    rng: &mut RngStream,
) -> Result<ContinuumRcGraph> {
    let mut rc = assemble(cfg, boundary, w.dim())?;
    wire_boundary(&mut rc)?;
    if rc.len() < 2 {
        return Ok(rc);
    }
    let grid = CellGrid::build(w, &rc.positions(), pot.range())?;
    for (i, j) in grid.neighbor_pairs() {
        if rc.species[i] != rc.species[j] || (rc.boundary[i] && rc.boundary[j]) {
            continue;
        }
        let d = w.displacement(&rc.particles[i].pos, &rc.particles[j].pos);
        let p = pot.edge_prob_raw(&d);
        if p >= 1.0 || (p > 0.0 && rng.uniform() < p) {
            rc.graph.add_edge(i, j)?;
        }
    }
    Ok(rc)
}

/// Random-cluster graph to particles: clusters holding a boundary particle are
/// plus, every other cluster gets a fair coin, drawn in order of its smallest
/// vertex index. Returns the interior particles only.
pub fn couple_graph_to_particles(rc: &mut ContinuumRcGraph, rng: &mut RngStream) -> SpinPointConfig {
    let (labels, _) = rc.graph.clusters();
    let n = rc.len();
    let mut color = vec![0i8; n];
    for v in 0..n {
        if rc.boundary[v] {
            color[labels[v]] = 1;
        }
    }
    let mut out = SpinPointConfig::default();
    for v in 0..n {
        if rc.boundary[v] {
            continue;
        }
        let l = labels[v];
        if color[l] == 0 {
            color[l] = if rng.uniform() < 0.5 { 1 } else { -1 };
        }
        if color[l] == 1 {
            out.plus.push(rc.particles[v]);
        } else {
            out.minus.push(rc.particles[v]);
        }
    }
    out
}

/// Unnormalized continuum random-cluster weight of `rc` relative to the
/// Poisson process: `2^k prod_{open} p(e) prod_{closed} (1 - p(e))`, the
/// products running over pairs within range that are not both on the boundary.
/// Species labels are ignored; the wired boundary counts as one cluster.
pub fn continuum_rc_weight(rc: &mut ContinuumRcGraph, w: &Window, pot: &Potential) -> Result<f64> {
    let open: HashSet<(usize, usize)> = rc
        .graph
        .edges()
        .iter()
        .map(|&(i, j)| (i.min(j), i.max(j)))
        .collect();
    let mut weight = 2f64.powi(rc.graph.num_clusters() as i32);
    if rc.len() < 2 {
        return Ok(weight);
    }
    let grid = CellGrid::build(w, &rc.positions(), pot.range())?;
    for (i, j) in grid.neighbor_pairs() {
        if rc.boundary[i] && rc.boundary[j] {
            continue;
        }
        let p = pot.edge_prob_raw(&w.displacement(&rc.particles[i].pos, &rc.particles[j].pos));
        weight *= if open.contains(&(i, j)) { p } else { 1.0 - p };
    }
    Ok(weight)
}
