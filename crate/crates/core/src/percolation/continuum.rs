use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bernoulli::PercolationEstimate;
use super::graph::Graph;
use crate::error::{invalid, Result};
use crate::geometry::{
    sample_poisson_window, BoundaryMode, CellGrid, Point, RngStream, Window, MAX_DIM,
};
use crate::model::Potential;

/// Connection function `p(x - y)` of a Poisson random-edge model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConnectionRule {
    /// `p = 1 - exp(-J)`.
    Potential { potential: Potential },
    /// Boolean model: `p = 1{|x - y| <= 2r}`.
    Boolean { r: f64 },
    /// `p = 0`.
    Never,
}

impl ConnectionRule {
    pub fn range(&self) -> f64 {
        match self {
            ConnectionRule::Potential { potential } => potential.range(),
            ConnectionRule::Boolean { r } => 2.0 * r,
            ConnectionRule::Never => 0.0,
        }
    }

    pub fn prob(&self, d: &[f64; MAX_DIM]) -> f64 {
        match self {
            ConnectionRule::Potential { potential } => potential.edge_prob_raw(d),
            ConnectionRule::Boolean { r } => {
                let d2: f64 = d.iter().map(|v| v * v).sum();
                if d2 <= 4.0 * r * r {
                    1.0
                } else {
                    0.0
                }
            }
            ConnectionRule::Never => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ConnectionRule::Potential { potential } => potential.validate(),
            ConnectionRule::Boolean { r } if !(r.is_finite() && *r > 0.0) => {
                invalid("boolean: r must be positive")
            }
            _ => Ok(()),
        }
    }
}

/// Adds edges between the given points, pair `{x, y}` independently with
/// probability `rule.prob(x - y)`.
pub fn random_edges(w: &Window, points: Vec<Point>, rule: &ConnectionRule, rng: &mut RngStream) -> Result<Graph> {
    let mut g = Graph::new(w.dim(), points)?;
    let range = rule.range();
    if range <= 0.0 || g.num_vertices() < 2 {
        return Ok(g);
    }
    let grid = CellGrid::build(w, g.vertices(), range)?;
    let mut pairs = Vec::new();
    grid.for_each_pair(|i, j, _| pairs.push((i, j)));
    pairs.sort_unstable();
    for (i, j) in pairs {
        let d = w.displacement(&g.vertices()[i], &g.vertices()[j]);
        let p = rule.prob(&d);
        if p >= 1.0 || (p > 0.0 && rng.uniform() < p) {
            g.add_edge(i, j)?;
        }
    }
    Ok(g)
}

/// Poisson(`z`) points on the window (enlarged by its collar when one is set)
/// joined by independent random edges.
pub fn sample_poisson_random_edge(
    w: &Window,
    z: f64,
    rule: &ConnectionRule,
    rng: &mut RngStream,
) -> Result<Graph> {
    if !(z.is_finite() && z > 0.0) {
        return invalid("intensity z must be positive");
    }
    rule.validate()?;
    let region = if w.collar_width() > 0.0 && w.mode() != BoundaryMode::Periodic {
        let c = w.collar_width();
        let lo: Vec<f64> = w.lower().iter().map(|v| v - c).collect();
        let hi: Vec<f64> = w.upper().iter().map(|v| v + c).collect();
        Window::new(&lo, &hi)?.with_mode(w.mode())
    } else {
        w.clone()
    };
    let points = sample_poisson_window(&region, z, rng);
    random_edges(w, points, rule, rng)
}

/// Number of vertices inside `delta` connected to some vertex within `reach`
/// of the window boundary.
pub fn boundary_connected_count(g: &mut Graph, w: &Window, delta: &Window, reach: f64) -> usize {
    let n = g.num_vertices();
    let mut anchored = vec![false; n];
    for v in 0..n {
        if w.depth(&g.vertices()[v]) <= reach {
            let r = g.root(v);
            anchored[r] = true;
        }
    }
    let inside: Vec<usize> = (0..n).filter(|&v| delta.contains(&g.vertices()[v])).collect();
    inside.into_iter().filter(|&v| anchored[g.root(v)]).count()
}

#[derive(Clone, Debug)]
pub struct ContinuumThetaParams {
    pub z: f64,
    pub rule: ConnectionRule,
    pub trials: usize,
}

/// Finite-window proxy for the percolation probability of a typical point:
/// the mean over trials of `#{x in X_delta : x <-> points near the boundary} / (z |delta|)`.
pub fn estimate_theta_continuum(
    w: &Window,
    delta: &Window,
    params: &ContinuumThetaParams,
    rng: &RngStream,
) -> Result<PercolationEstimate> {
    params.rule.validate()?;
    if !(params.z.is_finite() && params.z > 0.0) {
        return invalid("intensity z must be positive");
    }
    if params.trials == 0 {
        return invalid("trials must be >= 1");
    }
    let range = params.rule.range();
    if delta.dim() != w.dim() || w.margin_of(delta) < 2.0 * range {
        return invalid(format!(
            "sub-window must lie inside the window with margin >= 2R = {}",
            2.0 * range
        ));
    }
    let expected = params.z * delta.volume();
    let ratios: Vec<f64> = (0..params.trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut s = rng.child(t as u64);
            let points = sample_poisson_window(w, params.z, &mut s);
            let mut g = random_edges(w, points, &params.rule, &mut s)?;
            Ok(boundary_connected_count(&mut g, w, delta, range) as f64 / expected)
        })
        .collect::<Result<_>>()?;
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = if ratios.len() > 1 {
        ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(PercolationEstimate {
        estimate: mean.clamp(0.0, 1.0),
        std_error: (var / n).sqrt(),
        trials: params.trials,
        box_size: w.side(0),
    })
}
