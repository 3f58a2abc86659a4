use rayon::prelude::*;
use serde::Serialize;

use super::graph::Graph;
use super::union_find::UnionFind;
use crate::error::{invalid, Result};
use crate::geometry::{LatticeRegion, Point, RngStream};

/// One uniform per site and per internal edge of a region. Thresholding the
/// same uniforms at different `(p_s, p_b)` couples the resulting graphs
/// monotonically.
#[derive(Clone, Debug)]
pub struct CoupledUniforms {
    pub site: Vec<f64>,
    pub edge: Vec<f64>,
}

impl CoupledUniforms {
    pub fn draw(region: &LatticeRegion, rng: &mut RngStream) -> Self {
        let site = (0..region.len()).map(|_| rng.uniform()).collect();
        let edge = region.internal_edges().map(|_| rng.uniform()).collect();
        Self { site, edge }
    }
}

/// Realization of Bernoulli site-bond percolation on a lattice box.
#[derive(Clone, Debug)]
pub struct SiteBondSample {
    /// Open sites, by interior index.
    pub sites: Vec<bool>,
    /// Open edges, in the order of `LatticeRegion::internal_edges`.
    pub edges: Vec<bool>,
}

impl SiteBondSample {
    pub fn threshold(region: &LatticeRegion, p_s: f64, p_b: f64, u: &CoupledUniforms) -> Self {
        let sites: Vec<bool> = u.site.iter().map(|&x| x < p_s).collect();
        let edges = region
            .internal_edges()
            .zip(&u.edge)
            .map(|((i, j), &x)| sites[i] && sites[j] && x < p_b)
            .collect();
        Self { sites, edges }
    }

    /// `true` if every open site and edge of `self` is open in `other`.
    pub fn is_subgraph_of(&self, other: &SiteBondSample) -> bool {
        self.sites.iter().zip(&other.sites).all(|(a, b)| !a || *b)
            && self.edges.iter().zip(&other.edges).all(|(a, b)| !a || *b)
    }

    /// The open subgraph with integer-valued vertex coordinates.
    /// Returns the graph and the site index of each vertex.
    pub fn to_graph(&self, region: &LatticeRegion) -> Result<(Graph, Vec<usize>)> {
        let mut vertex_of = vec![usize::MAX; region.len()];
        let mut site_of = Vec::new();
        let mut coords = Vec::new();
        for (i, &open) in self.sites.iter().enumerate() {
            if open {
                vertex_of[i] = site_of.len();
                site_of.push(i);
                let s = region.site(i);
                let c: Vec<f64> = s[..region.dim()].iter().map(|&v| v as f64).collect();
                coords.push(Point::new(&c)?);
            }
        }
        let mut g = Graph::new(region.dim(), coords)?;
        for ((i, j), &open) in region.internal_edges().zip(&self.edges) {
            if open {
                g.add_edge(vertex_of[i], vertex_of[j])?;
            }
        }
        Ok((g, site_of))
    }

    /// Whether `site` is joined by open edges to an open rim site of the box.
    pub fn reaches_rim(&self, region: &LatticeRegion, site: usize) -> bool {
        if !self.sites[site] {
            return false;
        }
        let mut uf = UnionFind::new(region.len());
        for ((i, j), &open) in region.internal_edges().zip(&self.edges) {
            if open {
                uf.union(i, j);
            }
        }
        let root = uf.find(site);
        (0..region.len()).any(|v| self.sites[v] && region.is_rim(v) && uf.find(v) == root)
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("{name} must lie in [0, 1], got {p}"));
    }
    Ok(())
}

pub fn sample_bernoulli_site_bond(
    region: &LatticeRegion,
    p_s: f64,
    p_b: f64,
    rng: &mut RngStream,
) -> Result<SiteBondSample> {
    check_prob("p_s", p_s)?;
    check_prob("p_b", p_b)?;
    let u = CoupledUniforms::draw(region, rng);
    Ok(SiteBondSample::threshold(region, p_s, p_b, &u))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PercolationEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: usize,
    pub box_size: f64,
}

impl PercolationEstimate {
    pub(crate) fn binomial(hits: usize, trials: usize, box_size: f64) -> Self {
        let p = hits as f64 / trials as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            box_size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeThetaParams {
    pub dim: usize,
    pub p_s: f64,
    pub p_b: f64,
    /// Half-width of the box `{-L, ..., L}^d`.
    pub half_width: usize,
    pub trials: usize,
}

/// Per-trial indicator of `{0 <-> rim of the box}`. Trial `t` uses `rng.child(t)`.
pub fn lattice_origin_hits(params: &LatticeThetaParams, rng: &RngStream) -> Result<Vec<bool>> {
    check_prob("p_s", params.p_s)?;
    check_prob("p_b", params.p_b)?;
    if params.half_width < 2 {
        return invalid("box half-width L must be >= 2");
    }
    if params.trials == 0 {
        return invalid("trials must be >= 1");
    }
    let region = LatticeRegion::centered(params.dim, params.half_width)?;
    let origin = region
        .interior_index(&[0; crate::geometry::MAX_DIM])
        .expect("centered box contains the origin");
    Ok((0..params.trials)
        .into_par_iter()
        .map(|t| {
            let mut s = rng.child(t as u64);
            let u = CoupledUniforms::draw(&region, &mut s);
            SiteBondSample::threshold(&region, params.p_s, params.p_b, &u).reaches_rim(&region, origin)
        })
        .collect())
}

/// Fraction of trials in which the origin is connected to the rim of the box.
pub fn estimate_theta_lattice(params: &LatticeThetaParams, rng: &RngStream) -> Result<PercolationEstimate> {
    let hits = lattice_origin_hits(params, rng)?;
    let k = hits.iter().filter(|&&h| h).count();
    Ok(PercolationEstimate::binomial(
        k,
        params.trials,
        (2 * params.half_width + 1) as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{derive_stream, Purpose, StreamKey};

    fn stream(r: u64) -> RngStream {
        derive_stream(11, StreamKey::new(Purpose::Percolation, 0, r))
    }

    #[test]
    fn p_s_zero_gives_empty_graph() {
        let region = LatticeRegion::new(&[5, 5]).unwrap();
        let s = sample_bernoulli_site_bond(&region, 0.0, 0.7, &mut stream(0)).unwrap();
        let (g, _) = s.to_graph(&region).unwrap();
        assert_eq!(g.num_vertices(), 0);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn full_lattice_is_connected() {
        let region = LatticeRegion::new(&[6, 4]).unwrap();
        let s = sample_bernoulli_site_bond(&region, 1.0, 1.0, &mut stream(1)).unwrap();
        let (mut g, _) = s.to_graph(&region).unwrap();
        assert_eq!(g.num_vertices(), 24);
        assert_eq!(g.clusters().1, 1);
    }

    #[test]
    fn edge_frequency_matches_p_b() {
        let region = LatticeRegion::new(&[2, 1]).unwrap();
        let mut rng = stream(2);
        let n = 10_000;
        let open = (0..n)
            .filter(|_| sample_bernoulli_site_bond(&region, 1.0, 0.5, &mut rng).unwrap().edges[0])
            .count();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((open as f64 / n as f64 - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn rejects_bad_probabilities() {
        let region = LatticeRegion::new(&[2, 2]).unwrap();
        assert!(sample_bernoulli_site_bond(&region, 1.2, 0.5, &mut stream(3)).is_err());
    }

    #[test]
    fn zero_product_means_zero_theta() {
        let p = LatticeThetaParams { dim: 2, p_s: 0.0, p_b: 1.0, half_width: 4, trials: 200 };
        assert_eq!(estimate_theta_lattice(&p, &stream(4)).unwrap().estimate, 0.0);
        let p = LatticeThetaParams { p_s: 1.0, p_b: 0.0, ..p };
        assert_eq!(estimate_theta_lattice(&p, &stream(4)).unwrap().estimate, 0.0);
    }

    #[test]
    fn coupled_thresholds_are_nested() {
        let region = LatticeRegion::new(&[8, 8]).unwrap();
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
        for r in 0..50 {
            let u = CoupledUniforms::draw(&region, &mut stream(100 + r));
            for &ps in &grid {
                for &pb in &grid {
                    let lo = SiteBondSample::threshold(&region, ps, pb, &u);
                    for &ps2 in grid.iter().filter(|&&x| x >= ps) {
                        for &pb2 in grid.iter().filter(|&&x| x >= pb) {
                            let hi = SiteBondSample::threshold(&region, ps2, pb2, &u);
                            assert!(lo.is_subgraph_of(&hi));
                        }
                    }
                }
            }
        }
    }
}
