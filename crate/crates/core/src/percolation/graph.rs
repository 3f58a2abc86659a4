use std::io::{BufRead, Write};

use super::union_find::UnionFind;
use crate::error::{invalid, Error, Result};
use crate::geometry::Point;

/// Vertices with coordinates, an edge list, and an incrementally maintained
/// cluster structure.
#[derive(Clone, Debug)]
pub struct Graph {
    dim: usize,
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    uf: UnionFind,
}

impl Graph {
    pub fn new(dim: usize, vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| p.dim() != dim) {
            return invalid("vertex dimension differs from graph dimension");
        }
        let n = vertices.len();
        Ok(Self {
            dim,
            vertices,
            edges: Vec::new(),
            uf: UnionFind::new(n),
        })
    }

    /// Graph without geometry: vertices sit at the origin of `R^1`.
    pub fn abstract_graph(n: usize) -> Self {
        let origin = Point::new(&[0.0]).expect("valid point");
        Self::new(1, vec![origin; n]).expect("uniform dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Adds an edge; returns `true` if it merged two clusters.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        let n = self.vertices.len();
        if i >= n || j >= n {
            return invalid(format!("edge ({i}, {j}) references a vertex >= {n}"));
        }
        self.edges.push((i, j));
        Ok(self.uf.union(i, j))
    }

    /// Number of connected components `k`.
    pub fn num_clusters(&self) -> usize {
        self.uf.components()
    }

    pub fn connected(&mut self, i: usize, j: usize) -> bool {
        self.uf.connected(i, j)
    }

    pub fn root(&mut self, i: usize) -> usize {
        self.uf.find(i)
    }

    /// Per-vertex labels (smallest vertex index of the component) and the component count.
    pub fn clusters(&mut self) -> (Vec<usize>, usize) {
        (self.uf.canonical_labels(), self.uf.components())
    }

    /// Text dump: header `d n m`, then `n` coordinate lines, then `m` lines `i j`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {} {}", self.dim, self.vertices.len(), self.edges.len())?;
        for p in &self.vertices {
            let line: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        for (i, j) in &self.edges {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(input: R) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("graph dump: {msg}"));
        let mut lines = input.lines();
        let mut next_line = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| bad("unexpected end of input"))?
                .map_err(|e| bad(&e.to_string()))
        };
        let header = next_line()?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_>>()?;
        let [d, n, m] = nums[..] else {
            return Err(bad("header must be `d n m`"));
        };
        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let line = next_line()?;
            let c: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad coordinate")))
                .collect::<Result<_>>()?;
            if c.len() != d {
                return Err(bad("coordinate count differs from d"));
            }
            vertices.push(Point::new(&c)?);
        }
        let mut g = Graph::new(d, vertices)?;
        for _ in 0..m {
            let line = next_line()?;
            let ij: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad edge")))
                .collect::<Result<_>>()?;
            let [i, j] = ij[..] else {
                return Err(bad("edge line must be `i j`"));
            };
            g.add_edge(i, j)?;
        }
        Ok(g)
    }
}

/// Cluster labels and count of `g`.
pub fn clusters(g: &mut Graph) -> (Vec<usize>, usize) {
    g.clusters()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{derive_stream, Purpose, StreamKey};

    fn dfs_components(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    fn random_edges(n: usize, m: usize, seed: u64) -> Vec<(usize, usize)> {
        let mut s = derive_stream(seed, StreamKey::new(Purpose::Custom(3), 0, 0));
        (0..m)
            .map(|_| ((s.uniform() * n as f64) as usize, (s.uniform() * n as f64) as usize))
            .collect()
    }

    #[test]
    fn edgeless_and_path() {
        let mut g = Graph::abstract_graph(6);
        assert_eq!(g.clusters().1, 6);
        let mut p = Graph::abstract_graph(5);
        for i in 0..4 {
            p.add_edge(i, i + 1).unwrap();
        }
        assert_eq!(p.clusters(), (vec![0; 5], 1));
    }

    #[test]
    fn matches_dfs_on_random_graphs() {
        for seed in 0..20 {
            let edges = random_edges(50, 40, seed);
            let mut g = Graph::abstract_graph(50);
            for &(i, j) in &edges {
                g.add_edge(i, j).unwrap();
            }
            assert_eq!(g.num_clusters(), dfs_components(50, &edges));
        }
    }

    #[test]
    fn labels_are_component_minima() {
        let mut g = Graph::abstract_graph(6);
        g.add_edge(5, 3).unwrap();
        g.add_edge(4, 1).unwrap();
        let (labels, k) = g.clusters();
        assert_eq!(k, 4);
        assert_eq!(labels, vec![0, 1, 2, 3, 1, 3]);
    }

    #[test]
    fn rejects_out_of_range_edges() {
        let mut g = Graph::abstract_graph(2);
        assert!(g.add_edge(0, 2).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let mut g = Graph::new(2, vec![Point::xy(0.1, 0.25), Point::xy(1.0 / 3.0, 2.0)]).unwrap();
        g.add_edge(0, 1).unwrap();
        let mut buf = Vec::new();
        g.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 2 1\n0.1 0.25\n"));
        let back = Graph::read_dump(&buf[..]).unwrap();
        assert_eq!(back.vertices(), g.vertices());
        assert_eq!(back.edges(), g.edges());
        assert!(Graph::read_dump(&b"2 1 0\n1.0\n"[..]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn insertion_order_and_monotone_k(seed in 0u64..500, n in 1usize..40, m in 0usize..60) {
            let edges = random_edges(n, m, seed);
            let mut g = Graph::abstract_graph(n);
            for &(i, j) in &edges {
                let before = g.num_clusters();
                let distinct = !g.connected(i, j);
                let merged = g.add_edge(i, j).unwrap();
                proptest::prop_assert_eq!(merged, distinct);
                proptest::prop_assert_eq!(g.num_clusters(), before - merged as usize);
            }
            let mut rev = Graph::abstract_graph(n);
            for &(i, j) in edges.iter().rev() {
                rev.add_edge(i, j).unwrap();
            }
            proptest::prop_assert_eq!(g.clusters(), rev.clusters());
        }
    }
}
