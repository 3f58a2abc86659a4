use std::collections::HashMap;

use super::window::MAX_DIM;
use crate::error::{invalid, Result};

/// Integer lattice site in `Z^d`, padded with zeros beyond `d`.
pub type Site = [i64; MAX_DIM];

/// A box of lattice sites together with its outer boundary
/// (sites at Euclidean distance 1 from the box).
///
/// Interior sites get indices `0..len()` in row-major order (first axis fastest);
/// boundary sites follow at `len()..len() + boundary_len()`.
#[derive(Clone, Debug)]
pub struct LatticeRegion {
    dim: usize,
    lower: Site,
    extents: [usize; MAX_DIM],
    boundary: Vec<Site>,
    boundary_index: HashMap<Site, usize>,
    edges: Vec<(usize, usize)>,
}

impl LatticeRegion {
    pub fn new(extents: &[usize]) -> Result<Self> {
        Self::with_lower(&vec![0; extents.len()], extents)
    }

    /// The box `{-half, ..., half}^d`, centered at the origin.
    pub fn centered(dim: usize, half: usize) -> Result<Self> {
        Self::with_lower(&vec![-(half as i64); dim], &vec![2 * half + 1; dim])
    }

    pub fn with_lower(lower: &[i64], extents: &[usize]) -> Result<Self> {
        let dim = extents.len();
        if dim == 0 || dim > MAX_DIM || lower.len() != dim {
            return invalid(format!("lattice dimension must be 1..={MAX_DIM}"));
        }
        if extents.contains(&0) {
            return invalid("lattice extents must be >= 1");
        }
        let mut lo = [0i64; MAX_DIM];
        let mut ext = [1usize; MAX_DIM];
        lo[..dim].copy_from_slice(lower);
        ext[..dim].copy_from_slice(extents);
        let mut region = Self {
            dim,
            lower: lo,
            extents: ext,
            boundary: Vec::new(),
            boundary_index: HashMap::new(),
            edges: Vec::new(),
        };
        region.build_boundary_and_edges();
        Ok(region)
    }

    fn build_boundary_and_edges(&mut self) {
        let n = self.len();
        for i in 0..n {
            let s = self.site(i);
            for k in 0..self.dim {
                for step in [-1i64, 1] {
                    let mut t = s;
                    t[k] += step;
                    let j = match self.interior_index(&t) {
                        Some(j) => j,
                        None => {
                            let next = n + self.boundary.len();
                            *self.boundary_index.entry(t).or_insert_with(|| {
                                self.boundary.push(t);
                                next
                            })
                        }
                    };
                    // Interior pairs are listed once, from the lower index.
                    if j >= n || i < j {
                        self.edges.push((i, j));
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents[..self.dim]
    }

    /// Number of interior sites.
    pub fn len(&self) -> usize {
        self.extents[..self.dim].iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn site(&self, index: usize) -> Site {
        let n = self.len();
        if index >= n {
            return self.boundary[index - n];
        }
        let mut rem = index;
        let mut s = [0i64; MAX_DIM];
        for k in 0..self.dim {
            s[k] = self.lower[k] + (rem % self.extents[k]) as i64;
            rem /= self.extents[k];
        }
        s
    }

    pub fn interior_index(&self, s: &Site) -> Option<usize> {
        let mut idx = 0usize;
        for k in (0..self.dim).rev() {
            let off = s[k] - self.lower[k];
            if off < 0 || off >= self.extents[k] as i64 {
                return None;
            }
            idx = idx * self.extents[k] + off as usize;
        }
        Some(idx)
    }

    /// Index in the combined interior + boundary numbering.
    pub fn index_of(&self, s: &Site) -> Option<usize> {
        self.interior_index(s)
            .or_else(|| self.boundary_index.get(s).copied())
    }

    pub fn is_interior(&self, index: usize) -> bool {
        index < self.len()
    }

    /// All nearest-neighbor edges `{i, j}` with at least one endpoint in the box.
    /// Each edge appears once; boundary endpoints come second.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges with both endpoints in the box.
    pub fn internal_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        self.edges.iter().copied().filter(move |&(_, j)| j < n)
    }

    /// Interior sites on the inner rim of the box (some coordinate extremal).
    pub fn is_rim(&self, index: usize) -> bool {
        let s = self.site(index);
        (0..self.dim).any(|k| s[k] == self.lower[k] || s[k] == self.lower[k] + self.extents[k] as i64 - 1)
    }
}
