use super::window::{BoundaryMode, Point, Window, MAX_DIM};
use crate::error::{invalid, Result};

const MAX_CELLS: usize = 1 << 22;

/// Uniform cell list over the window (plus collar) with cells of side `>= range`,
/// so every pair within `range` lies in the same or in adjacent cells.
#[derive(Clone, Debug)]
pub struct CellGrid {
    window: Window,
    range: f64,
    periodic: bool,
    origin: [f64; MAX_DIM],
    side: [f64; MAX_DIM],
    counts: [usize; MAX_DIM],
    // CSR layout: points of cell c are entries[starts[c]..starts[c + 1]].
    starts: Vec<usize>,
    entries: Vec<usize>,
    points: Vec<Point>,
}

impl CellGrid {
    pub fn build(window: &Window, points: &[Point], range: f64) -> Result<Self> {
        if !(range > 0.0 && range.is_finite()) {
            return invalid(format!("cell grid range must be positive, got {range}"));
        }
        let dim = window.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return invalid(format!(
                "point of dimension {} in a {dim}-dimensional window",
                p.dim()
            ));
        }
        let periodic = window.mode() == BoundaryMode::Periodic;
        let pad = if periodic { 0.0 } else { window.collar_width() };

        let mut origin = [0.0; MAX_DIM];
        let mut extent = [1.0; MAX_DIM];
        let mut counts = [1usize; MAX_DIM];
        for k in 0..dim {
            origin[k] = window.raw_lower()[k] - pad;
            extent[k] = window.raw_upper()[k] + pad - origin[k];
            counts[k] = ((extent[k] / range).floor() as usize).max(1);
        }
        let total: usize = counts[..dim].iter().product();
        if total > MAX_CELLS {
            let shrink = (MAX_CELLS as f64 / total as f64).powf(1.0 / dim as f64);
            for c in counts.iter_mut().take(dim) {
                *c = ((*c as f64 * shrink).floor() as usize).max(1);
            }
        }
        let mut side = [1.0; MAX_DIM];
        for k in 0..dim {
            side[k] = extent[k] / counts[k] as f64;
        }

        let mut grid = Self {
            window: window.clone(),
            range,
            periodic,
            origin,
            side,
            counts,
            starts: Vec::new(),
            entries: Vec::new(),
            points: points.to_vec(),
        };

        let ncells = grid.num_cells();
        let cell_of: Vec<usize> = points.iter().map(|p| grid.cell_index(p)).collect();
        let mut starts = vec![0usize; ncells + 1];
        for &c in &cell_of {
            starts[c + 1] += 1;
        }
        for c in 0..ncells {
            starts[c + 1] += starts[c];
        }
        let mut fill = starts.clone();
        let mut entries = vec![0usize; points.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            entries[fill[c]] = i;
            fill[c] += 1;
        }
        grid.starts = starts;
        grid.entries = entries;
        Ok(grid)
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn num_cells(&self) -> usize {
        self.counts[..self.window.dim()].iter().product()
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.counts[..self.window.dim()]
    }

    pub fn cell_side(&self) -> &[f64] {
        &self.side[..self.window.dim()]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Indices of the points stored in cell `c`.
    pub fn cell(&self, c: usize) -> &[usize] {
        &self.entries[self.starts[c]..self.starts[c + 1]]
    }

    fn axis_index(&self, k: usize, x: f64) -> usize {
        let raw = ((x - self.origin[k]) / self.side[k]).floor() as i64;
        let n = self.counts[k] as i64;
        if self.periodic {
            raw.rem_euclid(n) as usize
        } else {
            // Clamping is 1-Lipschitz, so adjacent cells stay adjacent.
            raw.clamp(0, n - 1) as usize
        }
    }

    fn cell_index(&self, p: &Point) -> usize {
        let mut idx = 0;
        for k in (0..self.window.dim()).rev() {
            idx = idx * self.counts[k] + self.axis_index(k, p.raw()[k]);
        }
        idx
    }

    fn cell_coords(&self, mut c: usize) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for (k, o) in out.iter_mut().enumerate().take(self.window.dim()) {
            *o = c % self.counts[k];
            c /= self.counts[k];
        }
        out
    }

    /// The cell itself and its surrounding ring, deduplicated and sorted.
    fn neighbor_cells(&self, c: usize, out: &mut Vec<usize>) {
        out.clear();
        let dim = self.window.dim();
        let base = self.cell_coords(c);
        let combos = 3usize.pow(dim as u32);
        'outer: for combo in 0..combos {
            let mut rem = combo;
            let mut idx = 0usize;
            let mut stride = 1usize;
            for k in 0..dim {
                let off = (rem % 3) as i64 - 1;
                rem /= 3;
                let n = self.counts[k] as i64;
                let mut v = base[k] as i64 + off;
                if self.periodic {
                    v = v.rem_euclid(n);
                } else if v < 0 || v >= n {
                    continue 'outer;
                }
                idx += v as usize * stride;
                stride *= self.counts[k];
            }
            out.push(idx);
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Calls `f(i, j, dist_sq)` once for every pair `i < j` within `range`.
    pub fn for_each_pair<F: FnMut(usize, usize, f64)>(&self, mut f: F) {
        let r2 = self.range * self.range;
        let mut nbrs = Vec::with_capacity(27);
        for c in 0..self.num_cells() {
            let here = self.cell(c);
            if here.is_empty() {
                continue;
            }
            self.neighbor_cells(c, &mut nbrs);
            for &c2 in nbrs.iter().filter(|&&c2| c2 >= c) {
                let there = self.cell(c2);
                for (a, &i) in here.iter().enumerate() {
                    let partners = if c2 == c { &here[a + 1..] } else { there };
                    for &j in partners {
                        let d2 = self.window.distance_sq(&self.points[i], &self.points[j]);
                        if d2 <= r2 {
                            f(i.min(j), i.max(j), d2);
                        }
                    }
                }
            }
        }
    }

    pub fn neighbor_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        self.for_each_pair(|i, j, _| pairs.push((i, j)));
        pairs.sort_unstable();
        pairs
    }

    /// Calls `f(index, displacement)` for every stored point within `range` of `p`,
    /// where the displacement is `stored - p`.
    pub fn for_each_within<F: FnMut(usize, [f64; MAX_DIM])>(&self, p: &Point, mut f: F) {
        let r2 = self.range * self.range;
        let mut nbrs = Vec::with_capacity(27);
        self.neighbor_cells(self.cell_index(p), &mut nbrs);
        for &c in &nbrs {
            for &i in self.cell(c) {
                let d = self.window.displacement(&self.points[i], p);
                let d2: f64 = d.iter().map(|v| v * v).sum();
                if d2 <= r2 {
                    f(i, d);
                }
            }
        }
    }
}
