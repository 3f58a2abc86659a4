use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// A point in `R^d`, `d <= MAX_DIM`. Unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return invalid(format!(
                "point dimension {} outside 1..={MAX_DIM}",
                coords.len()
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return invalid("point coordinates must be finite");
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..coords.len()].copy_from_slice(coords);
        Ok(Self {
            coords: buf,
            dim: coords.len() as u8,
        })
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self {
            coords: [x, y, 0.0],
            dim: 2,
        }
    }

    pub(crate) fn from_raw(coords: [f64; MAX_DIM], dim: usize) -> Self {
        Self {
            coords,
            dim: dim as u8,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    pub(crate) fn raw(&self) -> &[f64; MAX_DIM] {
        &self.coords
    }

    pub fn sub(&self, other: &Point) -> [f64; MAX_DIM] {
        let mut d = [0.0; MAX_DIM];
        for (k, v) in d.iter_mut().enumerate() {
            *v = self.coords[k] - other.coords[k];
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    #[default]
    Free,
    PlusPoisson,
    Periodic,
}

/// Axis-aligned simulation box with an optional boundary collar around it.
///
/// Points of a boundary condition live in the collar, i.e. in the box
/// enlarged by `collar_width` on every side, minus the window itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    lower: [f64; MAX_DIM],
    upper: [f64; MAX_DIM],
    dim: usize,
    mode: BoundaryMode,
    collar_width: f64,
}

impl Window {
    pub fn new(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let dim = lower.len();
        if dim == 0 || dim > MAX_DIM {
            return invalid(format!("window dimension {dim} outside 1..={MAX_DIM}"));
        }
        if upper.len() != dim {
            return invalid("lower and upper corners differ in dimension");
        }
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for k in 0..dim {
            if !(lower[k].is_finite() && upper[k].is_finite() && upper[k] > lower[k]) {
                return invalid(format!(
                    "axis {k}: need finite lower < upper, got [{}, {}]",
                    lower[k], upper[k]
                ));
            }
            lo[k] = lower[k];
            hi[k] = upper[k];
        }
        Ok(Self {
            lower: lo,
            upper: hi,
            dim,
            mode: BoundaryMode::Free,
            collar_width: 0.0,
        })
    }

    /// `[0, side)^d`.
    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        Self::new(&vec![0.0; dim], &vec![side; dim])
    }

    pub fn with_mode(mut self, mode: BoundaryMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_collar(mut self, width: f64) -> Result<Self> {
        if !(width.is_finite() && width >= 0.0) {
            return invalid("collar width must be finite and >= 0");
        }
        self.collar_width = width;
        Ok(self)
    }

    /// Checks the collar is wide enough for an interaction of range `range`.
    pub fn check_range(&self, range: f64) -> Result<()> {
        if self.mode == BoundaryMode::PlusPoisson && self.collar_width < range {
            return Err(Error::InvalidInput(format!(
                "collar width {} smaller than interaction range {range}",
                self.collar_width
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn collar_width(&self) -> f64 {
        self.collar_width
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper[..self.dim]
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|k| self.side(k)).product()
    }

    /// Volume of the window enlarged by the collar.
    pub fn extended_volume(&self) -> f64 {
        (0..self.dim)
            .map(|k| self.side(k) + 2.0 * self.collar_width)
            .product()
    }

    pub fn collar_volume(&self) -> f64 {
        self.extended_volume() - self.volume()
    }

    /// Half-open membership test `lower <= x < upper`.
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim
            && (0..self.dim).all(|k| p.coords[k] >= self.lower[k] && p.coords[k] < self.upper[k])
    }

    pub fn contains_extended(&self, p: &Point) -> bool {
        let c = self.collar_width;
        p.dim() == self.dim
            && (0..self.dim)
                .all(|k| p.coords[k] >= self.lower[k] - c && p.coords[k] < self.upper[k] + c)
    }

    /// Euclidean distance from `p` to the complement of the window
    /// (zero for points outside).
    pub fn depth(&self, p: &Point) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        (0..self.dim)
            .map(|k| (p.coords[k] - self.lower[k]).min(self.upper[k] - p.coords[k]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Displacement `x - y`, minimum-image under periodic mode.
    pub fn displacement(&self, x: &Point, y: &Point) -> [f64; MAX_DIM] {
        let mut d = x.sub(y);
        if self.mode == BoundaryMode::Periodic {
            for (k, v) in d.iter_mut().enumerate().take(self.dim) {
                let side = self.side(k);
                *v -= side * (*v / side).round();
            }
        }
        d
    }

    pub fn distance_sq(&self, x: &Point, y: &Point) -> f64 {
        self.displacement(x, y).iter().map(|v| v * v).sum()
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        if x.dim() != self.dim || y.dim() != self.dim {
            return invalid(format!(
                "dimension mismatch: window {}, points {} and {}",
                self.dim,
                x.dim(),
                y.dim()
            ));
        }
        Ok(self.distance_sq(x, y).sqrt())
    }

    /// Sub-box `[lower, upper)` that must sit inside this window.
    pub fn sub_window(&self, lower: &[f64], upper: &[f64]) -> Result<Window> {
        let sub = Window::new(lower, upper)?;
        if sub.dim != self.dim {
            return invalid("sub-window dimension differs from window");
        }
        for k in 0..self.dim {
            if sub.lower[k] < self.lower[k] || sub.upper[k] > self.upper[k] {
                return invalid("sub-window is not contained in the window");
            }
        }
        Ok(sub)
    }

    /// Smallest distance between the sub-box and the window boundary.
    pub fn margin_of(&self, sub: &Window) -> f64 {
        (0..self.dim)
            .map(|k| (sub.lower[k] - self.lower[k]).min(self.upper[k] - sub.upper[k]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Sub-box centered in the window, with each side scaled by `fraction`.
    pub fn centered_sub_window(&self, fraction: f64) -> Result<Window> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return invalid("fraction must lie in (0, 1]");
        }
        let mut lo = vec![0.0; self.dim];
        let mut hi = vec![0.0; self.dim];
        for k in 0..self.dim {
            let mid = 0.5 * (self.lower[k] + self.upper[k]);
            let half = 0.5 * fraction * self.side(k);
            lo[k] = mid - half;
            hi[k] = mid + half;
        }
        self.sub_window(&lo, &hi)
    }

    pub(crate) fn raw_lower(&self) -> &[f64; MAX_DIM] {
        &self.lower
    }

    pub(crate) fn raw_upper(&self) -> &[f64; MAX_DIM] {
        &self.upper
    }
}
