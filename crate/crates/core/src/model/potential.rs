use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::MAX_DIM;

/// Even, nonnegative, finite-range interspecies pair potential `J`.
///
/// Energies use `f64::INFINITY` for the hard core, so `exp(-J)` is exactly 0
/// there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    /// `J = inf` for `|x| <= 2r`, else 0 (Widom-Rowlinson).
    HardCore { r: f64 },
    /// `J = c (1 - |x|/r_max)^exponent` for `|x| <= r_max`, else 0.
    Soft { c: f64, r_max: f64, exponent: f64 },
    /// Piecewise-linear in `|x|` through `(radii[i], values[i])`, zero beyond the last radius.
    Tabulated { radii: Vec<f64>, values: Vec<f64> },
}

impl Potential {
    /// `J(x) = 3 (1 - |x|)^2` on the unit ball.
    pub fn paper_soft() -> Self {
        Potential::Soft {
            c: 3.0,
            r_max: 1.0,
            exponent: 2.0,
        }
    }

    /// Checks `J >= 0` and a finite range.
    pub fn validate(&self) -> Result<()> {
        match self {
            Potential::HardCore { r } => {
                if !(r.is_finite() && *r > 0.0) {
                    return invalid("hard_core: r must be positive");
                }
            }
            Potential::Soft { c, r_max, exponent } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return invalid("soft: c must be finite and >= 0");
                }
                if !(r_max.is_finite() && *r_max > 0.0) {
                    return invalid("soft: r_max must be positive");
                }
                if !(exponent.is_finite() && *exponent >= 0.0) {
                    return invalid("soft: exponent must be >= 0");
                }
            }
            Potential::Tabulated { radii, values } => {
                if radii.len() < 2 || radii.len() != values.len() {
                    return invalid("tabulated: need >= 2 radii and one value per radius");
                }
                if radii[0] != 0.0 {
                    return invalid("tabulated: first radius must be 0");
                }
                if radii.windows(2).any(|w| !(w[1] > w[0])) || !radii[radii.len() - 1].is_finite() {
                    return invalid("tabulated: radii must be finite and strictly increasing");
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return invalid("tabulated: values must be finite and >= 0");
                }
                if values[0] <= 0.0 {
                    return invalid("tabulated: J(0) must be positive");
                }
            }
        }
        Ok(())
    }

    /// Interaction range `R`: `J(x) = 0` for `|x| > R`.
    pub fn range(&self) -> f64 {
        match self {
            Potential::HardCore { r } => 2.0 * r,
            Potential::Soft { r_max, .. } => *r_max,
            Potential::Tabulated { radii, .. } => radii[radii.len() - 1],
        }
    }

    pub fn is_hard_core(&self) -> bool {
        matches!(self, Potential::HardCore { .. })
    }

    /// Constants `(delta, r)` with `J >= delta` on `|x| <= 2r`.
    pub fn positivity_bound(&self) -> (f64, f64) {
        match self {
            Potential::HardCore { r } => (f64::INFINITY, *r),
            // Linear on [0, radii[1]], so J >= values[0] / 2 on its first half.
            Potential::Tabulated { radii, values } => (0.5 * values[0], 0.25 * radii[1]),
            Potential::Soft { .. } => {
                let r = 0.25 * self.range();
                (self.at_distance(2.0 * r), r)
            }
        }
    }

    pub fn at_distance(&self, dist: f64) -> f64 {
        match self {
            Potential::HardCore { r } => {
                if dist <= 2.0 * r {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Potential::Soft { c, r_max, exponent } => {
                if dist > *r_max {
                    0.0
                } else {
                    c * (1.0 - dist / r_max).powf(*exponent)
                }
            }
            Potential::Tabulated { radii, values } => {
                let last = radii.len() - 1;
                if dist > radii[last] {
                    return 0.0;
                }
                let hi = radii.partition_point(|&r| r < dist).clamp(1, last);
                let (r0, r1) = (radii[hi - 1], radii[hi]);
                let t = ((dist - r0) / (r1 - r0)).clamp(0.0, 1.0);
                values[hi - 1] + t * (values[hi] - values[hi - 1])
            }
        }
    }

    /// `J(displacement)`.
    pub fn eval(&self, displacement: &[f64]) -> f64 {
        self.at_distance(displacement.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    pub(crate) fn eval_raw(&self, d: &[f64; MAX_DIM]) -> f64 {
        self.at_distance(d.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// Edge probability `1 - exp(-J)`; 1 inside a hard core.
    pub fn edge_prob(&self, displacement: &[f64]) -> f64 {
        edge_prob_from_energy(self.eval(displacement))
    }

    pub(crate) fn edge_prob_raw(&self, d: &[f64; MAX_DIM]) -> f64 {
        edge_prob_from_energy(self.eval_raw(d))
    }
}

#[inline]
pub fn edge_prob_from_energy(j: f64) -> f64 {
    if j == f64::INFINITY {
        1.0
    } else {
        -(-j).exp_m1()
    }
}
