use serde::{Deserialize, Serialize};

use super::random_map::RandomMapRealization;
use crate::error::{invalid, Result};
use crate::geometry::{derive_stream, sample_poisson_collar, BoundaryMode, Point, Purpose, StreamKey, Window};
use crate::model::{ActivityParams, Origin, Particle, PointId, Potential, Species};

/// Plus particles outside the window that every minus particle interacts with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryCondition {
    #[default]
    Free,
    /// Poisson(`z`) plus particles in the collar, drawn once per replica, or
    /// afresh for every time index when `per_step` is set.
    PlusPoisson {
        z: f64,
        #[serde(default)]
        per_step: bool,
    },
    /// Given plus particles in the collar.
    Fixed { points: Vec<Vec<f64>> },
}

impl BoundaryCondition {
    pub fn label(&self) -> &'static str {
        match self {
            BoundaryCondition::Free => "free",
            BoundaryCondition::PlusPoisson { .. } => "plus_poisson",
            BoundaryCondition::Fixed { .. } => "fixed",
        }
    }
}

/// Everything a sampler run needs besides the replica index.
#[derive(Clone, Debug)]
pub struct SamplerSetup {
    pub window: Window,
    pub activity: ActivityParams,
    pub potential: Potential,
    pub boundary: BoundaryCondition,
    pub seed: u64,
}

impl SamplerSetup {
    pub fn new(
        window: Window,
        activity: ActivityParams,
        potential: Potential,
        boundary: BoundaryCondition,
        seed: u64,
    ) -> Result<Self> {
        potential.validate()?;
        ActivityParams::new(activity.plus, activity.minus)?;
        let range = potential.range();
        match &boundary {
            BoundaryCondition::Free => {}
            BoundaryCondition::PlusPoisson { z, .. } => {
                if !(z.is_finite() && *z > 0.0) {
                    return invalid("plus_poisson boundary: z must be positive");
                }
            }
            BoundaryCondition::Fixed { points } => {
                for p in points {
                    let p = Point::new(p)?;
                    if p.dim() != window.dim() || window.contains(&p) || !window.contains_extended(&p) {
                        return invalid("fixed boundary points must lie in the collar");
                    }
                }
            }
        }
        if boundary != BoundaryCondition::Free {
            if window.mode() == BoundaryMode::Periodic {
                return invalid("boundary particles need a non-periodic window");
            }
            if window.collar_width() < range {
                return invalid(format!(
                    "collar width {} is smaller than the interaction range {range}",
                    window.collar_width()
                ));
            }
        }
        Ok(Self { window, activity, potential, boundary, seed })
    }

    /// The realization of `F` for `species` at `time`.
    pub fn realization(&self, replica: u64, time: i64, species: Species) -> RandomMapRealization {
        RandomMapRealization::derive(self.seed, replica, time, species, &self.window, self.activity.of(species))
    }

    /// Boundary particles of a replica (at time 0 for a per-step boundary).
    pub fn boundary_points(&self, replica: u64) -> Vec<Particle> {
        self.boundary_points_at(replica, 0)
    }

    pub fn resamples_boundary(&self) -> bool {
        matches!(self.boundary, BoundaryCondition::PlusPoisson { per_step: true, .. })
    }

    /// Boundary particles seen by the maps at `time`.
    pub fn boundary_points_at(&self, replica: u64, time: i64) -> Vec<Particle> {
        let tag = |pts: Vec<Point>, t: i64| -> Vec<Particle> {
            pts.into_iter()
                .enumerate()
                .map(|(i, pos)| Particle { pos, id: PointId::new(Origin::Boundary, Species::Plus, t, i as u32) })
                .collect()
        };
        match &self.boundary {
            BoundaryCondition::Free => Vec::new(),
            BoundaryCondition::PlusPoisson { z, per_step } => {
                let t = if *per_step { time } else { 0 };
                let mut rng = derive_stream(self.seed, StreamKey::new(Purpose::Boundary, t, replica));
                tag(sample_poisson_collar(&self.window, *z, &mut rng), t)
            }
            BoundaryCondition::Fixed { points } => {
                tag(points.iter().map(|p| Point::new(p).expect("validated")).collect(), 0)
            }
        }
    }

    /// One application of `F` for `species` at `time` to the opposite species;
    /// minus particles are also thinned by the boundary. `boundary` is ignored
    /// when the boundary is resampled per step.
    pub fn apply(
        &self,
        boundary: &[Particle],
        replica: u64,
        time: i64,
        species: Species,
        opposite: &[Particle],
    ) -> Vec<Particle> {
        let r = self.realization(replica, time, species);
        let fresh;
        let boundary = if species == Species::Minus && self.resamples_boundary() {
            fresh = self.boundary_points_at(replica, time);
            &fresh[..]
        } else {
            boundary
        };
        if species == Species::Minus && !boundary.is_empty() {
            let mut input = Vec::with_capacity(opposite.len() + boundary.len());
            input.extend_from_slice(opposite);
            input.extend_from_slice(boundary);
            r.apply(&input, &self.window, &self.potential)
        } else {
            r.apply(opposite, &self.window, &self.potential)
        }
    }
}
