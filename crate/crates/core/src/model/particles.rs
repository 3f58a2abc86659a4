use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    Plus,
    Minus,
}

impl Species {
    pub fn opposite(self) -> Species {
        match self {
            Species::Plus => Species::Minus,
            Species::Minus => Species::Plus,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Species::Plus => 1,
            Species::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Species::Plus => "+",
            Species::Minus => "-",
        }
    }
}

/// Where a particle came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// Point `index` of the Poisson draw of the random map at `time` for `species`.
    Draw,
    /// Point of a boundary condition.
    Boundary,
    /// User-supplied point (e.g. an initial state).
    External,
}

/// Stable identity of a particle. Edge decisions of the random map are keyed
/// on it, so a particle keeps its random edges wherever it reappears.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(u64);

const TIME_BITS: u32 = 28;
const TIME_OFFSET: i64 = 1 << (TIME_BITS - 1);

impl PointId {
    pub fn new(origin: Origin, species: Species, time: i64, index: u32) -> Self {
        assert!(
            (-TIME_OFFSET..TIME_OFFSET).contains(&time),
            "time index {time} out of range"
        );
        let o = match origin {
            Origin::Draw => 0u64,
            Origin::Boundary => 1,
            Origin::External => 2,
        };
        let s = match species {
            Species::Plus => 0u64,
            Species::Minus => 1,
        };
        let t = (time + TIME_OFFSET) as u64;
        PointId((o << 62) | (s << 61) | (t << 32) | index as u64)
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub fn time(self) -> i64 {
        ((self.0 >> 32) & ((1 << TIME_BITS) - 1)) as i64 - TIME_OFFSET
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Particle {
    pub pos: Point,
    pub id: PointId,
}

/// Two-species point configuration `(X+, X-)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpinPointConfig {
    pub plus: Vec<Particle>,
    pub minus: Vec<Particle>,
}

impl SpinPointConfig {
    pub fn new(plus: Vec<Particle>, minus: Vec<Particle>) -> Self {
        Self { plus, minus }
    }

    /// Builds a configuration from bare positions, tagging them as external points.
    pub fn from_points(plus: &[Point], minus: &[Point]) -> Self {
        let tag = |pts: &[Point], s: Species| {
            pts.iter()
                .enumerate()
                .map(|(i, p)| Particle {
                    pos: *p,
                    id: PointId::new(Origin::External, s, 0, i as u32),
                })
                .collect()
        };
        Self {
            plus: tag(plus, Species::Plus),
            minus: tag(minus, Species::Minus),
        }
    }

    pub fn species(&self, s: Species) -> &[Particle] {
        match s {
            Species::Plus => &self.plus,
            Species::Minus => &self.minus,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn validate(&self, w: &Window) -> Result<()> {
        if self
            .plus
            .iter()
            .chain(&self.minus)
            .any(|p| !w.contains_extended(&p.pos))
        {
            return invalid("configuration has points outside window and collar");
        }
        Ok(())
    }

    /// Particle counts of each species inside `region`.
    pub fn counts_in(&self, region: &Window) -> (usize, usize) {
        let c = |v: &[Particle]| v.iter().filter(|p| region.contains(&p.pos)).count();
        (c(&self.plus), c(&self.minus))
    }
}

/// Species activities `z+`, `z-`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivityParams {
    pub plus: f64,
    pub minus: f64,
}

impl ActivityParams {
    pub fn new(plus: f64, minus: f64) -> Result<Self> {
        if !(plus.is_finite() && plus > 0.0 && minus.is_finite() && minus > 0.0) {
            return invalid(format!("activities must be positive, got ({plus}, {minus})"));
        }
        Ok(Self { plus, minus })
    }

    pub fn symmetric(z: f64) -> Result<Self> {
        Self::new(z, z)
    }

    pub fn of(&self, s: Species) -> f64 {
        match s {
            Species::Plus => self.plus,
            Species::Minus => self.minus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_id_round_trip() {
        for t in [-100_000, -1, 0, 5, 1_000_000] {
            let id = PointId::new(Origin::Draw, Species::Minus, t, 77);
            assert_eq!(id.time(), t);
            assert_eq!(id.index(), 77);
        }
        assert_ne!(
            PointId::new(Origin::Draw, Species::Plus, 1, 0),
            PointId::new(Origin::Draw, Species::Minus, 1, 0)
        );
        assert_ne!(
            PointId::new(Origin::Draw, Species::Plus, 1, 0),
            PointId::new(Origin::Boundary, Species::Plus, 1, 0)
        );
    }

    #[test]
    fn activities_must_be_positive() {
        assert!(ActivityParams::new(0.0, 1.0).is_err());
        assert!(ActivityParams::symmetric(f64::NAN).is_err());
        assert_eq!(ActivityParams::new(1.0, 2.0).unwrap().of(Species::Minus), 2.0);
    }
}
