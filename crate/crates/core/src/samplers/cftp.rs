use serde::{Deserialize, Serialize};

use super::random_map::{is_sorted_subset, same_ids};
use super::setup::SamplerSetup;
use crate::error::{invalid, Error, Result};
use crate::geometry::BoundaryMode;
use crate::model::{Particle, Species, SpinPointConfig};

/// Strictly decreasing negative start times `N_1 > N_2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct CftpSchedule {
    starts: Vec<i64>,
}

impl CftpSchedule {
    pub fn new(starts: Vec<i64>) -> Result<Self> {
        if starts.is_empty() {
            return invalid("schedule needs at least one start time");
        }
        if starts[0] > -1 {
            return invalid("first start time must be <= -1");
        }
        if starts.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("start times must be strictly decreasing");
        }
        Ok(Self { starts })
    }

    /// `N_k = -2^k` for `k = 1..=max_k`.
    pub fn doubling(max_k: u32) -> Result<Self> {
        if max_k == 0 || max_k > 26 {
            return invalid("doubling schedule needs 1 <= max_k <= 26");
        }
        Self::new((1..=max_k).map(|k| -(1i64 << k)).collect())
    }

    /// `N_k = first * 2^(k-1)`, up to `max_runs` runs.
    pub fn geometric(first: i64, max_runs: u32) -> Result<Self> {
        if first > -1 || max_runs == 0 {
            return invalid("geometric schedule needs first <= -1 and max_runs >= 1");
        }
        let mut starts = Vec::new();
        let mut n = first;
        for _ in 0..max_runs {
            starts.push(n);
            match n.checked_mul(2) {
                Some(m) if m >= -(1i64 << 26) => n = m,
                _ => break,
            }
        }
        Self::new(starts)
    }

    pub fn starts(&self) -> &[i64] {
        &self.starts
    }
}

impl Default for CftpSchedule {
    fn default() -> Self {
        Self::doubling(20).expect("valid")
    }
}

impl TryFrom<Vec<i64>> for CftpSchedule {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CftpSchedule> for Vec<i64> {
    fn from(s: CftpSchedule) -> Self {
        s.starts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CftpOutcome {
    pub state: SpinPointConfig,
    /// 1-based index of the run that coalesced.
    pub runs: usize,
    /// Its start time `N_K`.
    pub start: i64,
}

impl CftpOutcome {
    /// Coalescence time `-N_K`.
    pub fn coalescence_time(&self) -> u64 {
        self.start.unsigned_abs()
    }
}

fn ordering_error(t: i64, what: &str) -> Error {
    Error::Invariant(format!("CFTP ordering violated at time {t}: {what}"))
}

/// Runs the lower and upper chains from `start` to time 0. Returns the final
/// plus sets of both chains.
fn run_from(setup: &SamplerSetup, boundary: &[Particle], replica: u64, start: i64) -> Result<(Vec<Particle>, Vec<Particle>)> {
    let mut lo_plus: Vec<Particle> = Vec::new();
    let mut hi_plus = setup.apply(boundary, replica, start, Species::Plus, &[]);
    let mut lo_minus = setup.apply(boundary, replica, start, Species::Minus, &lo_plus);
    let mut hi_minus = setup.apply(boundary, replica, start, Species::Minus, &hi_plus);
    let mut coupled = false;
    for t in start + 1..=0 {
        hi_plus = setup.apply(boundary, replica, t, Species::Plus, &hi_minus);
        if coupled {
            lo_plus.clone_from(&hi_plus);
        } else {
            lo_plus = setup.apply(boundary, replica, t, Species::Plus, &lo_minus);
            if !is_sorted_subset(&lo_plus, &hi_plus) {
                return Err(ordering_error(t, "lower plus set not contained in upper"));
            }
        }
        if t < 0 {
            hi_minus = setup.apply(boundary, replica, t, Species::Minus, &hi_plus);
            if coupled {
                lo_minus.clone_from(&hi_minus);
            } else {
                lo_minus = setup.apply(boundary, replica, t, Species::Minus, &lo_plus);
                if !is_sorted_subset(&hi_minus, &lo_minus) {
                    return Err(ordering_error(t, "upper minus set not contained in lower"));
                }
                coupled = same_ids(&lo_plus, &hi_plus) && same_ids(&lo_minus, &hi_minus);
            }
        }
    }
    Ok((lo_plus, hi_plus))
}

/// Dominated coupling from the past: for each start time of the schedule,
/// runs the chain from the empty and from the maximal plus configuration
/// with the same time-indexed maps, and returns the common state at time 0
/// of the first run in which the two agree.
pub fn cftp_sample(setup: &SamplerSetup, schedule: &CftpSchedule, replica: u64) -> Result<CftpOutcome> {
    if setup.window.mode() == BoundaryMode::Periodic {
        return invalid("CFTP does not support periodic windows");
    }
    let boundary = setup.boundary_points(replica);
    for (k, &start) in schedule.starts().iter().enumerate() {
        let (lo, hi) = run_from(setup, &boundary, replica, start)?;
        if same_ids(&lo, &hi) {
            let minus = setup.apply(&boundary, replica, 0, Species::Minus, &hi);
            return Ok(CftpOutcome {
                state: SpinPointConfig::new(hi, minus),
                runs: k + 1,
                start,
            });
        }
    }
    Err(Error::NonCoalescence {
        runs: schedule.starts().len(),
        start: *schedule.starts().last().expect("nonempty"),
    })
}
