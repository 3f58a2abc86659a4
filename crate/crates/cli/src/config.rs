use rcsim_core::geometry::{BoundaryMode, Window, MAX_DIM};
use rcsim_core::model::{ActivityParams, Potential};
use rcsim_core::percolation::ConnectionRule;
use rcsim_core::samplers::{BoundaryCondition, CftpSchedule, SamplerSetup};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Sample,
    Cftp,
    Sweep,
    Validate,
    Percolation,
}

/// One experiment, parsed from a single JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when given.
    #[serde(default)]
    pub command: Option<Command>,
    pub seed: u64,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default = "Potential::paper_soft")]
    pub potential: Potential,
    #[serde(default)]
    pub activity: ActivitySpec,
    #[serde(default)]
    pub boundary: BoundaryCondition,
    #[serde(default)]
    pub schedule: Option<CftpSchedule>,
    /// MCMC sweeps per replica.
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    /// Independent replicas (samples).
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub subwindow: SubwindowSpec,
    /// Write one CSV and one metadata file per replica.
    #[serde(default = "default_true")]
    pub write_samples: bool,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub percolation: Option<PercolationSpec>,
    #[serde(default)]
    pub validate: ValidateSpec,
}

fn default_dimension() -> usize {
    2
}
fn default_sweeps() -> usize {
    1000
}
fn default_replicas() -> usize {
    1
}
fn default_true() -> bool {
    true
}

/// Either a cube `[0, side)^d` or explicit corners.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default)]
    pub side: Option<f64>,
    #[serde(default)]
    pub lower: Option<Vec<f64>>,
    #[serde(default)]
    pub upper: Option<Vec<f64>>,
    #[serde(default)]
    pub periodic: bool,
    /// Collar width; defaults to the interaction range when a boundary condition is set.
    #[serde(default)]
    pub collar: Option<f64>,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { side: Some(1.0), lower: None, upper: None, periodic: false, collar: None }
    }
}

/// `z` for both species, or `z_plus` and `z_minus`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivitySpec {
    #[serde(default)]
    pub z: Option<f64>,
    #[serde(default)]
    pub z_plus: Option<f64>,
    #[serde(default)]
    pub z_minus: Option<f64>,
}

impl ActivitySpec {
    pub fn resolve(&self) -> Result<ActivityParams, CliError> {
        let pair = match (self.z, self.z_plus, self.z_minus) {
            (Some(z), None, None) => (z, z),
            (None, Some(p), Some(m)) => (p, m),
            _ => return Err(CliError::config("activity", "give either z, or both z_plus and z_minus")),
        };
        ActivityParams::new(pair.0, pair.1).map_err(|e| CliError::config("activity", e))
    }
}

/// Observation window for densities: a centered fraction of the window or explicit corners.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubwindowSpec {
    #[serde(default)]
    pub fraction: Option<f64>,
    #[serde(default)]
    pub lower: Option<Vec<f64>>,
    #[serde(default)]
    pub upper: Option<Vec<f64>>,
}

impl Default for SubwindowSpec {
    fn default() -> Self {
        Self { fraction: Some(1.0), lower: None, upper: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Z,
    PS,
    PB,
}

impl SweepParameter {
    pub fn label(self) -> &'static str {
        match self {
            SweepParameter::Z => "z",
            SweepParameter::PS => "p_s",
            SweepParameter::PB => "p_b",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    #[default]
    Cftp,
    Mcmc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    #[serde(default)]
    pub sampler: SamplerKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum PercolationSpec {
    /// Site-bond percolation on `{-L..L}^d`.
    Lattice { p_s: f64, p_b: f64, half_width: usize, trials: usize },
    /// Poisson random-edge model on the configured window.
    Continuum { z: f64, rule: ConnectionRule, trials: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSpec {
    /// Draws per chi-square coupling test.
    #[serde(default = "default_validate_samples")]
    pub samples: usize,
    /// Replace `p` by a wrong value in the identity checks (negative control).
    #[serde(default)]
    pub inject_wrong_p: bool,
}

fn default_validate_samples() -> usize {
    100_000
}

impl Default for ValidateSpec {
    fn default() -> Self {
        Self { samples: default_validate_samples(), inject_wrong_p: false }
    }
}

/// Parses a config document after applying `key=value` overrides; errors
/// carry the path of the offending field.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::config("(document)", e))?;
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    let cfg: ExperimentConfig =
        serde_path_to_error::deserialize(value).map_err(|e| CliError::config(e.path().to_string(), e.inner()))?;
    cfg.check()?;
    Ok(cfg)
}

/// `a.b.c=value`; the value is read as JSON, falling back to a string.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::config("--set", format!("expected key=value, got {assignment:?}")))?;
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::config("--set", format!("empty key segment in {key:?}")));
        }
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().expect("object");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Ok(())
}

impl ExperimentConfig {
    fn check(&self) -> Result<(), CliError> {
        if !(1..=MAX_DIM).contains(&self.dimension) {
            return Err(CliError::config("dimension", format!("must be between 1 and {MAX_DIM}")));
        }
        if self.replicas == 0 {
            return Err(CliError::config("replicas", "must be >= 1"));
        }
        if self.sweeps == 0 {
            return Err(CliError::config("sweeps", "must be >= 1"));
        }
        self.potential.validate().map_err(|e| CliError::config("potential", e))?;
        if let Some(s) = &self.sweep {
            if s.values.len() < 2 {
                return Err(CliError::config("sweep.values", "a sweep needs at least two values"));
            }
            if s.values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::config("sweep.values", "values must be finite"));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> Result<Window, CliError> {
        let spec = &self.window;
        let w = match (spec.side, &spec.lower, &spec.upper) {
            (Some(side), None, None) => Window::cube(self.dimension, side),
            (None, Some(lo), Some(hi)) => {
                if lo.len() != self.dimension || hi.len() != self.dimension {
                    return Err(CliError::config("window", "corner lengths must equal the dimension"));
                }
                Window::new(lo, hi)
            }
            _ => return Err(CliError::config("window", "give either side, or both lower and upper")),
        }
        .map_err(|e| CliError::config("window", e))?;
        let mut w = if spec.periodic { w.with_mode(BoundaryMode::Periodic) } else { w };
        let collar = match spec.collar {
            Some(c) => c,
            None if self.boundary != BoundaryCondition::Free => self.potential.range(),
            None => 0.0,
        };
        if collar > 0.0 {
            w = w.with_collar(collar).map_err(|e| CliError::config("window.collar", e))?;
        }
        Ok(w)
    }

    pub fn subwindow(&self, w: &Window) -> Result<Window, CliError> {
        let s = &self.subwindow;
        match (s.fraction, &s.lower, &s.upper) {
            (Some(f), None, None) => w.centered_sub_window(f),
            (None, Some(lo), Some(hi)) => w.sub_window(lo, hi),
            _ => return Err(CliError::config("subwindow", "give either fraction, or both lower and upper")),
        }
        .map_err(|e| CliError::config("subwindow", e))
    }

    pub fn setup(&self) -> Result<SamplerSetup, CliError> {
        self.setup_with_activity(self.activity.resolve()?)
    }

    pub fn setup_with_activity(&self, activity: ActivityParams) -> Result<SamplerSetup, CliError> {
        SamplerSetup::new(self.window()?, activity, self.potential.clone(), self.boundary.clone(), self.seed)
            .map_err(|e| CliError::config("(setup)", e))
    }

    pub fn schedule(&self) -> CftpSchedule {
        self.schedule.clone().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config(r#"{"seed": 3, "activity": {"z": 1}}"#, &[]).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.potential, Potential::paper_soft());
        assert_eq!(c.window().unwrap().volume(), 1.0);
    }

    #[test]
    fn seed_is_mandatory() {
        let e = parse_config(r#"{"activity": {"z": 1}}"#, &[]).unwrap_err();
        assert!(e.to_string().contains("seed"), "{e}");
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_config(r#"{"seed": 1, "potential": {"kind": "soft", "c": "x", "r_max": 1, "exponent": 2}}"#, &[])
            .unwrap_err();
        assert!(e.to_string().contains("potential"), "{e}");
        let e = parse_config(r#"{"seed": 1, "window": {"side": 2, "sides": 3}}"#, &[]).unwrap_err();
        assert!(e.to_string().contains("window"), "{e}");
    }

    #[test]
    fn overrides_apply_before_parsing() {
        let c = parse_config(
            r#"{"seed": 1, "activity": {"z": 1}}"#,
            &["activity.z=2.5".into(), "boundary.kind=plus_poisson".into(), "boundary.z=4".into()],
        )
        .unwrap();
        assert_eq!(c.activity.z, Some(2.5));
        assert_eq!(c.boundary, BoundaryCondition::PlusPoisson { z: 4.0, per_step: false });
        assert_eq!(c.window().unwrap().collar_width(), 1.0);
        assert!(parse_config(r#"{"seed": 1}"#, &["novalue".into()]).is_err());
    }

    #[test]
    fn single_value_sweep_rejected() {
        let e = parse_config(r#"{"seed": 1, "sweep": {"parameter": "z", "values": [1.0]}}"#, &[]).unwrap_err();
        assert!(e.to_string().contains("sweep.values"), "{e}");
    }
}
