use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;
use crate::mission::MissionPlan;

/// Simulated mission length cap when a scenario does not set one: 24 h.
pub const DEFAULT_T_MAX: f64 = 86_400.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Trigger {
    Fault { vehicle: String, code: String },
    Obstacle { vehicle: String },
    Target { vehicle: String, x: f64, y: f64 },
}

impl Trigger {
    pub fn vehicle(&self) -> &str {
        match self {
            Trigger::Fault { vehicle, .. }
            | Trigger::Obstacle { vehicle }
            | Trigger::Target { vehicle, .. } => vehicle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptEntry {
    pub t: f64,
    pub trigger: Trigger,
}

fn default_dt() -> f64 {
    1.0
}
fn default_every() -> u32 {
    5
}
fn default_warning() -> f64 {
    30.0
}
fn default_critical() -> f64 {
    15.0
}
fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dt")]
    pub tick_dt: f64,
    #[serde(default = "default_every")]
    pub telemetry_every: u32,
    /// Amplitude (m) of seeded noise on reported depth. Zero disables it.
    #[serde(default)]
    pub depth_jitter_m: f64,
    #[serde(default = "default_warning")]
    pub battery_warning_pct: f64,
    #[serde(default = "default_critical")]
    pub battery_critical_pct: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default)]
    pub script: Vec<ScriptEntry>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            seed: 0,
            tick_dt: default_dt(),
            telemetry_every: default_every(),
            depth_jitter_m: 0.0,
            battery_warning_pct: default_warning(),
            battery_critical_pct: default_critical(),
            t_max: DEFAULT_T_MAX,
            script: Vec::new(),
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn validate(&self, plan: &MissionPlan) -> Result<(), ScenarioError> {
        if !(self.tick_dt.is_finite() && self.tick_dt > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "tick_dt must be positive, got {}",
                self.tick_dt
            )));
        }
        if self.telemetry_every == 0 {
            return Err(ScenarioError::Invalid(
                "telemetry_every must be at least 1".into(),
            ));
        }
        if !(self.depth_jitter_m.is_finite() && self.depth_jitter_m >= 0.0) {
            return Err(ScenarioError::Invalid(
                "depth_jitter_m must be non-negative".into(),
            ));
        }
        if self.battery_critical_pct >= self.battery_warning_pct {
            return Err(ScenarioError::Invalid(
                "battery_critical_pct must be below battery_warning_pct".into(),
            ));
        }
        if self.t_max.is_nan() || self.t_max < 0.0 {
            return Err(ScenarioError::Invalid("t_max must be non-negative".into()));
        }
        let mut last = f64::NEG_INFINITY;
        for (index, entry) in self.script.iter().enumerate() {
            if !entry.t.is_finite() || entry.t < last {
                return Err(ScenarioError::UnorderedScript(index));
            }
            last = entry.t;
            if plan.vehicle(entry.trigger.vehicle()).is_none() {
                return Err(ScenarioError::UnknownVehicle {
                    index,
                    vehicle: entry.trigger.vehicle().to_string(),
                });
            }
            if let Trigger::Target { x, y, .. } = entry.trigger {
                if !(x.is_finite() && y.is_finite()) {
                    return Err(ScenarioError::Invalid(format!(
                        "script entry {index}: non-finite target"
                    )));
                }
            }
        }
        Ok(())
    }
}
