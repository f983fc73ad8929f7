use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::mission::{EventType, MissionEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Warning,
    Critical,
}

impl Severity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "info" => Some(Self::Info),
            "warning" => Some(Self::Warning),
            "critical" => Some(Self::Critical),
            _ => None,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Critical => "critical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlertPolicy {
    pub severities: BTreeMap<EventType, Severity>,
    pub warning_pct: f64,
    pub critical_pct: f64,
    pub throttle_window_s: f64,
}

fn default_severity(kind: EventType) -> Severity {
    match kind {
        EventType::Fault | EventType::BatteryCritical => Severity::Critical,
        EventType::BatteryWarning | EventType::ObjectiveChanged | EventType::ObstacleDetected => {
            Severity::Warning
        }
        EventType::ObjectiveStarted
        | EventType::ObjectiveCompleted
        | EventType::TargetDetected
        | EventType::MissionCompleted
        | EventType::Report => Severity::Info,
    }
}

impl Default for AlertPolicy {
    fn default() -> Self {
        Self {
            severities: EventType::ALL
                .into_iter()
                .map(|k| (k, default_severity(k)))
                .collect(),
            warning_pct: 30.0,
            critical_pct: 15.0,
            throttle_window_s: 60.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsDoc {
    warning_pct: Option<f64>,
    critical_pct: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyDoc {
    thresholds: Option<ThresholdsDoc>,
    throttle_window_s: Option<f64>,
    #[serde(default)]
    severities: BTreeMap<String, String>,
}

impl AlertPolicy {
    /// `{thresholds:{warning_pct,critical_pct}, throttle_window_s, severities:{event_type:severity}}`;
    /// omitted fields keep their defaults.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: PolicyDoc =
            serde_json::from_str(text).map_err(|e| ConfigError::Invalid(format!("policy: {e}")))?;
        let mut policy = Self::default();
        if let Some(t) = doc.thresholds {
            policy.warning_pct = t.warning_pct.unwrap_or(policy.warning_pct);
            policy.critical_pct = t.critical_pct.unwrap_or(policy.critical_pct);
        }
        policy.throttle_window_s = doc.throttle_window_s.unwrap_or(policy.throttle_window_s);
        for (event, sev) in doc.severities {
            let kind = EventType::parse(&event)
                .ok_or_else(|| ConfigError::Invalid(format!("policy: unknown event type '{event}'")))?;
            let sev = Severity::parse(&sev)
                .ok_or_else(|| ConfigError::Invalid(format!("policy: unknown severity '{sev}'")))?;
            policy.severities.insert(kind, sev);
        }
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.critical_pct.partial_cmp(&self.warning_pct) != Some(std::cmp::Ordering::Less) {
            return Err(ConfigError::Invalid(format!(
                "policy: critical_pct ({}) must be below warning_pct ({})",
                self.critical_pct, self.warning_pct
            )));
        }
        if self.throttle_window_s.is_nan() || self.throttle_window_s < 0.0 {
            return Err(ConfigError::Invalid("policy: negative throttle window".into()));
        }
        Ok(())
    }

    pub fn severity_of(&self, kind: EventType) -> Severity {
        self.severities
            .get(&kind)
            .copied()
            .unwrap_or_else(|| default_severity(kind))
    }
}

pub fn classify(e: &MissionEvent, policy: &AlertPolicy) -> Severity {
    policy.severity_of(e.kind)
}
