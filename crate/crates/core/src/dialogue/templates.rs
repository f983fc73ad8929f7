//! Response templates: `key.variantN = text with {placeholders}` lines.

use std::collections::{BTreeMap, HashSet};

use crate::error::ConfigError;

const EVENT_FIELDS: &[&str] = &["vehicle", "subject", "detail", "time", "severity", "id"];

/// Every template key the processor renders, with the placeholders it supplies.
pub const TEMPLATE_KEYS: &[(&str, &[&str])] = &[
    ("greeting", &["plan", "vehicles", "objectives"]),
    (
        "vehicle_status.active",
        &["vehicle", "health", "battery", "objective"],
    ),
    ("vehicle_status.idle", &["vehicle", "health", "battery"]),
    ("vehicle_status.no_data", &["vehicle"]),
    (
        "vehicle_location",
        &["vehicle", "x", "y", "depth", "heading", "speed"],
    ),
    ("vehicle_location.no_data", &["vehicle"]),
    ("plan_summary", &["plan", "count", "objectives", "vehicles"]),
    ("current_objective.active", &["vehicle", "objective", "kind"]),
    ("current_objective.idle", &["vehicle"]),
    ("current_objective.no_data", &["vehicle"]),
    (
        "eta_location.seconds",
        &["vehicle", "target", "duration", "time", "distance", "speed"],
    ),
    ("eta_location.reached", &["vehicle", "target"]),
    ("eta_location.completed", &["target", "time"]),
    ("eta_location.unreachable", &["vehicle", "target"]),
    ("eta_location.no_data", &["vehicle"]),
    (
        "etc_objective.seconds",
        &["objective", "duration", "time", "distance", "speed"],
    ),
    ("etc_objective.completed", &["objective", "time"]),
    ("etc_objective.unreachable", &["objective"]),
    ("etc_objective.no_data", &["objective", "vehicle"]),
    (
        "objective_location",
        &["objective", "kind", "x", "y", "status", "vehicle"],
    ),
    ("objective_finish_time.done", &["objective", "time"]),
    ("objective_finish_time.pending", &["objective", "status"]),
    ("past_activities", &["count", "events"]),
    ("past_activities.none", &[]),
    ("progress", &["pct", "completed", "total"]),
    ("fault_diagnosis", &["vehicle", "count", "faults"]),
    ("fault_diagnosis.none", &["vehicle"]),
    ("create_reminder.time", &["duration", "time"]),
    ("create_reminder.event", &["objective"]),
    ("create_reminder.already", &["objective", "time"]),
    ("create_reminder.missing", &[]),
    ("set_preference", &["setting", "value"]),
    ("set_preference.invalid", &["options"]),
    ("acknowledge_alert.done", &["alerts"]),
    ("acknowledge_alert.already", &["alert"]),
    ("acknowledge_alert.none", &[]),
    ("acknowledge_alert.unknown", &["target"]),
    ("help", &[]),
    ("unknown", &[]),
    ("clarify.missing_referent", &["slot_type"]),
    ("clarify.no_context", &["entity"]),
    ("clarify.incompatible", &["entity", "kind"]),
    ("clarify.empty", &[]),
    ("reminder.time", &["time", "created"]),
    ("reminder.event", &["objective", "time"]),
    ("alert.objective_started", EVENT_FIELDS),
    ("alert.objective_completed", EVENT_FIELDS),
    ("alert.objective_changed", EVENT_FIELDS),
    ("alert.obstacle_detected", EVENT_FIELDS),
    ("alert.target_detected", EVENT_FIELDS),
    ("alert.fault", EVENT_FIELDS),
    ("alert.battery_warning", EVENT_FIELDS),
    ("alert.battery_critical", EVENT_FIELDS),
    ("alert.mission_completed", EVENT_FIELDS),
    ("alert.report", EVENT_FIELDS),
];

pub fn placeholders(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else {
            break;
        };
        out.push(&rest[open + 1..open + close]);
        rest = &rest[open + close + 1..];
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct TemplateSet {
    variants: BTreeMap<String, Vec<String>>,
}

impl TemplateSet {
    pub fn parse(text: &str, file: &str) -> Result<Self, ConfigError> {
        let mut numbered: BTreeMap<String, BTreeMap<u32, String>> = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError::Parse {
                file: file.to_string(),
                line: n + 1,
                message,
            };
            let (lhs, body) = trimmed
                .split_once('=')
                .ok_or_else(|| err("expected 'key.variantN = text'".into()))?;
            let lhs = lhs.trim();
            let (key, variant) = lhs
                .rsplit_once(".variant")
                .ok_or_else(|| err(format!("'{lhs}' lacks a .variantN suffix")))?;
            let index: u32 = variant
                .parse()
                .map_err(|_| err(format!("bad variant number '{variant}'")))?;
            let slot = numbered.entry(key.to_string()).or_default();
            if slot.insert(index, body.trim().to_string()).is_some() {
                return Err(err(format!("duplicate {lhs}")));
            }
        }
        Ok(Self {
            variants: numbered
                .into_iter()
                .map(|(k, v)| (k, v.into_values().collect()))
                .collect(),
        })
    }

    /// Checks totality: every key the processor renders has a variant, and
    /// every placeholder used is one the processor supplies for that key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, supplied) in TEMPLATE_KEYS {
            let variants = self
                .variants
                .get(*key)
                .filter(|v| !v.is_empty())
                .ok_or_else(|| ConfigError::Invalid(format!("templates: no variant for '{key}'")))?;
            let supplied: HashSet<&str> = supplied.iter().copied().collect();
            for text in variants {
                if let Some(p) = placeholders(text).into_iter().find(|p| !supplied.contains(p)) {
                    return Err(ConfigError::Invalid(format!(
                        "templates: '{key}' uses unknown placeholder {{{p}}}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn variants(&self, key: &str) -> &[String] {
        self.variants.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Fills variant `pick % count` of `key`.
    pub fn render(&self, key: &str, pick: usize, vars: &[(&str, String)]) -> String {
        let variants = self.variants(key);
        let Some(text) = variants.get(pick % variants.len().max(1)) else {
            tracing::error!("no template for '{key}'");
            return String::new();
        };
        let mut out = String::with_capacity(text.len() + 32);
        let mut rest = text.as_str();
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let Some(close) = rest[open..].find('}') else {
                out.push_str(&rest[open..]);
                rest = "";
                break;
            };
            let name = &rest[open + 1..open + close];
            match vars.iter().find(|(k, _)| *k == name) {
                Some((_, v)) => out.push_str(v),
                None => out.push_str(&rest[open..=open + close]),
            }
            rest = &rest[open + close + 1..];
        }
        out.push_str(rest);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders_variants_in_order() {
        let t = TemplateSet::parse(
            "# c\nprogress.variant2 = B {pct}\nprogress.variant1 = A {pct}%\n",
            "t",
        )
        .unwrap();
        assert_eq!(t.variants("progress"), ["A {pct}%", "B {pct}"]);
        let vars = [("pct", "25".to_string())];
        assert_eq!(t.render("progress", 0, &vars), "A 25%");
        assert_eq!(t.render("progress", 1, &vars), "B 25");
        assert_eq!(t.render("progress", 2, &vars), "A 25%");
    }

    #[test]
    fn parse_errors() {
        assert!(TemplateSet::parse("progress = x", "t").is_err());
        assert!(TemplateSet::parse("progress.variantX = x", "t").is_err());
        assert!(TemplateSet::parse("p.variant1 = a\np.variant1 = b", "t").is_err());
    }

    #[test]
    fn validation_catches_unknown_placeholders() {
        let mut text: String = TEMPLATE_KEYS
            .iter()
            .map(|(k, _)| format!("{k}.variant1 = ok\n"))
            .collect();
        TemplateSet::parse(&text, "t").unwrap().validate().unwrap();
        text.push_str("progress.variant2 = {nonsense}\n");
        let err = TemplateSet::parse(&text, "t").unwrap().validate().unwrap_err();
        assert!(err.to_string().contains("nonsense"));
    }

    #[test]
    fn placeholder_scan() {
        assert_eq!(placeholders("{a} and {b}."), ["a", "b"]);
        assert!(placeholders("none").is_empty());
    }
}
