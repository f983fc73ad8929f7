use serde::Serialize;

use crate::alert::Severity;

/// Knots per metre per second.
pub const KNOTS_PER_MPS: f64 = 1.9438;
pub const METRES_PER_NMI: f64 = 1852.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeFormat {
    #[serde(rename = "24h")]
    H24,
    #[serde(rename = "12h")]
    H12,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Metric,
    Nautical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Preferences {
    pub time_format: TimeFormat,
    pub units: Units,
    pub alert_min_severity: Severity,
}

impl Default for Preferences {
    fn default() -> Self {
        Self {
            time_format: TimeFormat::H24,
            units: Units::Metric,
            alert_min_severity: Severity::Info,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreferenceChange {
    TimeFormat(TimeFormat),
    Units(Units),
    AlertMinSeverity(Severity),
}

pub const PREFERENCE_OPTIONS: &str =
    "time format (12h or 24h), units (metric or nautical), alert level (info, warning or critical)";

impl PreferenceChange {
    /// Finds a recognised preference value among the tokens of a request.
    pub fn from_tokens(tokens: &[String]) -> Option<Self> {
        let has = |w: &str| tokens.iter().any(|t| t == w);
        for (i, t) in tokens.iter().enumerate() {
            let next_is_hour = tokens.get(i + 1).is_some_and(|n| n == "hour" || n == "hours");
            match t.as_str() {
                "12h" | "12-hour" | "12hr" => return Some(Self::TimeFormat(TimeFormat::H12)),
                "24h" | "24-hour" | "24hr" => return Some(Self::TimeFormat(TimeFormat::H24)),
                "12" if next_is_hour => return Some(Self::TimeFormat(TimeFormat::H12)),
                "24" if next_is_hour => return Some(Self::TimeFormat(TimeFormat::H24)),
                "nautical" | "knots" | "imperial" => return Some(Self::Units(Units::Nautical)),
                "metric" | "metres" | "meters" | "si" => return Some(Self::Units(Units::Metric)),
                _ => {}
            }
        }
        let about_alerts = has("alerts") || has("alert") || has("notifications") || has("only");
        if about_alerts || has("critical") {
            for t in tokens {
                match t.as_str() {
                    "critical" => return Some(Self::AlertMinSeverity(Severity::Critical)),
                    "warning" | "warnings" => return Some(Self::AlertMinSeverity(Severity::Warning)),
                    "info" | "all" | "everything" => return Some(Self::AlertMinSeverity(Severity::Info)),
                    _ => {}
                }
            }
        }
        None
    }

    pub fn apply(&self, prefs: &mut Preferences) {
        match *self {
            Self::TimeFormat(f) => prefs.time_format = f,
            Self::Units(u) => prefs.units = u,
            Self::AlertMinSeverity(s) => prefs.alert_min_severity = s,
        }
    }

    pub fn describe(&self) -> (&'static str, &'static str) {
        match self {
            Self::TimeFormat(TimeFormat::H12) => ("time format", "12-hour"),
            Self::TimeFormat(TimeFormat::H24) => ("time format", "24-hour"),
            Self::Units(Units::Metric) => ("units", "metric"),
            Self::Units(Units::Nautical) => ("units", "nautical"),
            Self::AlertMinSeverity(Severity::Info) => ("alert level", "all alerts"),
            Self::AlertMinSeverity(Severity::Warning) => ("alert level", "warnings and above"),
            Self::AlertMinSeverity(Severity::Critical) => ("alert level", "critical only"),
        }
    }
}

/// Mission-relative time of day, `HH:MM:SS` or `h:MM:SS AM`.
pub fn format_time(t: f64, prefs: &Preferences) -> String {
    let total = t.max(0.0).round() as u64;
    let (h, m, s) = (total / 3600, (total / 60) % 60, total % 60);
    match prefs.time_format {
        TimeFormat::H24 => format!("{h:02}:{m:02}:{s:02}"),
        TimeFormat::H12 => {
            let h = h % 24;
            let suffix = if h < 12 { "AM" } else { "PM" };
            let h12 = match h % 12 {
                0 => 12,
                x => x,
            };
            format!("{h12}:{m:02}:{s:02} {suffix}")
        }
    }
}

pub fn format_duration(secs: f64) -> String {
    let total = secs.max(0.0).round() as u64;
    let (h, m, s) = (total / 3600, (total / 60) % 60, total % 60);
    if h > 0 {
        format!("{h} h {m:02} min")
    } else if m > 0 {
        format!("{m} min {s:02} s")
    } else {
        format!("{s} s")
    }
}

pub fn format_speed(mps: f64, prefs: &Preferences) -> String {
    match prefs.units {
        Units::Metric => format!("{mps:.1} m/s"),
        Units::Nautical => format!("{:.1} kn", mps * KNOTS_PER_MPS),
    }
}

pub fn format_distance(m: f64, prefs: &Preferences) -> String {
    match prefs.units {
        Units::Metric => format!("{m:.0} m"),
        Units::Nautical => format!("{:.2} nmi", m / METRES_PER_NMI),
    }
}

/// "a", "a and b", "a, b and c".
pub fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}
