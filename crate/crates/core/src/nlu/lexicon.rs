use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::normalize::normalize;
use crate::error::ConfigError;
use crate::mission::MissionPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Vehicle,
    Objective,
    Location,
}

impl EntityKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vehicle" => Some(Self::Vehicle),
            "objective" => Some(Self::Objective),
            "location" => Some(Self::Location),
            _ => None,
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Vehicle => "vehicle",
            EntityKind::Objective => "objective",
            EntityKind::Location => "location",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub canonical: String,
    pub kind: EntityKind,
    pub dynamic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticEntry {
    pub surface: String,
    pub canonical: String,
    pub kind: EntityKind,
}

/// Surface form (normalized, space-joined) to entity.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, LexEntry>,
    max_span: usize,
}

impl Lexicon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest entry, in tokens.
    pub fn max_span(&self) -> usize {
        self.max_span
    }

    pub fn lookup(&self, tokens: &[String]) -> Option<&LexEntry> {
        self.entries.get(&tokens.join(" "))
    }

    pub fn get(&self, surface: &str) -> Option<&LexEntry> {
        self.entries.get(&normalize(surface).join(" "))
    }

    pub fn dynamic_entries(&self) -> impl Iterator<Item = (&str, &LexEntry)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.dynamic)
            .map(|(k, e)| (k.as_str(), e))
    }

    fn insert(&mut self, surface: &str, entry: LexEntry) -> Option<LexEntry> {
        let tokens = normalize(surface);
        if tokens.is_empty() {
            return None;
        }
        self.max_span = self.max_span.max(tokens.len());
        self.entries.insert(tokens.join(" "), entry)
    }
}

/// Parses `surface, canonical, type` CSV lines; `#` starts a comment.
pub fn parse_static_entries(text: &str, file: &str) -> Result<Vec<StaticEntry>, ConfigError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError::Parse {
            file: file.to_string(),
            line: n + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [surface, canonical, kind] = fields.as_slice() else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let kind = EntityKind::parse(kind).ok_or_else(|| err(format!("unknown entity type '{kind}'")))?;
        if surface.is_empty() || canonical.is_empty() {
            return Err(err("empty surface or canonical form".into()));
        }
        out.push(StaticEntry {
            surface: surface.to_string(),
            canonical: canonical.to_string(),
            kind,
        });
    }
    Ok(out)
}

/// Builds the lexicon from static entries plus every vehicle id and objective
/// name in `plan`. Returns warnings for dynamic names that shadow a static entry.
pub fn build_lexicon(plan: &MissionPlan, static_entries: &[StaticEntry]) -> (Lexicon, Vec<String>) {
    let mut lex = Lexicon::default();
    let mut warnings = Vec::new();
    for s in static_entries {
        lex.insert(
            &s.surface,
            LexEntry {
                canonical: s.canonical.clone(),
                kind: s.kind,
                dynamic: false,
            },
        );
    }
    let dynamic = plan
        .vehicles
        .iter()
        .map(|v| (&v.vehicle_id, EntityKind::Vehicle))
        .chain(plan.objectives.iter().map(|o| (&o.name, EntityKind::Objective)));
    for (name, kind) in dynamic {
        let entry = LexEntry {
            canonical: name.clone(),
            kind,
            dynamic: true,
        };
        if let Some(prev) = lex.insert(name, entry) {
            let msg = if prev.dynamic {
                format!("{kind} '{name}' shadows {} '{}'", prev.kind, prev.canonical)
            } else {
                format!("{kind} '{name}' overrides static entry for '{}'", prev.canonical)
            };
            tracing::warn!("lexicon: {msg}");
            warnings.push(msg);
        }
    }
    (lex, warnings)
}
