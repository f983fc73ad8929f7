//! Rule DSL: one rule per line, `intent_label : pattern tokens`, with
//! `$name:type` slots, a single optional `*` wildcard and `#` comments.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::lexicon::EntityKind;
use super::normalize::normalize;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntentLabel {
    VehicleStatus,
    VehicleLocation,
    PlanSummary,
    CurrentObjective,
    EtaLocation,
    EtcObjective,
    ObjectiveLocation,
    ObjectiveFinishTime,
    PastActivities,
    Progress,
    FaultDiagnosis,
    CreateReminder,
    SetPreference,
    AcknowledgeAlert,
    Help,
    Unknown,
}

impl IntentLabel {
    pub const ALL: [IntentLabel; 16] = [
        IntentLabel::VehicleStatus,
        IntentLabel::VehicleLocation,
        IntentLabel::PlanSummary,
        IntentLabel::CurrentObjective,
        IntentLabel::EtaLocation,
        IntentLabel::EtcObjective,
        IntentLabel::ObjectiveLocation,
        IntentLabel::ObjectiveFinishTime,
        IntentLabel::PastActivities,
        IntentLabel::Progress,
        IntentLabel::FaultDiagnosis,
        IntentLabel::CreateReminder,
        IntentLabel::SetPreference,
        IntentLabel::AcknowledgeAlert,
        IntentLabel::Help,
        IntentLabel::Unknown,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IntentLabel::VehicleStatus => "vehicle_status",
            IntentLabel::VehicleLocation => "vehicle_location",
            IntentLabel::PlanSummary => "plan_summary",
            IntentLabel::CurrentObjective => "current_objective",
            IntentLabel::EtaLocation => "eta_location",
            IntentLabel::EtcObjective => "etc_objective",
            IntentLabel::ObjectiveLocation => "objective_location",
            IntentLabel::ObjectiveFinishTime => "objective_finish_time",
            IntentLabel::PastActivities => "past_activities",
            IntentLabel::Progress => "progress",
            IntentLabel::FaultDiagnosis => "fault_diagnosis",
            IntentLabel::CreateReminder => "create_reminder",
            IntentLabel::SetPreference => "set_preference",
            IntentLabel::AcknowledgeAlert => "acknowledge_alert",
            IntentLabel::Help => "help",
            IntentLabel::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.as_str() == s)
    }
}

impl fmt::Display for IntentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotType {
    Vehicle,
    Objective,
    Location,
    Duration,
    Number,
}

impl SlotType {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vehicle" => Some(Self::Vehicle),
            "objective" => Some(Self::Objective),
            "location" => Some(Self::Location),
            "duration" => Some(Self::Duration),
            "number" => Some(Self::Number),
            _ => None,
        }
    }

    /// Whether an entity of `kind` can fill a slot of this type. Objectives
    /// are places, so they also fill location slots.
    pub fn accepts(&self, kind: EntityKind) -> bool {
        matches!(
            (self, kind),
            (SlotType::Vehicle, EntityKind::Vehicle)
                | (SlotType::Objective, EntityKind::Objective)
                | (SlotType::Location, EntityKind::Location | EntityKind::Objective)
        )
    }

    pub fn is_entity(&self) -> bool {
        matches!(self, SlotType::Vehicle | SlotType::Objective | SlotType::Location)
    }
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotType::Vehicle => "vehicle",
            SlotType::Objective => "objective",
            SlotType::Location => "location",
            SlotType::Duration => "duration",
            SlotType::Number => "number",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternToken {
    Literal(String),
    Slot { name: String, ty: SlotType },
    Wildcard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub rule_id: String,
    pub intent: IntentLabel,
    pub pattern: Vec<PatternToken>,
    /// File order; lower wins ties.
    pub priority: usize,
}

impl Rule {
    pub fn literal_count(&self) -> usize {
        self.pattern
            .iter()
            .filter(|t| matches!(t, PatternToken::Literal(_)))
            .count()
    }

    /// Parses the pattern half of a rule line.
    pub fn new(intent: IntentLabel, pattern: &str, priority: usize) -> Result<Self, String> {
        let mut tokens = Vec::new();
        let mut names = HashSet::new();
        let mut wildcards = 0;
        for raw in pattern.split_whitespace() {
            if raw == "*" {
                wildcards += 1;
                if wildcards > 1 {
                    return Err("more than one wildcard".into());
                }
                tokens.push(PatternToken::Wildcard);
            } else if let Some(slot) = raw.strip_prefix('$') {
                let (name, ty) = slot
                    .split_once(':')
                    .ok_or_else(|| format!("slot '{raw}' needs a type"))?;
                let ty = SlotType::parse(ty).ok_or_else(|| format!("unknown slot type '{ty}'"))?;
                if name.is_empty() || !names.insert(name.to_string()) {
                    return Err(format!("duplicate or empty slot name '{name}'"));
                }
                tokens.push(PatternToken::Slot {
                    name: name.to_string(),
                    ty,
                });
            } else {
                tokens.extend(normalize(raw).into_iter().map(PatternToken::Literal));
            }
        }
        if tokens.is_empty() {
            return Err("empty pattern".into());
        }
        Ok(Rule {
            rule_id: format!("{}#{}", intent, priority),
            intent,
            pattern: tokens,
            priority,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn parse(text: &str, file: &str) -> Result<Self, ConfigError> {
        let mut rules = Vec::new();
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
            let (label, pattern) = line
                .split_once(':')
                .ok_or_else(|| err("expected 'intent : pattern'".into()))?;
            let label = label.trim();
            let intent = IntentLabel::parse(label).ok_or_else(|| err(format!("unknown intent '{label}'")))?;
            let mut rule = Rule::new(intent, pattern, rules.len()).map_err(err)?;
            rule.rule_id = format!("{intent}@{}", n + 1);
            rules.push(rule);
        }
        Ok(RuleSet { rules })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
