use std::collections::BTreeMap;

use serde::Serialize;

use super::lexicon::EntityKind;
use super::rules::{IntentLabel, SlotType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotSource {
    Explicit,
    Anaphora,
    Ellipsis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotValue {
    /// Canonical entity id, or a canonical literal for duration/number slots.
    pub value: String,
    #[serde(rename = "type")]
    pub slot_type: SlotType,
    pub source: SlotSource,
    /// Kind of the bound entity, when the value is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entity: Option<EntityKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Clarification {
    /// A pronoun had no type-compatible referent.
    MissingReferent {
        slot: String,
        slot_type: SlotType,
    },
    /// An elliptical follow-up arrived with no prior question.
    NoContext {
        entity: String,
        kind: EntityKind,
    },
    /// The prior question has no slot the entity could replace.
    IncompatibleEllipsis {
        entity: String,
        kind: EntityKind,
    },
    EmptyInput,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntentFrame {
    pub intent: IntentLabel,
    pub slots: BTreeMap<String, SlotValue>,
    /// Specificity of the matched rule.
    pub confidence: u32,
    pub raw: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clarification: Option<Clarification>,
}

impl IntentFrame {
    pub fn unknown(raw: &str) -> Self {
        Self {
            intent: IntentLabel::Unknown,
            slots: BTreeMap::new(),
            confidence: 0,
            raw: raw.to_string(),
            rule_id: None,
            clarification: None,
        }
    }

    pub fn clarify(intent: IntentLabel, raw: &str, why: Clarification) -> Self {
        Self {
            clarification: Some(why),
            intent,
            ..Self::unknown(raw)
        }
    }

    pub fn is_clarification(&self) -> bool {
        self.clarification.is_some()
    }

    pub fn slot(&self, name: &str) -> Option<&SlotValue> {
        self.slots.get(name)
    }

    /// First slot of the given type, in name order.
    pub fn slot_of_type(&self, ty: SlotType) -> Option<&SlotValue> {
        self.slots.values().find(|s| s.slot_type == ty)
    }
}
