//! Rule-based utterance parsing: normalization, a lexicon built partly from
//! the loaded plan, pattern rules, and a dialogue context that resolves
//! pronouns and elliptical follow-ups.

mod context;
mod frame;
mod lexicon;
mod matcher;
mod normalize;
mod parser;
mod rules;

pub use context::{DialogueContext, Referent, MAX_REFERENTS};
pub use frame::{Clarification, IntentFrame, SlotSource, SlotValue};
pub use lexicon::{build_lexicon, parse_static_entries, EntityKind, LexEntry, Lexicon, StaticEntry};
pub use matcher::{
    is_pronoun, match_rule, match_rules, parse_duration, parse_number, Binding, Candidate, SlotMatch,
    PRONOUNS,
};
pub use normalize::normalize;
pub use parser::{ellipsis_entity, parse, resolve_anaphora, resolve_ellipsis};
pub use rules::{IntentLabel, PatternToken, Rule, RuleSet, SlotType};

use crate::mission::MissionPlan;

/// Immutable rule set plus lexicon; shareable across sessions.
#[derive(Debug, Clone)]
pub struct Nlu {
    pub rules: RuleSet,
    pub lexicon: Lexicon,
    statics: Vec<StaticEntry>,
}

impl Nlu {
    pub fn new(rules: RuleSet, statics: Vec<StaticEntry>, plan: &MissionPlan) -> Self {
        let (lexicon, _) = build_lexicon(plan, &statics);
        Self {
            rules,
            lexicon,
            statics,
        }
    }

    /// Same rules and static entries over a different plan.
    pub fn with_plan(&self, plan: &MissionPlan) -> Self {
        Self::new(self.rules.clone(), self.statics.clone(), plan)
    }

    pub fn parse(&self, utterance: &str, ctx: &mut DialogueContext) -> IntentFrame {
        parse(utterance, &self.lexicon, &self.rules, ctx)
    }
}
