use std::collections::BTreeMap;

use super::context::DialogueContext;
use super::frame::{Clarification, IntentFrame, SlotSource, SlotValue};
use super::lexicon::{EntityKind, Lexicon};
use super::matcher::{match_rules, Binding, Candidate};
use super::normalize::normalize;
use super::rules::{IntentLabel, RuleSet};

const ELLIPSIS_PREFIXES: [&[&str]; 5] = [
    &["and", "what", "about"],
    &["what", "about"],
    &["how", "about"],
    &["and"],
    &[],
];

/// If `tokens` are an elliptical follow-up ("what about X", "and X", or a bare
/// entity), returns the entity they name.
pub fn ellipsis_entity(tokens: &[String], lexicon: &Lexicon) -> Option<(String, EntityKind)> {
    if tokens.is_empty() {
        return None;
    }
    ELLIPSIS_PREFIXES.iter().find_map(|prefix| {
        let rest = tokens.strip_prefix(&prefix.iter().map(|s| s.to_string()).collect::<Vec<_>>()[..])?;
        if rest.is_empty() {
            return None;
        }
        lexicon.lookup(rest).map(|e| (e.canonical.clone(), e.kind))
    })
}

/// Slot of `frame` an entity of `kind` would replace: exact type first, then
/// any slot that accepts it.
fn ellipsis_slot(frame: &IntentFrame, kind: EntityKind) -> Option<String> {
    frame
        .slots
        .iter()
        .filter(|(_, s)| s.slot_type.accepts(kind))
        .min_by_key(|(_, s)| if s.entity == Some(kind) { 0 } else { 1 })
        .map(|(name, _)| name.clone())
}

/// Rebuilds the previous question around a new entity. Returns `None` when
/// `tokens` are not an elliptical follow-up at all.
pub fn resolve_ellipsis(
    tokens: &[String],
    raw: &str,
    lexicon: &Lexicon,
    ctx: &DialogueContext,
) -> Option<IntentFrame> {
    let (entity, kind) = ellipsis_entity(tokens, lexicon)?;
    let Some(last) = ctx.last_frame() else {
        return Some(IntentFrame::clarify(
            IntentLabel::Unknown,
            raw,
            Clarification::NoContext { entity, kind },
        ));
    };
    let Some(name) = ellipsis_slot(last, kind) else {
        return Some(IntentFrame::clarify(
            last.intent,
            raw,
            Clarification::IncompatibleEllipsis { entity, kind },
        ));
    };
    // A follow-up that reached its entity through a pronoun ("what time did it
    // finish?") elaborates an earlier question; the ellipsis restates the
    // question that named the entity.
    let (mut last, mut name) = (last, name);
    for older in ctx.frames().skip(1) {
        if last.slots[&name].source != SlotSource::Anaphora {
            break;
        }
        match ellipsis_slot(older, kind) {
            Some(n) => (last, name) = (older, n),
            None => break,
        }
    }
    let mut frame = last.clone();
    let slot = frame
        .slots
        .get_mut(&name)
        .expect("slot name came from this frame");
    slot.value = entity;
    slot.entity = Some(kind);
    slot.source = SlotSource::Ellipsis;
    frame.raw = raw.to_string();
    frame.clarification = None;
    Some(frame)
}

/// Binds pronoun slots of `candidate` to referents on the stack. On success
/// also returns the stack depth of the deepest referent used (0 when none).
pub fn resolve_anaphora(
    candidate: &Candidate,
    raw: &str,
    ctx: &DialogueContext,
) -> Result<(IntentFrame, usize), IntentFrame> {
    let mut slots = BTreeMap::new();
    let mut depth = 0;
    for m in &candidate.slots {
        let value = match &m.binding {
            Binding::Entity { canonical, kind } => SlotValue {
                value: canonical.clone(),
                slot_type: m.ty,
                source: SlotSource::Explicit,
                entity: Some(*kind),
            },
            Binding::Value(v) => SlotValue {
                value: v.clone(),
                slot_type: m.ty,
                source: SlotSource::Explicit,
                entity: None,
            },
            Binding::Pronoun(_) => match ctx.most_recent(|k| m.ty.accepts(k)) {
                Some((pos, r)) => {
                    depth = depth.max(pos);
                    SlotValue {
                        value: r.id.clone(),
                        slot_type: m.ty,
                        source: SlotSource::Anaphora,
                        entity: Some(r.kind),
                    }
                }
                None => {
                    return Err(IntentFrame::clarify(
                        candidate.intent,
                        raw,
                        Clarification::MissingReferent {
                            slot: m.name.clone(),
                            slot_type: m.ty,
                        },
                    ))
                }
            },
        };
        slots.insert(m.name.clone(), value);
    }
    Ok((
        IntentFrame {
            intent: candidate.intent,
            slots,
            confidence: candidate.specificity,
            raw: raw.to_string(),
            rule_id: Some(candidate.rule_id.clone()),
            clarification: None,
        },
        depth,
    ))
}

/// Picks among equally specific candidates: the one whose pronouns resolve to
/// the most recent referents, then file order.
fn choose(candidates: &[Candidate], raw: &str, ctx: &DialogueContext) -> IntentFrame {
    let top = candidates[0].specificity;
    let mut best: Option<((usize, usize), IntentFrame)> = None;
    let mut first_failure = None;
    for c in candidates.iter().take_while(|c| c.specificity == top) {
        match resolve_anaphora(c, raw, ctx) {
            Ok((frame, depth)) => {
                let key = (depth, c.priority);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, frame));
                }
            }
            Err(clar) => {
                first_failure.get_or_insert(clar);
            }
        }
    }
    best.map(|(_, f)| f)
        .or(first_failure)
        .expect("at least one candidate in the top tier")
}

/// Parses one utterance, updating the dialogue context.
pub fn parse(utterance: &str, lexicon: &Lexicon, rules: &RuleSet, ctx: &mut DialogueContext) -> IntentFrame {
    let tokens = normalize(utterance);
    let frame = if tokens.is_empty() {
        IntentFrame::clarify(IntentLabel::Unknown, utterance, Clarification::EmptyInput)
    } else if let Some(frame) = resolve_ellipsis(&tokens, utterance, lexicon, ctx) {
        frame
    } else {
        let candidates = match_rules(&tokens, lexicon, rules);
        if candidates.is_empty() {
            IntentFrame::unknown(utterance)
        } else {
            choose(&candidates, utterance, ctx)
        }
    };

    if !frame.is_clarification() && frame.intent != IntentLabel::Unknown {
        for slot in frame.slots.values() {
            if let Some(kind) = slot.entity {
                ctx.push(&slot.value, kind);
            }
        }
        ctx.set_last_frame(frame.clone());
    }
    ctx.next_turn();
    frame
}
