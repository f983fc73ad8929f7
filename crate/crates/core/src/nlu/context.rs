use std::collections::VecDeque;

use super::frame::IntentFrame;
use super::lexicon::EntityKind;

/// Referent stack depth.
pub const MAX_REFERENTS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Referent {
    pub id: String,
    pub kind: EntityKind,
    pub turn: u64,
}

/// Per-session dialogue state used for anaphora and ellipsis.
#[derive(Debug, Clone, Default)]
pub struct DialogueContext {
    referents: VecDeque<Referent>,
    /// Recent understood frames, most recent first.
    frames: VecDeque<IntentFrame>,
    turn: u64,
}

impl DialogueContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Most recent first.
    pub fn referents(&self) -> impl Iterator<Item = &Referent> {
        self.referents.iter()
    }

    pub fn last_frame(&self) -> Option<&IntentFrame> {
        self.frames.front()
    }

    /// Most recent first, bounded like the referent stack.
    pub fn frames(&self) -> impl Iterator<Item = &IntentFrame> {
        self.frames.iter()
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    /// Moves `id` to the top of the stack, dropping the oldest beyond the bound.
    pub fn push(&mut self, id: &str, kind: EntityKind) {
        self.referents
            .retain(|r| !(r.kind == kind && r.id.eq_ignore_ascii_case(id)));
        self.referents.push_front(Referent {
            id: id.to_string(),
            kind,
            turn: self.turn,
        });
        self.referents.truncate(MAX_REFERENTS);
    }

    /// Position and entry of the most recent referent satisfying `accepts`.
    pub fn most_recent(&self, accepts: impl Fn(EntityKind) -> bool) -> Option<(usize, &Referent)> {
        self.referents.iter().enumerate().find(|(_, r)| accepts(r.kind))
    }

    pub(crate) fn set_last_frame(&mut self, frame: IntentFrame) {
        self.frames.push_front(frame);
        self.frames.truncate(MAX_REFERENTS);
    }

    pub(crate) fn next_turn(&mut self) {
        self.turn += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stack_is_bounded_and_deduplicated() {
        let mut ctx = DialogueContext::new();
        for i in 0..30 {
            ctx.push(&format!("o{i}"), EntityKind::Objective);
        }
        assert_eq!(ctx.referents().count(), MAX_REFERENTS);
        assert_eq!(ctx.referents().next().unwrap().id, "o29");
        ctx.push("O15", EntityKind::Objective);
        assert_eq!(ctx.referents().count(), MAX_REFERENTS);
        assert_eq!(
            ctx.referents()
                .filter(|r| r.id.eq_ignore_ascii_case("o15"))
                .count(),
            1
        );
    }

    #[test]
    fn most_recent_skips_incompatible_kinds() {
        let mut ctx = DialogueContext::new();
        ctx.push("Survey0", EntityKind::Objective);
        ctx.push("auv1", EntityKind::Vehicle);
        let (pos, r) = ctx.most_recent(|k| k == EntityKind::Objective).unwrap();
        assert_eq!((pos, r.id.as_str()), (1, "Survey0"));
    }
}
