//! Mixed-initiative channel: severity classification, per-session delivery
//! with throttling and pinning, acknowledgements, and reminders.

mod engine;
mod policy;

pub use engine::{AckOutcome, AckTarget, AlertEngine, Delivery, DeliveryItem, Reminder, ReminderTrigger};
pub use policy::{classify, AlertPolicy, Severity};

pub type SessionId = String;

use serde::Serialize;

use crate::mission::{EventType, MissionEvent};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alert {
    pub alert_id: u64,
    pub t: f64,
    pub severity: Severity,
    /// Throttle key: event type and case-folded subject.
    pub key: (EventType, String),
    pub event: MissionEvent,
    pub pinned: bool,
    pub acknowledged: bool,
}
