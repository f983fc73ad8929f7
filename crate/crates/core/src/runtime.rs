//! Wires simulator, store, alerting and dialogue together. Synchronous and
//! single-owner; the service wraps it in a lock, the REPL drives it directly.

use std::collections::BTreeMap;

use crate::alert::{AlertEngine, Delivery, DeliveryItem, Severity};
use crate::config::Config;
use crate::dialogue::{ChatMessage, DialogueSession, Effect, Processor, TurnContext};
use crate::error::ScenarioError;
use crate::mission::{MissionPlan, MissionStore, StreamRecord};
use crate::nlu::{IntentFrame, Nlu};
use crate::sim::{Scenario, Simulator};

/// A message addressed to one session.
#[derive(Debug, Clone, PartialEq)]
pub struct Outgoing {
    pub session: String,
    pub message: ChatMessage,
}

#[derive(Debug, Clone, Default)]
pub struct StepOutput {
    pub records: Vec<StreamRecord>,
    pub messages: Vec<Outgoing>,
}

impl StepOutput {
    fn extend(&mut self, other: StepOutput) {
        self.records.extend(other.records);
        self.messages.extend(other.messages);
    }
}

#[derive(Debug, Clone)]
pub struct Turn {
    pub user: ChatMessage,
    pub frame: IntentFrame,
    pub reply: ChatMessage,
}

pub struct MissionRuntime {
    store: MissionStore,
    alerts: AlertEngine,
    sim: Simulator,
    nlu: Nlu,
    processor: Processor,
    sessions: BTreeMap<String, DialogueSession>,
}

impl MissionRuntime {
    pub fn new(config: &Config, plan: MissionPlan, scenario: Scenario) -> Result<Self, ScenarioError> {
        let sim = Simulator::new(plan.clone(), scenario)?;
        Ok(Self {
            nlu: config.nlu(&plan),
            store: MissionStore::new(plan),
            alerts: AlertEngine::new(config.policy.clone()),
            sim,
            processor: config.processor(),
            sessions: BTreeMap::new(),
        })
    }

    pub fn store(&self) -> &MissionStore {
        &self.store
    }

    pub fn alerts(&self) -> &AlertEngine {
        &self.alerts
    }

    pub fn sim(&self) -> &Simulator {
        &self.sim
    }

    pub fn nlu(&self) -> &Nlu {
        &self.nlu
    }

    /// Mission clock.
    pub fn now(&self) -> f64 {
        self.sim.t()
    }

    pub fn session(&self, id: &str) -> Option<&DialogueSession> {
        self.sessions.get(id)
    }

    pub fn session_ids(&self) -> impl Iterator<Item = &str> {
        self.sessions.keys().map(String::as_str)
    }

    /// Registers a session and returns its greeting.
    pub fn open_session(&mut self, id: &str) -> ChatMessage {
        let mut session = DialogueSession::new(id);
        self.alerts.register_session(id, session.prefs.alert_min_severity);
        let greeting = self.processor.greeting(&mut session, &self.store, self.now());
        self.sessions.insert(id.to_string(), session);
        greeting
    }

    pub fn close_session(&mut self, id: &str) -> bool {
        self.alerts.remove_session(id);
        self.sessions.remove(id).is_some()
    }

    /// Parses and answers one operator utterance; `None` for an unknown session.
    pub fn handle_turn(&mut self, id: &str, text: &str) -> Option<Turn> {
        let now = self.now();
        let session = self.sessions.get_mut(id)?;
        let user = session.user_message(now, text);
        let frame = self.nlu.parse(text, &mut session.ctx);
        let mut turn = TurnContext {
            store: &self.store,
            alerts: &mut self.alerts,
            now,
        };
        let handled = self.processor.handle(&frame, session, &mut turn);
        for effect in handled.effects {
            match effect {
                Effect::FaultAcknowledged { vehicle, code } => {
                    self.store.acknowledge_fault(&vehicle, &code);
                }
            }
        }
        Some(Turn {
            user,
            frame,
            reply: handled.message,
        })
    }

    fn deliver(&mut self, deliveries: Vec<Delivery>, out: &mut Vec<Outgoing>) {
        for d in deliveries {
            let Some(session) = self.sessions.get_mut(&d.session) else {
                continue;
            };
            let message = match &d.item {
                DeliveryItem::Alert(a) => self.processor.alert_message(session, a),
                DeliveryItem::Reminder(r) => self.processor.reminder_message(session, r),
            };
            out.push(Outgoing {
                session: d.session,
                message,
            });
        }
    }

    /// Feeds records into the store and alerting, returning session messages.
    pub fn ingest(&mut self, records: &[StreamRecord]) -> Vec<Outgoing> {
        let mut out = Vec::new();
        let objectives = self.store.plan().objectives.len();
        for record in records {
            match record {
                StreamRecord::State(s) => {
                    if let Err(e) = self.store.ingest_state(s.clone()) {
                        tracing::warn!("telemetry rejected: {e}");
                    }
                }
                StreamRecord::Event(e) => match self.store.ingest_event(e.clone()) {
                    Ok(_) => {
                        let deliveries = self.alerts.on_event(e);
                        self.deliver(deliveries, &mut out);
                    }
                    Err(err) => tracing::warn!("event rejected: {err}"),
                },
            }
        }
        if self.store.plan().objectives.len() != objectives {
            self.nlu = self.nlu.with_plan(self.store.plan());
        }
        out
    }

    /// One simulator tick, ingested, plus any time reminders now due.
    pub fn step(&mut self) -> StepOutput {
        let records = self.sim.step();
        let mut messages = self.ingest(&records);
        let due = self.alerts.tick(self.sim.t());
        self.deliver(due, &mut messages);
        StepOutput { records, messages }
    }

    /// Steps until the mission clock reaches `t` or the mission ends.
    pub fn advance_to(&mut self, t: f64) -> StepOutput {
        let mut out = StepOutput::default();
        while self.sim.can_step() && self.sim.t() < t {
            out.extend(self.step());
        }
        out
    }

    pub fn is_finished(&self) -> bool {
        !self.sim.can_step()
    }

    pub fn pinned(&self, session: &str) -> Vec<u64> {
        self.alerts.pinned(session)
    }

    pub fn min_severity(&self, session: &str) -> Option<Severity> {
        self.alerts.min_severity(session)
    }
}
