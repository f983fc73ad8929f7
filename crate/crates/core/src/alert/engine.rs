use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::policy::{classify, AlertPolicy, Severity};
use super::{Alert, SessionId};
use crate::mission::{EventType, MissionEvent};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReminderTrigger {
    Time { fire_at: f64 },
    Event { event: EventType, subject: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reminder {
    pub reminder_id: u64,
    pub owner: SessionId,
    pub trigger: ReminderTrigger,
    pub created_t: f64,
    pub fired: bool,
    /// Mission time it fired at.
    pub fired_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeliveryItem {
    Alert(Alert),
    Reminder(Reminder),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Delivery {
    pub session: SessionId,
    pub item: DeliveryItem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AckTarget {
    Id(u64),
    /// Fault code, case-insensitive.
    Code(String),
    /// Most recent pinned alert.
    Latest,
    /// Every pinned alert.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AckOutcome {
    Acknowledged(Vec<Alert>),
    AlreadyAcknowledged(Alert),
    NothingPinned,
    Unknown(String),
}

#[derive(Debug, Clone)]
struct SessionAlerts {
    min_severity: Severity,
    alerts: BTreeMap<u64, Alert>,
}

#[derive(Debug, Clone)]
pub struct AlertEngine {
    policy: AlertPolicy,
    sessions: BTreeMap<SessionId, SessionAlerts>,
    last_sent: HashMap<(EventType, String), (f64, Severity)>,
    reminders: Vec<Reminder>,
    next_alert_id: u64,
    next_reminder_id: u64,
}

impl AlertEngine {
    pub fn new(policy: AlertPolicy) -> Self {
        Self {
            policy,
            sessions: BTreeMap::new(),
            last_sent: HashMap::new(),
            reminders: Vec::new(),
            next_alert_id: 1,
            next_reminder_id: 1,
        }
    }

    pub fn policy(&self) -> &AlertPolicy {
        &self.policy
    }

    pub fn register_session(&mut self, session: &str, min_severity: Severity) {
        self.sessions.insert(
            session.to_string(),
            SessionAlerts {
                min_severity,
                alerts: BTreeMap::new(),
            },
        );
    }

    pub fn remove_session(&mut self, session: &str) {
        self.sessions.remove(session);
        self.reminders.retain(|r| r.owner != session);
    }

    pub fn set_min_severity(&mut self, session: &str, min_severity: Severity) {
        if let Some(s) = self.sessions.get_mut(session) {
            s.min_severity = min_severity;
        }
    }

    pub fn min_severity(&self, session: &str) -> Option<Severity> {
        self.sessions.get(session).map(|s| s.min_severity)
    }

    /// Pinned alert ids for `session`, oldest first.
    pub fn pinned(&self, session: &str) -> Vec<u64> {
        self.sessions
            .get(session)
            .map(|s| {
                s.alerts
                    .values()
                    .filter(|a| a.pinned)
                    .map(|a| a.alert_id)
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn alerts(&self, session: &str) -> Vec<&Alert> {
        self.sessions
            .get(session)
            .map(|s| s.alerts.values().collect())
            .unwrap_or_default()
    }

    pub fn reminders(&self) -> &[Reminder] {
        &self.reminders
    }

    /// Classifies, throttles and fans an ingested event out to sessions, and
    /// fires any event reminders it satisfies.
    pub fn on_event(&mut self, e: &MissionEvent) -> Vec<Delivery> {
        let severity = classify(e, &self.policy);
        let key = (e.kind, e.subject.to_lowercase());
        // Critical events always get through so escalations are never lost.
        let throttled = severity < Severity::Critical
            && self
                .last_sent
                .get(&key)
                .is_some_and(|&(t, sev)| e.t - t < self.policy.throttle_window_s && severity <= sev);
        let mut out = Vec::new();
        if throttled {
            tracing::debug!("throttled {} {}", e.kind, e.subject);
        } else {
            self.last_sent.insert(key.clone(), (e.t, severity));
            let alert = Alert {
                alert_id: self.next_alert_id,
                t: e.t,
                severity,
                key,
                event: e.clone(),
                pinned: severity == Severity::Critical,
                acknowledged: false,
            };
            self.next_alert_id += 1;
            for (id, s) in &mut self.sessions {
                if severity >= s.min_severity {
                    s.alerts.insert(alert.alert_id, alert.clone());
                    out.push(Delivery {
                        session: id.clone(),
                        item: DeliveryItem::Alert(alert.clone()),
                    });
                }
            }
        }
        for r in &mut self.reminders {
            let hit = match &r.trigger {
                ReminderTrigger::Event { event, subject } => {
                    *event == e.kind && subject.eq_ignore_ascii_case(&e.subject)
                }
                ReminderTrigger::Time { .. } => false,
            };
            if hit && !r.fired {
                r.fired = true;
                r.fired_t = Some(e.t);
                out.push(Delivery {
                    session: r.owner.clone(),
                    item: DeliveryItem::Reminder(r.clone()),
                });
            }
        }
        out
    }

    /// Fires every unfired time reminder due at or before `now`, in id order.
    pub fn tick(&mut self, now: f64) -> Vec<Delivery> {
        let mut out = Vec::new();
        for r in &mut self.reminders {
            if let ReminderTrigger::Time { fire_at } = r.trigger {
                if !r.fired && fire_at <= now {
                    r.fired = true;
                    r.fired_t = Some(now);
                    out.push(Delivery {
                        session: r.owner.clone(),
                        item: DeliveryItem::Reminder(r.clone()),
                    });
                }
            }
        }
        out
    }

    pub fn add_reminder(&mut self, owner: &str, trigger: ReminderTrigger, now: f64) -> Reminder {
        let r = Reminder {
            reminder_id: self.next_reminder_id,
            owner: owner.to_string(),
            trigger,
            created_t: now,
            fired: false,
            fired_t: None,
        };
        self.next_reminder_id += 1;
        self.reminders.push(r.clone());
        r
    }

    /// Fault codes among this session's alerts.
    pub fn fault_codes(&self, session: &str) -> Vec<String> {
        let mut codes: Vec<String> = self
            .alerts(session)
            .into_iter()
            .filter(|a| a.key.0 == EventType::Fault)
            .map(|a| a.event.subject.clone())
            .collect();
        codes.dedup();
        codes
    }

    pub fn acknowledge(&mut self, session: &str, target: &AckTarget) -> AckOutcome {
        let Some(s) = self.sessions.get_mut(session) else {
            return AckOutcome::Unknown(session.to_string());
        };
        let ids: Vec<u64> = match target {
            AckTarget::Id(id) => match s.alerts.get(id) {
                Some(_) => vec![*id],
                None => return AckOutcome::Unknown(format!("alert {id}")),
            },
            AckTarget::Code(code) => {
                let ids: Vec<u64> = s
                    .alerts
                    .values()
                    .filter(|a| a.key.0 == EventType::Fault && a.event.subject.eq_ignore_ascii_case(code))
                    .map(|a| a.alert_id)
                    .collect();
                if ids.is_empty() {
                    return AckOutcome::Unknown(code.clone());
                }
                ids
            }
            AckTarget::Latest => match s.alerts.values().rev().find(|a| a.pinned) {
                Some(a) => vec![a.alert_id],
                None => return AckOutcome::NothingPinned,
            },
            AckTarget::All => {
                let ids: Vec<u64> = s
                    .alerts
                    .values()
                    .filter(|a| a.pinned)
                    .map(|a| a.alert_id)
                    .collect();
                if ids.is_empty() {
                    return AckOutcome::NothingPinned;
                }
                ids
            }
        };
        let mut acked = Vec::new();
        for id in &ids {
            let a = s.alerts.get_mut(id).expect("id collected from this map");
            if !a.acknowledged {
                a.acknowledged = true;
                a.pinned = false;
                acked.push(a.clone());
            }
        }
        if acked.is_empty() {
            AckOutcome::AlreadyAcknowledged(s.alerts[&ids[0]].clone())
        } else {
            AckOutcome::Acknowledged(acked)
        }
    }
}
