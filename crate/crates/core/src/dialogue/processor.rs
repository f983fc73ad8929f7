use std::collections::HashMap;

use serde::Serialize;

use super::format::{
    format_distance, format_duration, format_speed, format_time, join_list, PreferenceChange, Preferences,
    PREFERENCE_OPTIONS,
};
use super::templates::TemplateSet;
use crate::alert::{AckOutcome, AckTarget, Alert, AlertEngine, Reminder, ReminderTrigger, Severity};
use crate::error::{ConfigError, StoreError};
use crate::mission::{
    Estimate, EventType, HistoryFilter, MissionEvent, MissionStore, ObjectiveStatus, Target, Waypoint,
};
use crate::nlu::{normalize, Clarification, DialogueContext, EntityKind, IntentFrame, IntentLabel, SlotType};

/// Events listed in a history answer.
const HISTORY_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Author {
    User,
    System,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Reply,
    Alert,
    Reminder,
    Clarification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatMessage {
    pub msg_id: u64,
    pub t: f64,
    pub author: Author,
    pub text: String,
    pub kind: MessageKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub severity: Option<Severity>,
    pub pinned: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alert_id: Option<u64>,
}

/// Per-session dialogue state: referent stack, preferences, template
/// rotation and the message id counter.
#[derive(Debug, Clone)]
pub struct DialogueSession {
    pub id: String,
    pub ctx: DialogueContext,
    pub prefs: Preferences,
    rotation: HashMap<String, usize>,
    next_msg_id: u64,
}

impl DialogueSession {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ctx: DialogueContext::new(),
            prefs: Preferences::default(),
            rotation: HashMap::new(),
            next_msg_id: 1,
        }
    }

    fn take_id(&mut self) -> u64 {
        let id = self.next_msg_id;
        self.next_msg_id += 1;
        id
    }

    fn message(&mut self, t: f64, author: Author, kind: MessageKind, text: String) -> ChatMessage {
        ChatMessage {
            msg_id: self.take_id(),
            t,
            author,
            text,
            kind,
            severity: None,
            pinned: false,
            alert_id: None,
        }
    }

    /// Echo of an operator utterance.
    pub fn user_message(&mut self, t: f64, text: &str) -> ChatMessage {
        self.message(t, Author::User, MessageKind::Reply, text.to_string())
    }

    fn mention(&mut self, entities: &[(String, EntityKind)]) {
        for (id, kind) in entities {
            self.ctx.push(id, *kind);
        }
    }
}

/// Read access to the mission plus the session-scoped alert state a turn may touch.
pub struct TurnContext<'a> {
    pub store: &'a MissionStore,
    pub alerts: &'a mut AlertEngine,
    pub now: f64,
}

/// Store writes a turn requests; applied by the caller under the write lock.
#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    FaultAcknowledged { vehicle: String, code: String },
}

#[derive(Debug, Clone)]
pub struct Handled {
    pub message: ChatMessage,
    pub effects: Vec<Effect>,
}

struct Out {
    key: &'static str,
    vars: Vec<(&'static str, String)>,
    kind: MessageKind,
    mentioned: Vec<(String, EntityKind)>,
    effects: Vec<Effect>,
}

impl Out {
    fn reply(key: &'static str, vars: Vec<(&'static str, String)>) -> Self {
        Self {
            key,
            vars,
            kind: MessageKind::Reply,
            mentioned: Vec::new(),
            effects: Vec::new(),
        }
    }

    fn clarify(key: &'static str, vars: Vec<(&'static str, String)>) -> Self {
        Self {
            kind: MessageKind::Clarification,
            ..Self::reply(key, vars)
        }
    }

    fn mentions(mut self, id: &str, kind: EntityKind) -> Self {
        self.mentioned.push((id.to_string(), kind));
        self
    }
}

fn status_text(status: ObjectiveStatus) -> &'static str {
    match status {
        ObjectiveStatus::Pending => "pending",
        ObjectiveStatus::Active => "in progress",
        ObjectiveStatus::Completed => "completed",
        ObjectiveStatus::Changed => "replanned",
    }
}

/// Static location canonicals: `origin` or `x y` in plan metres.
fn static_location(canonical: &str) -> Option<Waypoint> {
    if canonical.eq_ignore_ascii_case("origin") {
        return Some(Waypoint::ORIGIN);
    }
    let mut parts = canonical.split_whitespace().map(str::parse::<f64>);
    match (parts.next(), parts.next(), parts.next()) {
        (Some(Ok(x)), Some(Ok(y)), None) => Some(Waypoint::new(x, y)),
        _ => None,
    }
}

pub fn describe_event(e: &MissionEvent, prefs: &Preferences) -> String {
    let time = format_time(e.t, prefs);
    let s = &e.subject;
    match e.kind {
        EventType::ObjectiveStarted => format!("{s} started at {time}"),
        EventType::ObjectiveCompleted => format!("{s} completed at {time}"),
        EventType::ObjectiveChanged => format!("{s} replanned at {time}"),
        EventType::ObstacleDetected => format!("obstacle avoided during {s} at {time}"),
        EventType::TargetDetected => format!("target detected, {s} added at {time}"),
        EventType::Fault => format!("fault {s} at {time}"),
        EventType::BatteryWarning => format!("battery low at {time}"),
        EventType::BatteryCritical => format!("battery critical at {time}"),
        EventType::MissionCompleted => format!("mission completed at {time}"),
        EventType::Report => format!("report at {time}: {s}"),
    }
}

/// Turns intent frames into replies by querying the mission store and
/// filling response templates.
#[derive(Debug, Clone)]
pub struct Processor {
    templates: TemplateSet,
}

impl Processor {
    pub fn new(templates: TemplateSet) -> Result<Self, ConfigError> {
        templates.validate()?;
        Ok(Self { templates })
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    fn render(&self, session: &mut DialogueSession, key: &str, vars: &[(&str, String)]) -> String {
        let counter = session.rotation.entry(key.to_string()).or_insert(0);
        let text = self.templates.render(key, *counter, vars);
        *counter += 1;
        text
    }

    fn emit(&self, session: &mut DialogueSession, now: f64, out: Out) -> Handled {
        let text = self.render(session, out.key, &out.vars);
        session.mention(&out.mentioned);
        Handled {
            message: session.message(now, Author::System, out.kind, text),
            effects: out.effects,
        }
    }

    pub fn greeting(&self, session: &mut DialogueSession, store: &MissionStore, now: f64) -> ChatMessage {
        let plan = store.plan();
        let vehicles: Vec<String> = plan.vehicles.iter().map(|v| v.vehicle_id.clone()).collect();
        let objectives: Vec<String> = plan.objectives.iter().map(|o| o.name.clone()).collect();
        let mut out = Out::reply(
            "greeting",
            vec![
                ("plan", plan.plan_id.clone()),
                ("vehicles", join_list(&vehicles)),
                ("objectives", join_list(&objectives)),
            ],
        );
        for v in &vehicles {
            out = out.mentions(v, EntityKind::Vehicle);
        }
        self.emit(session, now, out).message
    }

    pub fn handle(
        &self,
        frame: &IntentFrame,
        session: &mut DialogueSession,
        turn: &mut TurnContext<'_>,
    ) -> Handled {
        let out = match &frame.clarification {
            Some(c) => clarification(c),
            None => self.dispatch(frame, session, turn),
        };
        self.emit(session, turn.now, out)
    }

    fn dispatch(
        &self,
        frame: &IntentFrame,
        session: &mut DialogueSession,
        turn: &mut TurnContext<'_>,
    ) -> Out {
        let store = turn.store;
        let prefs = session.prefs;
        let vehicle = frame
            .slot_of_type(SlotType::Vehicle)
            .map(|s| s.value.clone())
            .or_else(|| {
                frame
                    .slot_of_type(SlotType::Objective)
                    .or_else(|| frame.slot_of_type(SlotType::Location))
                    .and_then(|s| store.plan().objective(&s.value))
                    .map(|o| o.vehicle_id.clone())
            })
            .unwrap_or_else(|| store.plan().vehicles[0].vehicle_id.clone());
        let objective = frame.slot_of_type(SlotType::Objective).map(|s| s.value.clone());

        match frame.intent {
            IntentLabel::VehicleStatus => match store.latest_state(&vehicle) {
                Ok(s) => {
                    let mut vars = vec![
                        ("vehicle", vehicle.clone()),
                        ("health", s.health.to_string()),
                        ("battery", format!("{:.0}", s.battery_pct)),
                    ];
                    match &s.active_objective {
                        Some(o) => {
                            vars.push(("objective", o.clone()));
                            Out::reply("vehicle_status.active", vars)
                                .mentions(o, EntityKind::Objective)
                                .mentions(&vehicle, EntityKind::Vehicle)
                        }
                        None => {
                            Out::reply("vehicle_status.idle", vars).mentions(&vehicle, EntityKind::Vehicle)
                        }
                    }
                }
                Err(_) => Out::reply("vehicle_status.no_data", vec![("vehicle", vehicle.clone())]),
            },
            IntentLabel::VehicleLocation => match store.latest_state(&vehicle) {
                Ok(s) => Out::reply(
                    "vehicle_location",
                    vec![
                        ("vehicle", vehicle.clone()),
                        ("x", format!("{:.0}", s.x)),
                        ("y", format!("{:.0}", s.y)),
                        ("depth", format!("{:.0}", s.depth)),
                        ("heading", format!("{:.0}", s.heading)),
                        ("speed", format_speed(s.speed, &prefs)),
                    ],
                )
                .mentions(&vehicle, EntityKind::Vehicle),
                Err(_) => Out::reply("vehicle_location.no_data", vec![("vehicle", vehicle.clone())]),
            },
            IntentLabel::PlanSummary => {
                let plan = store.plan();
                let objectives: Vec<String> = plan
                    .objectives
                    .iter()
                    .map(|o| format!("{} ({})", o.name, o.kind))
                    .collect();
                let vehicles: Vec<String> = plan.vehicles.iter().map(|v| v.vehicle_id.clone()).collect();
                let mut out = Out::reply(
                    "plan_summary",
                    vec![
                        ("plan", plan.plan_id.clone()),
                        ("count", plan.objectives.len().to_string()),
                        ("objectives", join_list(&objectives)),
                        ("vehicles", join_list(&vehicles)),
                    ],
                );
                for o in plan.objectives.iter().rev() {
                    out = out.mentions(&o.name, EntityKind::Objective);
                }
                out
            }
            IntentLabel::CurrentObjective => match store.latest_state(&vehicle) {
                Ok(s) => match s
                    .active_objective
                    .as_deref()
                    .and_then(|o| store.plan().objective(o))
                {
                    Some(o) => Out::reply(
                        "current_objective.active",
                        vec![
                            ("vehicle", vehicle.clone()),
                            ("objective", o.name.clone()),
                            ("kind", o.kind.to_string()),
                        ],
                    )
                    .mentions(&vehicle, EntityKind::Vehicle)
                    .mentions(&o.name, EntityKind::Objective),
                    None => Out::reply("current_objective.idle", vec![("vehicle", vehicle.clone())])
                        .mentions(&vehicle, EntityKind::Vehicle),
                },
                Err(_) => Out::reply("current_objective.no_data", vec![("vehicle", vehicle.clone())]),
            },
            IntentLabel::EtaLocation => self.eta(frame, &vehicle, store, turn.now, &prefs),
            IntentLabel::EtcObjective => {
                let Some(name) = objective else {
                    return clarification(&Clarification::MissingReferent {
                        slot: "objective".into(),
                        slot_type: SlotType::Objective,
                    });
                };
                let vars = |extra: Vec<(&'static str, String)>| {
                    let mut v = vec![("objective", name.clone())];
                    v.extend(extra);
                    v
                };
                let out = match store.etc_of(&name) {
                    Ok(Estimate::Seconds {
                        secs,
                        distance_m,
                        speed,
                    }) => Out::reply(
                        "etc_objective.seconds",
                        vars(vec![
                            ("duration", format_duration(secs)),
                            ("time", format_time(turn.now + secs, &prefs)),
                            ("distance", format_distance(distance_m, &prefs)),
                            ("speed", format_speed(speed, &prefs)),
                        ]),
                    ),
                    Ok(Estimate::Completed { finish_t }) => Out::reply(
                        "etc_objective.completed",
                        vars(vec![("time", format_time(finish_t, &prefs))]),
                    ),
                    Ok(Estimate::Reached) | Ok(Estimate::Unreachable) | Err(StoreError::UnknownTarget(_)) => {
                        Out::reply("etc_objective.unreachable", vars(vec![]))
                    }
                    Err(_) => Out::reply("etc_objective.no_data", vars(vec![("vehicle", vehicle.clone())])),
                };
                out.mentions(&name, EntityKind::Objective)
            }
            IntentLabel::ObjectiveLocation => {
                let Some(o) = objective.as_deref().and_then(|n| store.plan().objective(n)) else {
                    return clarification(&Clarification::MissingReferent {
                        slot: "objective".into(),
                        slot_type: SlotType::Objective,
                    });
                };
                let c = o.centroid();
                let status = store
                    .objective_status(&o.name)
                    .map(|r| r.status)
                    .unwrap_or(ObjectiveStatus::Pending);
                Out::reply(
                    "objective_location",
                    vec![
                        ("objective", o.name.clone()),
                        ("kind", o.kind.to_string()),
                        ("x", format!("{:.0}", c.x)),
                        ("y", format!("{:.0}", c.y)),
                        ("status", status_text(status).to_string()),
                        ("vehicle", o.vehicle_id.clone()),
                    ],
                )
                .mentions(&o.vehicle_id, EntityKind::Vehicle)
                .mentions(&o.name, EntityKind::Objective)
            }
            IntentLabel::ObjectiveFinishTime => {
                let Some(rec) = objective.as_deref().and_then(|n| store.objective_status(n)) else {
                    return clarification(&Clarification::MissingReferent {
                        slot: "objective".into(),
                        slot_type: SlotType::Objective,
                    });
                };
                let out = match (rec.status, rec.finished_t) {
                    (ObjectiveStatus::Completed, Some(t)) => Out::reply(
                        "objective_finish_time.done",
                        vec![("objective", rec.name.clone()), ("time", format_time(t, &prefs))],
                    ),
                    (status, _) => Out::reply(
                        "objective_finish_time.pending",
                        vec![
                            ("objective", rec.name.clone()),
                            ("status", status_text(status).to_string()),
                        ],
                    ),
                };
                out.mentions(&rec.name, EntityKind::Objective)
            }
            IntentLabel::PastActivities => {
                let filter = HistoryFilter {
                    vehicle: frame.slot_of_type(SlotType::Vehicle).map(|s| s.value.clone()),
                    objective: objective.clone(),
                    ..Default::default()
                };
                let events = store.history(&filter);
                if events.is_empty() {
                    return Out::reply("past_activities.none", vec![]);
                }
                let recent = &events[events.len().saturating_sub(HISTORY_LIMIT)..];
                let lines: Vec<String> = recent.iter().map(|e| describe_event(e, &prefs)).collect();
                let mut out = Out::reply(
                    "past_activities",
                    vec![("count", events.len().to_string()), ("events", lines.join("; "))],
                );
                for e in recent.iter().filter(|e| e.kind.is_objective_event()) {
                    out = out.mentions(&e.subject, EntityKind::Objective);
                }
                out
            }
            IntentLabel::Progress => {
                let p = store.mission_progress();
                Out::reply(
                    "progress",
                    vec![
                        ("pct", format!("{:.0}", p.pct)),
                        ("completed", p.completed.to_string()),
                        ("total", p.total.to_string()),
                    ],
                )
            }
            IntentLabel::FaultDiagnosis => {
                let faults = store.fault_summary(&vehicle).unwrap_or_default();
                let out = if faults.is_empty() {
                    Out::reply("fault_diagnosis.none", vec![("vehicle", vehicle.clone())])
                } else {
                    let items: Vec<String> = faults
                        .iter()
                        .map(|f| {
                            let mut s = format!("{} at {}", f.code, format_time(f.t, &prefs));
                            if !f.detail.is_empty() {
                                s.push_str(&format!(" ({})", f.detail));
                            }
                            if f.acknowledged {
                                s.push_str(", acknowledged");
                            }
                            s
                        })
                        .collect();
                    Out::reply(
                        "fault_diagnosis",
                        vec![
                            ("vehicle", vehicle.clone()),
                            ("count", faults.len().to_string()),
                            ("faults", items.join("; ")),
                        ],
                    )
                };
                out.mentions(&vehicle, EntityKind::Vehicle)
            }
            IntentLabel::CreateReminder => self.create_reminder(frame, session, turn),
            IntentLabel::SetPreference => match PreferenceChange::from_tokens(&normalize(&frame.raw)) {
                Some(change) => {
                    change.apply(&mut session.prefs);
                    if let PreferenceChange::AlertMinSeverity(s) = change {
                        turn.alerts.set_min_severity(&session.id, s);
                    }
                    let (setting, value) = change.describe();
                    Out::reply(
                        "set_preference",
                        vec![("setting", setting.to_string()), ("value", value.to_string())],
                    )
                }
                None => Out::clarify(
                    "set_preference.invalid",
                    vec![("options", PREFERENCE_OPTIONS.to_string())],
                ),
            },
            IntentLabel::AcknowledgeAlert => self.acknowledge(frame, session, turn),
            IntentLabel::Help => Out::reply("help", vec![]),
            IntentLabel::Unknown => Out::reply("unknown", vec![]),
        }
    }

    fn eta(
        &self,
        frame: &IntentFrame,
        vehicle: &str,
        store: &MissionStore,
        now: f64,
        prefs: &Preferences,
    ) -> Out {
        let Some(slot) = frame
            .slot_of_type(SlotType::Location)
            .or_else(|| frame.slot_of_type(SlotType::Objective))
        else {
            return clarification(&Clarification::MissingReferent {
                slot: "location".into(),
                slot_type: SlotType::Location,
            });
        };
        let name = slot.value.clone();
        let target = match slot.entity {
            Some(EntityKind::Objective) => Some(Target::Objective(name.clone())),
            _ => static_location(&name).map(Target::Point),
        };
        let base = vec![("vehicle", vehicle.to_string()), ("target", name.clone())];
        let with = |extra: Vec<(&'static str, String)>| {
            let mut v = base.clone();
            v.extend(extra);
            v
        };
        let result = match target {
            Some(t) => store.eta_to(vehicle, &t),
            None => Err(StoreError::UnknownTarget(name.clone())),
        };
        let out = match result {
            Ok(Estimate::Seconds {
                secs,
                distance_m,
                speed,
            }) => Out::reply(
                "eta_location.seconds",
                with(vec![
                    ("duration", format_duration(secs)),
                    ("time", format_time(now + secs, prefs)),
                    ("distance", format_distance(distance_m, prefs)),
                    ("speed", format_speed(speed, prefs)),
                ]),
            ),
            Ok(Estimate::Reached) => Out::reply("eta_location.reached", with(vec![])),
            Ok(Estimate::Completed { finish_t }) => Out::reply(
                "eta_location.completed",
                with(vec![("time", format_time(finish_t, prefs))]),
            ),
            Ok(Estimate::Unreachable) | Err(StoreError::UnknownTarget(_)) => {
                Out::reply("eta_location.unreachable", with(vec![]))
            }
            Err(_) => Out::reply("eta_location.no_data", with(vec![])),
        };
        let out = out.mentions(vehicle, EntityKind::Vehicle);
        match slot.entity {
            Some(kind) => out.mentions(&name, kind),
            None => out,
        }
    }

    fn create_reminder(
        &self,
        frame: &IntentFrame,
        session: &mut DialogueSession,
        turn: &mut TurnContext<'_>,
    ) -> Out {
        let prefs = session.prefs;
        if let Some(secs) = frame
            .slot_of_type(SlotType::Duration)
            .and_then(|s| s.value.parse::<f64>().ok())
        {
            let fire_at = turn.now + secs;
            turn.alerts
                .add_reminder(&session.id, ReminderTrigger::Time { fire_at }, turn.now);
            return Out::reply(
                "create_reminder.time",
                vec![
                    ("duration", format_duration(secs)),
                    ("time", format_time(fire_at, &prefs)),
                ],
            );
        }
        if let Some(name) = frame.slot_of_type(SlotType::Objective).map(|s| s.value.clone()) {
            if let Some(rec) = turn
                .store
                .objective_status(&name)
                .filter(|r| r.status == ObjectiveStatus::Completed)
            {
                return Out::reply(
                    "create_reminder.already",
                    vec![
                        ("objective", rec.name.clone()),
                        ("time", format_time(rec.finished_t.unwrap_or(0.0), &prefs)),
                    ],
                )
                .mentions(&name, EntityKind::Objective);
            }
            turn.alerts.add_reminder(
                &session.id,
                ReminderTrigger::Event {
                    event: EventType::ObjectiveCompleted,
                    subject: name.clone(),
                },
                turn.now,
            );
            return Out::reply("create_reminder.event", vec![("objective", name.clone())])
                .mentions(&name, EntityKind::Objective);
        }
        Out::clarify("create_reminder.missing", vec![])
    }

    fn acknowledge(
        &self,
        frame: &IntentFrame,
        session: &mut DialogueSession,
        turn: &mut TurnContext<'_>,
    ) -> Out {
        let tokens = normalize(&frame.raw);
        let codes = turn.alerts.fault_codes(&session.id);
        let target = if let Some(n) = frame
            .slot_of_type(SlotType::Number)
            .and_then(|s| s.value.parse::<u64>().ok())
        {
            AckTarget::Id(n)
        } else if let Some(code) = codes
            .iter()
            .find(|c| tokens.iter().any(|t| t.eq_ignore_ascii_case(c)))
        {
            AckTarget::Code(code.clone())
        } else if tokens.iter().any(|t| t == "all") {
            AckTarget::All
        } else {
            AckTarget::Latest
        };
        let label = |a: &Alert| format!("alert {} ({} {})", a.alert_id, a.event.kind, a.event.subject);
        match turn.alerts.acknowledge(&session.id, &target) {
            AckOutcome::Acknowledged(list) => {
                let mut out = Out::reply(
                    "acknowledge_alert.done",
                    vec![("alerts", join_list(&list.iter().map(label).collect::<Vec<_>>()))],
                );
                for a in &list {
                    if a.event.kind == EventType::Fault {
                        out.effects.push(Effect::FaultAcknowledged {
                            vehicle: a.event.vehicle_id.clone(),
                            code: a.event.subject.clone(),
                        });
                    }
                }
                out
            }
            AckOutcome::AlreadyAcknowledged(a) => {
                Out::reply("acknowledge_alert.already", vec![("alert", label(&a))])
            }
            AckOutcome::NothingPinned => Out::reply("acknowledge_alert.none", vec![]),
            AckOutcome::Unknown(what) => Out::reply("acknowledge_alert.unknown", vec![("target", what)]),
        }
    }

    /// Renders a proactive alert for one session.
    pub fn alert_message(&self, session: &mut DialogueSession, alert: &Alert) -> ChatMessage {
        let e = &alert.event;
        let prefs = session.prefs;
        let key = format!("alert.{}", e.kind);
        let vars = vec![
            ("vehicle", e.vehicle_id.clone()),
            ("subject", e.subject.clone()),
            ("detail", e.detail.clone()),
            ("time", format_time(e.t, &prefs)),
            ("severity", alert.severity.to_string().to_uppercase()),
            ("id", alert.alert_id.to_string()),
        ];
        let text = self.render(session, &key, &vars);
        if e.kind.is_objective_event() || e.kind == EventType::TargetDetected {
            session.ctx.push(&e.subject, EntityKind::Objective);
        }
        let mut msg = session.message(alert.t, Author::System, MessageKind::Alert, text);
        msg.severity = Some(alert.severity);
        msg.pinned = alert.pinned;
        msg.alert_id = Some(alert.alert_id);
        msg
    }

    pub fn reminder_message(&self, session: &mut DialogueSession, r: &Reminder) -> ChatMessage {
        let prefs = session.prefs;
        let fired = r.fired_t.unwrap_or(r.created_t);
        let text = match &r.trigger {
            ReminderTrigger::Time { .. } => self.render(
                session,
                "reminder.time",
                &[
                    ("time", format_time(fired, &prefs)),
                    ("created", format_time(r.created_t, &prefs)),
                ],
            ),
            ReminderTrigger::Event { subject, .. } => {
                let text = self.render(
                    session,
                    "reminder.event",
                    &[
                        ("objective", subject.clone()),
                        ("time", format_time(fired, &prefs)),
                    ],
                );
                session.ctx.push(subject, EntityKind::Objective);
                text
            }
        };
        session.message(fired, Author::System, MessageKind::Reminder, text)
    }
}

fn clarification(c: &Clarification) -> Out {
    match c {
        Clarification::MissingReferent { slot_type, .. } => Out::clarify(
            "clarify.missing_referent",
            vec![("slot_type", slot_type.to_string())],
        ),
        Clarification::NoContext { entity, .. } => {
            Out::clarify("clarify.no_context", vec![("entity", entity.clone())])
        }
        Clarification::IncompatibleEllipsis { entity, kind } => Out::clarify(
            "clarify.incompatible",
            vec![("entity", entity.clone()), ("kind", kind.to_string())],
        ),
        Clarification::EmptyInput => Out::clarify("clarify.empty", vec![]),
    }
}
