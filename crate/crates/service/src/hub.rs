//! Session bookkeeping shared by the HTTP handlers and the simulator clock:
//! chat logs for resumable streams, bounded outbound queues, idle expiry.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use miriam_core::dialogue::ChatMessage;
use miriam_core::mission::{Progress, StreamRecord};
use miriam_core::runtime::{MissionRuntime, Outgoing};
use serde::Serialize;
use thiserror::Error;
use tokio::sync::Notify;

pub const QUEUE_CAP: usize = 10_000;
pub const SESSION_TTL: Duration = Duration::from_secs(2 * 60 * 60);

pub type SharedHub = Arc<Mutex<Hub>>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HubError {
    #[error("unknown session '{0}'")]
    UnknownSession(String),
    /// A newer stream connection took over this session's queue.
    #[error("stream superseded")]
    Superseded,
}

/// Map-side summary of one telemetry sample, personalised with the
/// session's pinned alerts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackUpdate {
    pub t: f64,
    pub vehicle_id: String,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub battery_pct: f64,
    pub progress_pct: f64,
    pub pinned: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StreamItem {
    Chat(ChatMessage),
    Track(TrackUpdate),
}

struct SessionLog {
    history: Vec<ChatMessage>,
    queue: VecDeque<StreamItem>,
    notify: Arc<Notify>,
    last_active: Instant,
    reader: u64,
}

impl SessionLog {
    fn new() -> Self {
        Self {
            history: Vec::new(),
            queue: VecDeque::new(),
            notify: Arc::new(Notify::new()),
            last_active: Instant::now(),
            reader: 0,
        }
    }

    fn push(&mut self, item: StreamItem) {
        if let StreamItem::Chat(m) = &item {
            self.history.push(m.clone());
        }
        self.queue.push_back(item);
        if self.queue.len() > QUEUE_CAP {
            // chat messages are never dropped, so the queue may exceed the cap
            // when it holds nothing else
            if let Some(i) = self.queue.iter().position(|i| matches!(i, StreamItem::Track(_))) {
                self.queue.remove(i);
            }
        }
        self.notify.notify_one();
    }
}

/// What a new stream connection starts from.
pub struct Subscription {
    pub reader: u64,
    pub notify: Arc<Notify>,
    pub replay: Vec<ChatMessage>,
}

pub struct Hub {
    runtime: MissionRuntime,
    sessions: HashMap<String, SessionLog>,
}

impl Hub {
    pub fn new(runtime: MissionRuntime) -> Self {
        Self {
            runtime,
            sessions: HashMap::new(),
        }
    }

    pub fn shared(runtime: MissionRuntime) -> SharedHub {
        Arc::new(Mutex::new(Self::new(runtime)))
    }

    pub fn runtime(&self) -> &MissionRuntime {
        &self.runtime
    }

    pub fn session_count(&self) -> usize {
        self.sessions.len()
    }

    /// Opens a session under a fresh 128-bit random id.
    pub fn open_session(&mut self) -> (String, ChatMessage) {
        let id = loop {
            let id = format!("{:032x}", rand::random::<u128>());
            if !self.sessions.contains_key(&id) {
                break id;
            }
        };
        let greeting = self.runtime.open_session(&id);
        let mut log = SessionLog::new();
        log.push(StreamItem::Chat(greeting.clone()));
        self.sessions.insert(id.clone(), log);
        (id, greeting)
    }

    pub fn close_session(&mut self, id: &str) -> bool {
        self.runtime.close_session(id);
        match self.sessions.remove(id) {
            Some(log) => {
                log.notify.notify_one();
                true
            }
            None => false,
        }
    }

    /// Runs one operator turn; the user echo and the reply both go on the stream.
    pub fn post(&mut self, id: &str, text: &str) -> Result<ChatMessage, HubError> {
        let log = self
            .sessions
            .get_mut(id)
            .ok_or_else(|| HubError::UnknownSession(id.to_string()))?;
        let turn = self
            .runtime
            .handle_turn(id, text)
            .ok_or_else(|| HubError::UnknownSession(id.to_string()))?;
        log.last_active = Instant::now();
        log.push(StreamItem::Chat(turn.user));
        log.push(StreamItem::Chat(turn.reply.clone()));
        Ok(turn.reply)
    }

    /// Starts (or restarts) the session's stream. Chat messages after
    /// `after` are replayed from the log; anything still queued for an older
    /// connection is discarded so nothing arrives twice.
    pub fn subscribe(&mut self, id: &str, after: Option<u64>) -> Result<Subscription, HubError> {
        let log = self
            .sessions
            .get_mut(id)
            .ok_or_else(|| HubError::UnknownSession(id.to_string()))?;
        log.reader += 1;
        log.queue.clear();
        log.last_active = Instant::now();
        // the previous reader wakes on its own notifier and finds itself superseded
        let previous = std::mem::replace(&mut log.notify, Arc::new(Notify::new()));
        previous.notify_one();
        let replay = log
            .history
            .iter()
            .filter(|m| after.is_none_or(|a| m.msg_id > a))
            .cloned()
            .collect();
        Ok(Subscription {
            reader: log.reader,
            notify: log.notify.clone(),
            replay,
        })
    }

    /// Takes everything queued for the current reader.
    pub fn drain(&mut self, id: &str, reader: u64) -> Result<Vec<StreamItem>, HubError> {
        let log = self
            .sessions
            .get_mut(id)
            .ok_or_else(|| HubError::UnknownSession(id.to_string()))?;
        if log.reader != reader {
            return Err(HubError::Superseded);
        }
        log.last_active = Instant::now();
        Ok(log.queue.drain(..).collect())
    }

    /// Chat messages sent so far on this session, oldest first.
    pub fn history(&self, id: &str) -> Result<&[ChatMessage], HubError> {
        self.sessions
            .get(id)
            .map(|l| l.history.as_slice())
            .ok_or_else(|| HubError::UnknownSession(id.to_string()))
    }

    /// Advances the simulator one tick and fans the results out to sessions.
    /// Returns false once the mission is over.
    pub fn step(&mut self) -> bool {
        if self.runtime.is_finished() {
            return false;
        }
        let out = self.runtime.step();
        self.route(out.messages);
        self.track(&out.records);
        true
    }

    /// Steps until the mission clock reaches `t` or the mission ends.
    pub fn advance_to(&mut self, t: f64) {
        while self.runtime.now() < t && self.step() {}
    }

    fn route(&mut self, messages: Vec<Outgoing>) {
        for Outgoing { session, message } in messages {
            if let Some(log) = self.sessions.get_mut(&session) {
                log.push(StreamItem::Chat(message));
            }
        }
    }

    fn track(&mut self, records: &[StreamRecord]) {
        let samples: Vec<_> = records
            .iter()
            .filter_map(|r| match r {
                StreamRecord::State(s) => Some(s),
                StreamRecord::Event(_) => None,
            })
            .collect();
        if samples.is_empty() {
            return;
        }
        let progress_pct = self.runtime.store().mission_progress().pct;
        for s in samples {
            for (id, log) in self.sessions.iter_mut() {
                log.push(StreamItem::Track(TrackUpdate {
                    t: s.t,
                    vehicle_id: s.vehicle_id.clone(),
                    x: s.x,
                    y: s.y,
                    heading: s.heading,
                    battery_pct: s.battery_pct,
                    progress_pct,
                    pinned: self.runtime.pinned(id),
                }));
            }
        }
    }

    pub fn progress(&self) -> Progress {
        self.runtime.store().mission_progress()
    }

    /// Drops sessions idle for longer than `ttl`; returns how many.
    pub fn expire_idle(&mut self, now: Instant, ttl: Duration) -> usize {
        let stale: Vec<String> = self
            .sessions
            .iter()
            .filter(|(_, log)| now.saturating_duration_since(log.last_active) > ttl)
            .map(|(id, _)| id.clone())
            .collect();
        for id in &stale {
            self.close_session(id);
        }
        stale.len()
    }
}
