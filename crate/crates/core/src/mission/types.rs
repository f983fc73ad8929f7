use std::fmt;

use serde::{Deserialize, Serialize};

/// A point in plan-local Cartesian meters (x east, y north of the plan origin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
}

impl Waypoint {
    pub const ORIGIN: Waypoint = Waypoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Waypoint) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Survey,
    Transit,
    Inspect,
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveKind::Survey => "survey",
            ObjectiveKind::Transit => "transit",
            ObjectiveKind::Inspect => "inspection",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleSpec {
    pub vehicle_id: String,
    /// m/s
    pub cruise_speed: f64,
    pub battery_capacity_pct: f64,
    /// percent per second
    pub battery_drain_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub name: String,
    pub kind: ObjectiveKind,
    pub vehicle_id: String,
    pub waypoints: Vec<Waypoint>,
    pub depth: f64,
}

impl Objective {
    pub fn path_length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }

    /// Mean of the waypoints; used when describing where an objective is.
    pub fn centroid(&self) -> Waypoint {
        let n = self.waypoints.len().max(1) as f64;
        let (sx, sy) = self
            .waypoints
            .iter()
            .fold((0.0, 0.0), |(sx, sy), w| (sx + w.x, sy + w.y));
        Waypoint::new(sx / n, sy / n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionPlan {
    pub plan_id: String,
    pub origin_lat: f64,
    pub origin_lon: f64,
    pub vehicles: Vec<VehicleSpec>,
    pub objectives: Vec<Objective>,
}

impl MissionPlan {
    pub fn vehicle(&self, id: &str) -> Option<&VehicleSpec> {
        self.vehicles
            .iter()
            .find(|v| v.vehicle_id.eq_ignore_ascii_case(id))
    }

    pub fn objective_index(&self, name: &str) -> Option<usize> {
        self.objectives
            .iter()
            .position(|o| o.name.eq_ignore_ascii_case(name))
    }

    pub fn objective(&self, name: &str) -> Option<&Objective> {
        self.objective_index(name).map(|i| &self.objectives[i])
    }

    /// Objectives assigned to `vehicle_id`, in plan order.
    pub fn objectives_for<'a>(
        &'a self,
        vehicle_id: &'a str,
    ) -> impl Iterator<Item = (usize, &'a Objective)> + 'a {
        self.objectives
            .iter()
            .enumerate()
            .filter(move |(_, o)| o.vehicle_id.eq_ignore_ascii_case(vehicle_id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Health {
    Nominal,
    Degraded,
    Fault,
}

impl fmt::Display for Health {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Health::Nominal => "nominal",
            Health::Degraded => "degraded",
            Health::Fault => "reporting a fault",
        })
    }
}

/// One telemetry sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleState {
    pub t: f64,
    pub vehicle_id: String,
    pub x: f64,
    pub y: f64,
    pub depth: f64,
    pub heading: f64,
    pub speed: f64,
    pub battery_pct: f64,
    pub active_objective: Option<String>,
    pub health: Health,
}

impl VehicleState {
    pub fn position(&self) -> Waypoint {
        Waypoint::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    ObjectiveStarted,
    ObjectiveCompleted,
    ObjectiveChanged,
    ObstacleDetected,
    TargetDetected,
    Fault,
    BatteryWarning,
    BatteryCritical,
    MissionCompleted,
    Report,
}

impl EventType {
    pub const ALL: [EventType; 10] = [
        EventType::ObjectiveStarted,
        EventType::ObjectiveCompleted,
        EventType::ObjectiveChanged,
        EventType::ObstacleDetected,
        EventType::TargetDetected,
        EventType::Fault,
        EventType::BatteryWarning,
        EventType::BatteryCritical,
        EventType::MissionCompleted,
        EventType::Report,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EventType::ObjectiveStarted => "objective_started",
            EventType::ObjectiveCompleted => "objective_completed",
            EventType::ObjectiveChanged => "objective_changed",
            EventType::ObstacleDetected => "obstacle_detected",
            EventType::TargetDetected => "target_detected",
            EventType::Fault => "fault",
            EventType::BatteryWarning => "battery_warning",
            EventType::BatteryCritical => "battery_critical",
            EventType::MissionCompleted => "mission_completed",
            EventType::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<EventType> {
        EventType::ALL.into_iter().find(|e| e.as_str() == s)
    }

    pub fn is_objective_event(&self) -> bool {
        matches!(
            self,
            EventType::ObjectiveStarted | EventType::ObjectiveCompleted | EventType::ObjectiveChanged
        )
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionEvent {
    pub t: f64,
    pub vehicle_id: String,
    #[serde(rename = "type")]
    pub kind: EventType,
    pub subject: String,
    #[serde(default)]
    pub detail: String,
}

impl MissionEvent {
    pub fn new(
        t: f64,
        vehicle_id: impl Into<String>,
        kind: EventType,
        subject: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            t,
            vehicle_id: vehicle_id.into(),
            kind,
            subject: subject.into(),
            detail: detail.into(),
        }
    }
}

/// A line of an NDJSON telemetry/event stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StreamRecord {
    Event(MissionEvent),
    State(VehicleState),
}

impl StreamRecord {
    pub fn t(&self) -> f64 {
        match self {
            StreamRecord::Event(e) => e.t,
            StreamRecord::State(s) => s.t,
        }
    }
}

/// Body of an `objective_changed` event's detail field when the change carries
/// new geometry. `resume_index` is the first waypoint in `waypoints` not yet
/// reached; `anchor` is the point where the vehicle left its previous leg.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRevision {
    pub kind: ObjectiveKind,
    pub depth: f64,
    pub waypoints: Vec<[f64; 2]>,
    pub resume_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<[f64; 2]>,
}

impl ObjectiveRevision {
    pub fn parse(detail: &str) -> Option<Self> {
        if !detail.trim_start().starts_with('{') {
            return None;
        }
        serde_json::from_str(detail).ok()
    }

    pub fn points(&self) -> Vec<Waypoint> {
        self.waypoints.iter().map(|p| Waypoint::new(p[0], p[1])).collect()
    }
}
