use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::plan::load_plan;
use super::route::Route;
use super::types::{
    EventType, MissionEvent, MissionPlan, Objective, ObjectiveRevision, StreamRecord, VehicleState, Waypoint,
};
use crate::error::{PlanError, StoreError};

/// Measured speeds at or below this are treated as stationary for ETA purposes.
pub const MIN_ETA_SPEED: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveStatus {
    Pending,
    Active,
    Completed,
    Changed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveRecord {
    pub name: String,
    pub status: ObjectiveStatus,
    pub started_t: Option<f64>,
    pub finished_t: Option<f64>,
}

impl ObjectiveRecord {
    fn pending(name: &str) -> Self {
        Self {
            name: name.to_string(),
            status: ObjectiveStatus::Pending,
            started_t: None,
            finished_t: None,
        }
    }
}

/// What an ingested event changed in derived state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DerivedChange {
    pub objective: Option<String>,
    pub from: Option<ObjectiveStatus>,
    pub to: Option<ObjectiveStatus>,
    /// The event introduced a new objective into the plan.
    pub created: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Objective(String),
    Point(Waypoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimate {
    Seconds {
        secs: f64,
        distance_m: f64,
        speed: f64,
    },
    /// The vehicle already passed the target location.
    Reached,
    Completed {
        finish_t: f64,
    },
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveProgress {
    pub name: String,
    pub vehicle_id: String,
    pub status: ObjectiveStatus,
    pub started_t: Option<f64>,
    pub finished_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Progress {
    pub pct: f64,
    pub completed: usize,
    pub total: usize,
    pub traversed_m: f64,
    pub total_m: f64,
    pub objectives: Vec<ObjectiveProgress>,
}

#[derive(Debug, Clone, Default)]
pub struct HistoryFilter {
    pub vehicle: Option<String>,
    pub objective: Option<String>,
    /// Empty matches every type.
    pub kinds: Vec<EventType>,
    pub since: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaultEntry {
    pub code: String,
    pub t: f64,
    pub detail: String,
    pub acknowledged: bool,
}

/// Applies one event to an objective status table. Shared by incremental
/// ingest and full replay.
pub fn apply_status_event(records: &mut Vec<ObjectiveRecord>, e: &MissionEvent) -> DerivedChange {
    if !e.kind.is_objective_event() {
        return DerivedChange::default();
    }
    let idx = match records
        .iter()
        .position(|r| r.name.eq_ignore_ascii_case(&e.subject))
    {
        Some(i) => i,
        None if e.kind == EventType::ObjectiveChanged => {
            records.push(ObjectiveRecord::pending(&e.subject));
            let r = records.last_mut().expect("just pushed");
            r.status = ObjectiveStatus::Changed;
            return DerivedChange {
                objective: Some(r.name.clone()),
                from: None,
                to: Some(ObjectiveStatus::Changed),
                created: true,
            };
        }
        None => return DerivedChange::default(),
    };
    let r = &mut records[idx];
    let from = r.status;
    match e.kind {
        EventType::ObjectiveStarted => {
            r.status = ObjectiveStatus::Active;
            r.started_t = Some(e.t);
        }
        EventType::ObjectiveCompleted => {
            r.status = ObjectiveStatus::Completed;
            r.finished_t = Some(e.t);
        }
        EventType::ObjectiveChanged => r.status = ObjectiveStatus::Changed,
        _ => unreachable!(),
    }
    DerivedChange {
        objective: Some(r.name.clone()),
        from: Some(from),
        to: Some(r.status),
        created: false,
    }
}

/// In-memory mission database: plan, per-vehicle telemetry series, event log
/// and the objective status table derived from it.
#[derive(Debug, Clone)]
pub struct MissionStore {
    plan: MissionPlan,
    base_objectives: Vec<String>,
    states: BTreeMap<String, Vec<VehicleState>>,
    events: Vec<MissionEvent>,
    status: Vec<ObjectiveRecord>,
    routes: BTreeMap<String, Route>,
    acked_faults: HashSet<(String, String)>,
    now: f64,
}

impl MissionStore {
    /// Builds a store over an already validated plan with every objective pending.
    pub fn new(plan: MissionPlan) -> Self {
        let routes = plan
            .vehicles
            .iter()
            .map(|v| (v.vehicle_id.clone(), Route::build(&plan, &v.vehicle_id)))
            .collect();
        let status = plan
            .objectives
            .iter()
            .map(|o| ObjectiveRecord::pending(&o.name))
            .collect();
        Self {
            base_objectives: plan.objectives.iter().map(|o| o.name.clone()).collect(),
            states: BTreeMap::new(),
            events: Vec::new(),
            status,
            routes,
            acked_faults: HashSet::new(),
            now: 0.0,
            plan,
        }
    }

    pub fn from_document(document: &str) -> Result<Self, PlanError> {
        Ok(Self::new(load_plan(document)?))
    }

    pub fn plan(&self) -> &MissionPlan {
        &self.plan
    }

    /// Latest mission time seen on any ingested record.
    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn events(&self) -> &[MissionEvent] {
        &self.events
    }

    pub fn states(&self, vehicle_id: &str) -> &[VehicleState] {
        self.canonical_vehicle(vehicle_id)
            .and_then(|v| self.states.get(v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn objective_statuses(&self) -> &[ObjectiveRecord] {
        &self.status
    }

    pub fn objective_status(&self, name: &str) -> Option<&ObjectiveRecord> {
        self.status.iter().find(|r| r.name.eq_ignore_ascii_case(name))
    }

    /// Recomputes the status table from the event log alone.
    pub fn replay_status(&self) -> Vec<ObjectiveRecord> {
        let mut records: Vec<ObjectiveRecord> = self
            .base_objectives
            .iter()
            .map(|n| ObjectiveRecord::pending(n))
            .collect();
        for e in &self.events {
            apply_status_event(&mut records, e);
        }
        records
    }

    fn canonical_vehicle(&self, id: &str) -> Option<&str> {
        self.plan.vehicle(id).map(|v| v.vehicle_id.as_str())
    }

    fn require_vehicle(&self, id: &str) -> Result<String, StoreError> {
        self.canonical_vehicle(id)
            .map(str::to_string)
            .ok_or_else(|| StoreError::UnknownVehicle(id.to_string()))
    }

    pub fn ingest(&mut self, record: StreamRecord) -> Result<(), StoreError> {
        match record {
            StreamRecord::State(s) => self.ingest_state(s),
            StreamRecord::Event(e) => self.ingest_event(e).map(|_| ()),
        }
    }

    pub fn ingest_state(&mut self, s: VehicleState) -> Result<(), StoreError> {
        let vehicle = self.require_vehicle(&s.vehicle_id)?;
        let series = self.states.entry(vehicle.clone()).or_default();
        if let Some(last) = series.last() {
            if s.t < last.t {
                let err = StoreError::NonMonotone {
                    vehicle,
                    t: s.t,
                    last: last.t,
                };
                tracing::warn!("dropping telemetry: {err}");
                return Err(err);
            }
        }
        let active = s
            .active_objective
            .as_deref()
            .and_then(|name| self.plan.objective_index(name));
        if let Some(route) = self.routes.get_mut(&vehicle) {
            route.advance(s.position(), active);
        }
        self.now = self.now.max(s.t);
        series.push(s);
        Ok(())
    }

    pub fn ingest_event(&mut self, e: MissionEvent) -> Result<DerivedChange, StoreError> {
        let vehicle = self.require_vehicle(&e.vehicle_id)?;
        let needs_subject = e.kind.is_objective_event() || e.kind == EventType::Fault;
        if needs_subject && e.subject.trim().is_empty() {
            return Err(StoreError::MissingSubject(e.kind));
        }
        let revision = match e.kind {
            EventType::ObjectiveChanged => ObjectiveRevision::parse(&e.detail),
            _ => None,
        };
        let known = self.plan.objective_index(&e.subject);
        if e.kind.is_objective_event() && known.is_none() && revision.is_none() {
            return Err(StoreError::UnknownObjective(e.subject.clone()));
        }

        if let Some(rev) = &revision {
            let points = rev.points();
            let idx = match known {
                Some(i) => {
                    let o = &mut self.plan.objectives[i];
                    o.waypoints = points.clone();
                    o.kind = rev.kind;
                    o.depth = rev.depth;
                    i
                }
                None => {
                    self.plan.objectives.push(Objective {
                        name: e.subject.clone(),
                        kind: rev.kind,
                        vehicle_id: vehicle.clone(),
                        waypoints: points.clone(),
                        depth: rev.depth,
                    });
                    self.plan.objectives.len() - 1
                }
            };
            let owner = self.plan.objectives[idx].vehicle_id.clone();
            if let Some(route) = self.routes.get_mut(&owner) {
                let anchor = rev.anchor.map(|a| Waypoint::new(a[0], a[1]));
                route.revise(idx, &points, rev.resume_index, anchor);
            }
        }

        let change = apply_status_event(&mut self.status, &e);
        if e.kind == EventType::ObjectiveCompleted {
            if let Some(i) = known {
                let owner = self.plan.objectives[i].vehicle_id.clone();
                if let Some(route) = self.routes.get_mut(&owner) {
                    route.complete_objective(i);
                }
            }
        }
        self.now = self.now.max(e.t);
        self.events.push(e);
        Ok(change)
    }

    pub fn latest_state(&self, vehicle_id: &str) -> Result<&VehicleState, StoreError> {
        let v = self.require_vehicle(vehicle_id)?;
        self.states
            .get(&v)
            .and_then(|s| s.last())
            .ok_or(StoreError::NoData(v))
    }

    fn eta_speed(&self, vehicle_id: &str, state: &VehicleState) -> f64 {
        if state.speed > MIN_ETA_SPEED {
            state.speed
        } else {
            self.plan
                .vehicle(vehicle_id)
                .map(|v| v.cruise_speed)
                .unwrap_or(0.0)
        }
    }

    fn estimate_to_node(&self, vehicle: &str, node: usize) -> Result<Estimate, StoreError> {
        let state = self.latest_state(vehicle)?;
        let route = &self.routes[vehicle];
        if route.is_passed(node) {
            return Ok(Estimate::Reached);
        }
        let distance = route
            .remaining_to(state.position(), node)
            .ok_or(StoreError::UnknownTarget(format!("node {node}")))?;
        let speed = self.eta_speed(vehicle, state);
        if speed <= 0.0 {
            return Ok(Estimate::Unreachable);
        }
        Ok(Estimate::Seconds {
            secs: distance / speed,
            distance_m: distance,
            speed,
        })
    }

    /// Time for `vehicle_id` to reach `target` along its remaining planned path.
    pub fn eta_to(&self, vehicle_id: &str, target: &Target) -> Result<Estimate, StoreError> {
        let vehicle = self.require_vehicle(vehicle_id)?;
        self.latest_state(&vehicle)?;
        let route = &self.routes[&vehicle];
        let node = match target {
            Target::Objective(name) => {
                let idx = self
                    .plan
                    .objective_index(name)
                    .ok_or_else(|| StoreError::UnknownTarget(name.clone()))?;
                if let Some(finish_t) = self.completed_at(idx) {
                    return Ok(Estimate::Completed { finish_t });
                }
                match route.first_node_of(idx) {
                    Some(n) => n,
                    None => return Ok(Estimate::Unreachable),
                }
            }
            Target::Point(p) => match route.node_near(*p, 1.0) {
                Some(n) => n,
                None if route.is_done() => return Ok(Estimate::Unreachable),
                None => return Err(StoreError::UnknownTarget(format!("({}, {})", p.x, p.y))),
            },
        };
        self.estimate_to_node(&vehicle, node)
    }

    /// Estimated time until `objective` completes; the actual finish time once it has.
    pub fn etc_of(&self, objective: &str) -> Result<Estimate, StoreError> {
        let idx = self
            .plan
            .objective_index(objective)
            .ok_or_else(|| StoreError::UnknownObjective(objective.to_string()))?;
        if let Some(finish_t) = self.completed_at(idx) {
            return Ok(Estimate::Completed { finish_t });
        }
        let vehicle = self.plan.objectives[idx].vehicle_id.clone();
        let vehicle = self.require_vehicle(&vehicle)?;
        let route = &self.routes[&vehicle];
        match route.last_node_of(idx) {
            Some(n) if route.is_passed(n) => Ok(Estimate::Seconds {
                secs: 0.0,
                distance_m: 0.0,
                speed: self.eta_speed(&vehicle, self.latest_state(&vehicle)?),
            }),
            Some(n) => self.estimate_to_node(&vehicle, n),
            None => Ok(Estimate::Unreachable),
        }
    }

    fn completed_at(&self, objective: usize) -> Option<f64> {
        let name = &self.plan.objectives[objective].name;
        self.objective_status(name)
            .filter(|r| r.status == ObjectiveStatus::Completed)
            .map(|r| r.finished_t.unwrap_or(0.0))
    }

    pub fn mission_progress(&self) -> Progress {
        let objectives: Vec<ObjectiveProgress> = self
            .plan
            .objectives
            .iter()
            .map(|o| {
                let rec = self.objective_status(&o.name);
                ObjectiveProgress {
                    name: o.name.clone(),
                    vehicle_id: o.vehicle_id.clone(),
                    status: rec.map(|r| r.status).unwrap_or(ObjectiveStatus::Pending),
                    started_t: rec.and_then(|r| r.started_t),
                    finished_t: rec.and_then(|r| r.finished_t),
                }
            })
            .collect();
        let completed = objectives
            .iter()
            .filter(|o| o.status == ObjectiveStatus::Completed)
            .count();
        let total = objectives.len();
        let (mut traversed_m, mut total_m) = (0.0, 0.0);
        for (vehicle, route) in &self.routes {
            let pos = self
                .states
                .get(vehicle)
                .and_then(|s| s.last())
                .map(|s| s.position());
            traversed_m += route.traversed(pos);
            total_m += route.total();
        }
        let pct = if total > 0 && completed == total {
            100.0
        } else if total_m > 0.0 {
            (100.0 * traversed_m / total_m).clamp(0.0, 100.0)
        } else {
            0.0
        };
        Progress {
            pct,
            completed,
            total,
            traversed_m,
            total_m,
            objectives,
        }
    }

    pub fn history(&self, filter: &HistoryFilter) -> Vec<MissionEvent> {
        self.events
            .iter()
            .filter(|e| e.t >= filter.since)
            .filter(|e| filter.kinds.is_empty() || filter.kinds.contains(&e.kind))
            .filter(|e| {
                filter
                    .vehicle
                    .as_ref()
                    .is_none_or(|v| e.vehicle_id.eq_ignore_ascii_case(v))
            })
            .filter(|e| {
                filter
                    .objective
                    .as_ref()
                    .is_none_or(|o| e.subject.eq_ignore_ascii_case(o))
            })
            .cloned()
            .collect()
    }

    pub fn fault_summary(&self, vehicle_id: &str) -> Result<Vec<FaultEntry>, StoreError> {
        let vehicle = self.require_vehicle(vehicle_id)?;
        Ok(self
            .events
            .iter()
            .filter(|e| e.kind == EventType::Fault && e.vehicle_id.eq_ignore_ascii_case(&vehicle))
            .map(|e| FaultEntry {
                code: e.subject.clone(),
                t: e.t,
                detail: e.detail.clone(),
                acknowledged: self
                    .acked_faults
                    .contains(&(vehicle.clone(), e.subject.to_uppercase())),
            })
            .collect())
    }

    /// Marks every fault with `code` on `vehicle_id` acknowledged. Returns
    /// false when no such fault was ever logged.
    pub fn acknowledge_fault(&mut self, vehicle_id: &str, code: &str) -> bool {
        let Ok(vehicle) = self.require_vehicle(vehicle_id) else {
            return false;
        };
        let exists = self.events.iter().any(|e| {
            e.kind == EventType::Fault
                && e.vehicle_id.eq_ignore_ascii_case(&vehicle)
                && e.subject.eq_ignore_ascii_case(code)
        });
        if exists {
            self.acked_faults.insert((vehicle, code.to_uppercase()));
        }
        exists
    }
}
