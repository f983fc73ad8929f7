//! Discrete-time kinematic execution of a mission plan with scripted faults,
//! obstacles and target detections.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::scenario::{Scenario, Trigger};
use crate::error::ScenarioError;
use crate::mission::{
    EventType, Health, MissionEvent, MissionPlan, Objective, ObjectiveKind, ObjectiveRevision, StreamRecord,
    VehicleState, Waypoint,
};

/// Lateral offset of obstacle detour points, metres.
pub const DETOUR_OFFSET_M: f64 = 50.0;
/// Speed multiplier applied per injected fault.
pub const FAULT_SPEED_FACTOR: f64 = 0.5;
pub const MIN_FAULT_SPEED: f64 = 0.1;
const ARRIVAL_EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
struct VehicleSim {
    id: String,
    cruise_speed: f64,
    capacity: f64,
    drain: f64,
    pos: Waypoint,
    depth: f64,
    heading: f64,
    /// Objective indices in execution order; targets append here.
    queue: Vec<usize>,
    current: usize,
    waypoint: usize,
    faults: i32,
    health: Health,
    battery: f64,
    warned: bool,
    critical: bool,
}

impl VehicleSim {
    fn active(&self) -> Option<usize> {
        self.queue.get(self.current).copied()
    }

    fn speed(&self) -> f64 {
        let slowed = self.cruise_speed * FAULT_SPEED_FACTOR.powi(self.faults);
        if self.faults > 0 {
            slowed.max(MIN_FAULT_SPEED.min(self.cruise_speed))
        } else {
            slowed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RunSummary {
    pub ticks: u64,
    pub events: usize,
    pub completed_objectives: usize,
}

fn compass(from: Waypoint, to: Waypoint) -> f64 {
    (to.x - from.x)
        .atan2(to.y - from.y)
        .to_degrees()
        .rem_euclid(360.0)
}

/// Detour points for an obstacle met on the segment `from`-`to`: one third and
/// two thirds of the way along, shifted left of the direction of travel.
pub fn detour_points(from: Waypoint, to: Waypoint) -> Option<[Waypoint; 2]> {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    let len = dx.hypot(dy);
    if len < ARRIVAL_EPS {
        return None;
    }
    let (ox, oy) = (-dy / len * DETOUR_OFFSET_M, dx / len * DETOUR_OFFSET_M);
    let at = |f: f64| Waypoint::new(from.x + f * dx + ox, from.y + f * dy + oy);
    Some([at(1.0 / 3.0), at(2.0 / 3.0)])
}

#[derive(Debug, Clone)]
pub struct Simulator {
    plan: MissionPlan,
    scenario: Scenario,
    vehicles: Vec<VehicleSim>,
    ticks: u64,
    script_pos: usize,
    started: bool,
    finished: bool,
    detections: u32,
    rng: ChaCha8Rng,
}

impl Simulator {
    pub fn new(plan: MissionPlan, scenario: Scenario) -> Result<Self, ScenarioError> {
        scenario.validate(&plan)?;
        let vehicles = plan
            .vehicles
            .iter()
            .map(|v| VehicleSim {
                id: v.vehicle_id.clone(),
                cruise_speed: v.cruise_speed,
                capacity: v.battery_capacity_pct,
                drain: v.battery_drain_rate,
                pos: Waypoint::ORIGIN,
                depth: 0.0,
                heading: 0.0,
                queue: plan.objectives_for(&v.vehicle_id).map(|(i, _)| i).collect(),
                current: 0,
                waypoint: 0,
                faults: 0,
                health: Health::Nominal,
                battery: v.battery_capacity_pct,
                warned: false,
                critical: false,
            })
            .collect();
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(scenario.seed),
            plan,
            scenario,
            vehicles,
            ticks: 0,
            script_pos: 0,
            started: false,
            finished: false,
            detections: 0,
        })
    }

    pub fn plan(&self) -> &MissionPlan {
        &self.plan
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn t(&self) -> f64 {
        self.ticks as f64 * self.scenario.tick_dt
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// True while another `step` may run: mission open and under the time cap.
    pub fn can_step(&self) -> bool {
        !self.finished && self.t() < self.scenario.t_max
    }

    fn vehicle_index(&self, id: &str) -> Option<usize> {
        self.vehicles.iter().position(|v| v.id.eq_ignore_ascii_case(id))
    }

    pub fn position(&self, vehicle: &str) -> Option<Waypoint> {
        self.vehicle_index(vehicle).map(|i| self.vehicles[i].pos)
    }

    pub fn effective_speed(&self, vehicle: &str) -> Option<f64> {
        self.vehicle_index(vehicle).map(|i| self.vehicles[i].speed())
    }

    fn event(&self, t: f64, vi: usize, kind: EventType, subject: &str, detail: String) -> StreamRecord {
        StreamRecord::Event(MissionEvent::new(
            t,
            self.vehicles[vi].id.clone(),
            kind,
            subject,
            detail,
        ))
    }

    fn telemetry(&mut self, t: f64, vi: usize) -> StreamRecord {
        let jitter = self.scenario.depth_jitter_m;
        let noise = if jitter > 0.0 {
            self.rng.gen_range(-jitter..=jitter)
        } else {
            0.0
        };
        let v = &self.vehicles[vi];
        let active = v.active();
        StreamRecord::State(VehicleState {
            t,
            vehicle_id: v.id.clone(),
            x: v.pos.x,
            y: v.pos.y,
            depth: (v.depth + noise).max(0.0),
            heading: v.heading,
            speed: if active.is_some() { v.speed() } else { 0.0 },
            battery_pct: v.battery,
            active_objective: active.map(|i| self.plan.objectives[i].name.clone()),
            health: v.health,
        })
    }

    fn start_current(&mut self, t: f64, vi: usize, out: &mut Vec<StreamRecord>) {
        if let Some(oi) = self.vehicles[vi].active() {
            let name = self.plan.objectives[oi].name.clone();
            self.vehicles[vi].depth = self.plan.objectives[oi].depth;
            self.vehicles[vi].waypoint = 0;
            out.push(self.event(t, vi, EventType::ObjectiveStarted, &name, String::new()));
        } else {
            self.vehicles[vi].depth = 0.0;
        }
    }

    fn advance(&mut self, t: f64, vi: usize, out: &mut Vec<StreamRecord>) {
        let dt = self.scenario.tick_dt;
        let Some(oi) = self.vehicles[vi].active() else {
            return;
        };
        let v = &mut self.vehicles[vi];
        let waypoints = &self.plan.objectives[oi].waypoints;
        let target = waypoints[v.waypoint];
        let remaining = v.pos.distance(&target);
        let reach = v.speed() * dt;
        if remaining > ARRIVAL_EPS {
            v.heading = compass(v.pos, target);
        }
        if remaining <= reach + ARRIVAL_EPS {
            v.pos = target;
            v.waypoint += 1;
            if v.waypoint == waypoints.len() {
                v.current += 1;
                let name = self.plan.objectives[oi].name.clone();
                out.push(self.event(t, vi, EventType::ObjectiveCompleted, &name, String::new()));
                self.start_current(t, vi, out);
            }
        } else {
            let f = reach / remaining;
            v.pos = Waypoint::new(
                v.pos.x + f * (target.x - v.pos.x),
                v.pos.y + f * (target.y - v.pos.y),
            );
        }
    }

    fn drain(&mut self, t: f64, vi: usize, out: &mut Vec<StreamRecord>) {
        let (warn_at, crit_at) = (
            self.scenario.battery_warning_pct,
            self.scenario.battery_critical_pct,
        );
        let v = &mut self.vehicles[vi];
        let before = v.battery;
        v.battery = (v.capacity - v.drain * t).max(0.0);
        let now = v.battery;
        let warn = !v.warned && before > warn_at && now <= warn_at;
        let crit = !v.critical && before > crit_at && now <= crit_at;
        v.warned |= warn;
        v.critical |= crit;
        if warn {
            out.push(self.event(
                t,
                vi,
                EventType::BatteryWarning,
                "battery",
                format!("{now:.1}% remaining"),
            ));
        }
        if crit {
            out.push(self.event(
                t,
                vi,
                EventType::BatteryCritical,
                "battery",
                format!("{now:.1}% remaining"),
            ));
        }
    }

    /// Injects a hardware fault: health goes to fault and speed halves.
    pub fn inject_fault(&mut self, vehicle: &str, code: &str) -> Vec<StreamRecord> {
        let Some(vi) = self.vehicle_index(vehicle) else {
            return Vec::new();
        };
        let t = self.t();
        let v = &mut self.vehicles[vi];
        v.faults += 1;
        v.health = Health::Fault;
        let detail = format!("speed reduced to {:.2} m/s", v.speed());
        vec![self.event(t, vi, EventType::Fault, code, detail)]
    }

    /// Inserts a two-point detour ahead of the vehicle on its current leg.
    pub fn apply_obstacle(&mut self, vehicle: &str) -> Vec<StreamRecord> {
        let Some(vi) = self.vehicle_index(vehicle) else {
            return Vec::new();
        };
        let t = self.t();
        let v = &self.vehicles[vi];
        let Some(oi) = v.active() else {
            return vec![self.event(t, vi, EventType::ObstacleDetected, "", "no active leg".into())];
        };
        let (pos, wp) = (v.pos, v.waypoint);
        let name = self.plan.objectives[oi].name.clone();
        let Some([p1, p2]) = detour_points(pos, self.plan.objectives[oi].waypoints[wp]) else {
            return vec![self.event(
                t,
                vi,
                EventType::ObstacleDetected,
                &name,
                "no detour needed".into(),
            )];
        };
        let objective = &mut self.plan.objectives[oi];
        objective.waypoints.splice(wp..wp, [p1, p2]);
        let revision = ObjectiveRevision {
            kind: objective.kind,
            depth: objective.depth,
            waypoints: objective.waypoints.iter().map(|w| [w.x, w.y]).collect(),
            resume_index: wp,
            anchor: Some([pos.x, pos.y]),
        };
        let detail = format!(
            "detour via ({:.1}, {:.1}) and ({:.1}, {:.1})",
            p1.x, p1.y, p2.x, p2.y
        );
        vec![
            self.event(t, vi, EventType::ObstacleDetected, &name, detail),
            self.event(
                t,
                vi,
                EventType::ObjectiveChanged,
                &name,
                revision_json(&revision),
            ),
        ]
    }

    /// Appends an inspection objective at the detected target.
    pub fn apply_target(&mut self, vehicle: &str, x: f64, y: f64) -> Vec<StreamRecord> {
        let Some(vi) = self.vehicle_index(vehicle) else {
            return Vec::new();
        };
        if self.finished {
            tracing::info!("target at ({x}, {y}) ignored: mission already completed");
            return Vec::new();
        }
        let t = self.t();
        self.detections += 1;
        let mut k = self.detections;
        while self.plan.objective(&format!("Inspect{k}")).is_some() {
            k += 1;
        }
        let name = format!("Inspect{k}");
        let depth = self.vehicles[vi]
            .queue
            .last()
            .map(|&i| self.plan.objectives[i].depth)
            .unwrap_or(0.0);
        self.plan.objectives.push(Objective {
            name: name.clone(),
            kind: ObjectiveKind::Inspect,
            vehicle_id: self.vehicles[vi].id.clone(),
            waypoints: vec![Waypoint::new(x, y)],
            depth,
        });
        let was_idle = self.vehicles[vi].active().is_none();
        self.vehicles[vi].queue.push(self.plan.objectives.len() - 1);
        let revision = ObjectiveRevision {
            kind: ObjectiveKind::Inspect,
            depth,
            waypoints: vec![[x, y]],
            resume_index: 0,
            anchor: None,
        };
        let mut out = vec![
            self.event(
                t,
                vi,
                EventType::TargetDetected,
                &name,
                format!("contact at ({x:.1}, {y:.1})"),
            ),
            self.event(
                t,
                vi,
                EventType::ObjectiveChanged,
                &name,
                revision_json(&revision),
            ),
        ];
        if was_idle {
            self.start_current(t, vi, &mut out);
        }
        out
    }

    /// Advances one tick and returns everything emitted, in order.
    pub fn step(&mut self) -> Vec<StreamRecord> {
        let mut out = Vec::new();
        if self.finished {
            return out;
        }
        if !self.started {
            self.started = true;
            for vi in 0..self.vehicles.len() {
                self.start_current(0.0, vi, &mut out);
            }
            for vi in 0..self.vehicles.len() {
                let r = self.telemetry(0.0, vi);
                out.push(r);
            }
        }
        self.ticks += 1;
        let t = self.t();
        for vi in 0..self.vehicles.len() {
            self.advance(t, vi, &mut out);
            self.drain(t, vi, &mut out);
        }
        while let Some(entry) = self.scenario.script.get(self.script_pos) {
            if entry.t > t + ARRIVAL_EPS {
                break;
            }
            let trigger = entry.trigger.clone();
            self.script_pos += 1;
            out.extend(match &trigger {
                Trigger::Fault { vehicle, code } => self.inject_fault(vehicle, code),
                Trigger::Obstacle { vehicle } => self.apply_obstacle(vehicle),
                Trigger::Target { vehicle, x, y } => self.apply_target(vehicle, *x, *y),
            });
        }
        if self.vehicles.iter().all(|v| v.active().is_none()) {
            self.finished = true;
            let last = self.vehicles.len().saturating_sub(1);
            if !self.vehicles.is_empty() {
                let plan_id = self.plan.plan_id.clone();
                out.push(self.event(t, last, EventType::MissionCompleted, &plan_id, String::new()));
            }
        }
        let every = u64::from(self.scenario.telemetry_every);
        if self.finished || self.ticks.is_multiple_of(every) {
            for vi in 0..self.vehicles.len() {
                let r = self.telemetry(t, vi);
                out.push(r);
            }
        }
        out
    }

    /// Steps to completion or the time cap, writing NDJSON to `sink`.
    pub fn run<W: Write>(&mut self, sink: &mut W) -> io::Result<RunSummary> {
        let mut summary = RunSummary::default();
        while self.can_step() {
            for record in self.step() {
                if let StreamRecord::Event(e) = &record {
                    summary.events += 1;
                    if e.kind == EventType::ObjectiveCompleted {
                        summary.completed_objectives += 1;
                    }
                }
                serde_json::to_writer(&mut *sink, &record)?;
                sink.write_all(b"\n")?;
            }
            summary.ticks += 1;
        }
        sink.flush()?;
        Ok(summary)
    }

    /// Steps to completion or the time cap and collects every emission.
    pub fn run_to_end(&mut self) -> Vec<StreamRecord> {
        let mut out = Vec::new();
        while self.can_step() {
            out.extend(self.step());
        }
        out
    }
}

fn revision_json(r: &ObjectiveRevision) -> String {
    serde_json::to_string(r).expect("revision serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mission::{load_plan, VehicleSpec};

    fn line_plan(legs: &[&[(f64, f64)]]) -> MissionPlan {
        MissionPlan {
            plan_id: "line".into(),
            origin_lat: 0.0,
            origin_lon: 0.0,
            vehicles: vec![VehicleSpec {
                vehicle_id: "auv1".into(),
                cruise_speed: 1.5,
                battery_capacity_pct: 100.0,
                battery_drain_rate: 0.0,
            }],
            objectives: legs
                .iter()
                .enumerate()
                .map(|(i, w)| Objective {
                    name: format!("Leg{i}"),
                    kind: ObjectiveKind::Transit,
                    vehicle_id: "auv1".into(),
                    waypoints: w.iter().map(|&(x, y)| Waypoint::new(x, y)).collect(),
                    depth: 10.0,
                })
                .collect(),
        }
    }

    fn events(records: &[StreamRecord]) -> Vec<&MissionEvent> {
        records
            .iter()
            .filter_map(|r| match r {
                StreamRecord::Event(e) => Some(e),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn first_tick_moves_cruise_distance() {
        let mut sim = Simulator::new(line_plan(&[&[(600.0, 0.0)]]), Scenario::default()).unwrap();
        let out = sim.step();
        assert_eq!(sim.position("auv1"), Some(Waypoint::new(1.5, 0.0)));
        assert_eq!(events(&out)[0].kind, EventType::ObjectiveStarted);
        assert_eq!(events(&out)[0].t, 0.0);
    }

    #[test]
    fn short_leg_snaps_to_waypoint() {
        let mut sim = Simulator::new(line_plan(&[&[(1.0, 0.0), (5.0, 0.0)]]), Scenario::default()).unwrap();
        sim.step();
        assert_eq!(sim.position("auv1"), Some(Waypoint::new(1.0, 0.0)));
        assert_eq!(sim.vehicles[0].waypoint, 1);
    }

    #[test]
    fn detour_geometry() {
        let [a, b] = detour_points(Waypoint::ORIGIN, Waypoint::new(300.0, 0.0)).unwrap();
        assert!((a.x - 100.0).abs() < 1e-9 && (a.y - 50.0).abs() < 1e-9);
        assert!((b.x - 200.0).abs() < 1e-9 && (b.y - 50.0).abs() < 1e-9);
        assert!(detour_points(Waypoint::ORIGIN, Waypoint::ORIGIN).is_none());
    }

    #[test]
    fn obstacle_without_active_leg_only_logs() {
        let mut sim = Simulator::new(line_plan(&[]), Scenario::default()).unwrap();
        let out = sim.apply_obstacle("auv1");
        assert_eq!(out.len(), 1);
        assert_eq!(events(&out)[0].kind, EventType::ObstacleDetected);
    }

    #[test]
    fn targets_are_numbered_in_order() {
        let mut sim = Simulator::new(line_plan(&[&[(600.0, 0.0)]]), Scenario::default()).unwrap();
        sim.step();
        let a = sim.apply_target("auv1", 10.0, 10.0);
        let b = sim.apply_target("auv1", 20.0, 20.0);
        assert_eq!(events(&a)[0].subject, "Inspect1");
        assert_eq!(events(&b)[0].subject, "Inspect2");
        assert_eq!(events(&a)[1].kind, EventType::ObjectiveChanged);
    }

    #[test]
    fn target_after_completion_is_ignored() {
        let mut sim = Simulator::new(line_plan(&[&[(3.0, 0.0)]]), Scenario::default()).unwrap();
        sim.run_to_end();
        assert!(sim.is_finished());
        assert!(sim.apply_target("auv1", 1.0, 1.0).is_empty());
    }

    #[test]
    fn faults_compound_with_floor() {
        let mut plan = line_plan(&[&[(600.0, 0.0)]]);
        plan.vehicles[0].cruise_speed = 0.3;
        let mut sim = Simulator::new(plan, Scenario::default()).unwrap();
        sim.inject_fault("auv1", "A");
        assert!((sim.effective_speed("auv1").unwrap() - 0.15).abs() < 1e-12);
        sim.inject_fault("auv1", "B");
        assert!((sim.effective_speed("auv1").unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn zero_time_cap_runs_nothing() {
        let scenario = Scenario {
            t_max: 0.0,
            ..Default::default()
        };
        let mut sim = Simulator::new(line_plan(&[&[(600.0, 0.0)]]), scenario).unwrap();
        let mut buf = Vec::new();
        assert_eq!(sim.run(&mut buf).unwrap(), RunSummary::default());
        assert!(buf.is_empty());
    }

    #[test]
    fn demo_mission_completes() {
        let plan = load_plan(include_str!("../../data/demo_plan.json")).unwrap();
        let scenario = Scenario::parse(include_str!("../../data/demo_scenario.json")).unwrap();
        let mut sim = Simulator::new(plan, scenario).unwrap();
        let summary = sim.run(&mut io::sink()).unwrap();
        assert!(sim.is_finished());
        // Survey0, Survey1 and the inspection appended by the target trigger.
        assert_eq!(summary.completed_objectives, 3);
    }
}
