//! Plan document parsing and validation.
//!
//! Wire format:
//! `{plan_id, origin:{lat,lon}, vehicles:[{id,cruise_speed,battery_drain_rate}],
//!   objectives:[{name,kind,vehicle,depth,waypoints:[[x,y],...]}]}`

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::types::{MissionPlan, Objective, ObjectiveKind, VehicleSpec, Waypoint};
use crate::error::{PlanError, ValidationError};

#[derive(Debug, Serialize, Deserialize)]
struct OriginDoc {
    lat: f64,
    lon: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct VehicleDoc {
    id: String,
    cruise_speed: f64,
    #[serde(default)]
    battery_drain_rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ObjectiveDoc {
    name: String,
    kind: ObjectiveKind,
    vehicle: String,
    #[serde(default)]
    depth: f64,
    waypoints: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PlanDoc {
    plan_id: String,
    origin: OriginDoc,
    vehicles: Vec<VehicleDoc>,
    objectives: Vec<ObjectiveDoc>,
}

/// Parse and validate a plan document.
pub fn load_plan(document: &str) -> Result<MissionPlan, PlanError> {
    let doc: PlanDoc = serde_json::from_str(document).map_err(|e| PlanError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let plan = MissionPlan {
        plan_id: doc.plan_id,
        origin_lat: doc.origin.lat,
        origin_lon: doc.origin.lon,
        vehicles: doc
            .vehicles
            .into_iter()
            .map(|v| VehicleSpec {
                vehicle_id: v.id,
                cruise_speed: v.cruise_speed,
                battery_capacity_pct: 100.0,
                battery_drain_rate: v.battery_drain_rate,
            })
            .collect(),
        objectives: doc
            .objectives
            .into_iter()
            .map(|o| Objective {
                name: o.name,
                kind: o.kind,
                vehicle_id: o.vehicle,
                depth: o.depth,
                waypoints: o.waypoints.iter().map(|p| Waypoint::new(p[0], p[1])).collect(),
            })
            .collect(),
    };
    validate_plan(&plan)?;
    Ok(plan)
}

/// Serialize a plan back into the document format.
pub fn plan_to_json(plan: &MissionPlan) -> serde_json::Value {
    let doc = PlanDoc {
        plan_id: plan.plan_id.clone(),
        origin: OriginDoc {
            lat: plan.origin_lat,
            lon: plan.origin_lon,
        },
        vehicles: plan
            .vehicles
            .iter()
            .map(|v| VehicleDoc {
                id: v.vehicle_id.clone(),
                cruise_speed: v.cruise_speed,
                battery_drain_rate: v.battery_drain_rate,
            })
            .collect(),
        objectives: plan
            .objectives
            .iter()
            .map(|o| ObjectiveDoc {
                name: o.name.clone(),
                kind: o.kind,
                vehicle: o.vehicle_id.clone(),
                depth: o.depth,
                waypoints: o.waypoints.iter().map(|w| [w.x, w.y]).collect(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("plan document serializes")
}

pub fn validate_plan(plan: &MissionPlan) -> Result<(), ValidationError> {
    if plan.plan_id.trim().is_empty() {
        return Err(ValidationError::EmptyPlanId);
    }
    if plan.vehicles.is_empty() {
        return Err(ValidationError::NoVehicles);
    }
    if plan.objectives.is_empty() {
        return Err(ValidationError::NoObjectives);
    }
    let mut vehicle_ids = HashSet::new();
    for v in &plan.vehicles {
        if v.vehicle_id.trim().is_empty() {
            return Err(ValidationError::EmptyVehicleId);
        }
        if !vehicle_ids.insert(v.vehicle_id.to_lowercase()) {
            return Err(ValidationError::DuplicateVehicle(v.vehicle_id.clone()));
        }
        if !(v.cruise_speed.is_finite() && v.cruise_speed > 0.0) {
            return Err(ValidationError::BadCruiseSpeed(v.vehicle_id.clone()));
        }
        if !(v.battery_drain_rate.is_finite() && v.battery_drain_rate >= 0.0) {
            return Err(ValidationError::BadDrainRate(v.vehicle_id.clone()));
        }
    }
    let mut names = HashSet::new();
    for o in &plan.objectives {
        if o.name.trim().is_empty() {
            return Err(ValidationError::EmptyObjectiveName);
        }
        if !names.insert(o.name.to_lowercase()) {
            return Err(ValidationError::DuplicateObjective(o.name.clone()));
        }
        if !vehicle_ids.contains(&o.vehicle_id.to_lowercase()) {
            return Err(ValidationError::UnknownVehicle {
                objective: o.name.clone(),
                vehicle: o.vehicle_id.clone(),
            });
        }
        if o.waypoints.is_empty() {
            return Err(ValidationError::EmptyWaypoints(o.name.clone()));
        }
        if !(o.depth.is_finite() && o.depth >= 0.0) {
            return Err(ValidationError::BadDepth(o.name.clone()));
        }
        if o.waypoints.iter().any(|w| !w.is_finite()) {
            return Err(ValidationError::NonFiniteWaypoint(o.name.clone()));
        }
        if let Some(i) = o.waypoints.windows(2).position(|w| w[0] == w[1]) {
            return Err(ValidationError::RepeatedWaypoint {
                objective: o.name.clone(),
                index: i + 1,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(objectives: &str) -> String {
        format!(
            r#"{{"plan_id":"demo","origin":{{"lat":55.9,"lon":-3.3}},
               "vehicles":[{{"id":"auv1","cruise_speed":1.5,"battery_drain_rate":0.05}}],
               "objectives":[{objectives}]}}"#
        )
    }

    #[test]
    fn loads_two_objectives() {
        let plan = load_plan(&doc(
            r#"{"name":"Survey0","kind":"survey","vehicle":"auv1","depth":10,"waypoints":[[0,0],[10,0]]},
               {"name":"Survey1","kind":"survey","vehicle":"auv1","depth":10,"waypoints":[[0,10]]}"#,
        ))
        .unwrap();
        assert_eq!(plan.objectives.len(), 2);
        assert_eq!(plan.vehicles[0].battery_capacity_pct, 100.0);
        assert_eq!(plan.objective("survey1").unwrap().name, "Survey1");
    }

    #[test]
    fn rejects_empty_objective_list() {
        let err = load_plan(&doc("")).unwrap_err();
        assert!(err.to_string().contains("no objectives"), "{err}");
    }

    #[test]
    fn rejects_case_insensitive_duplicates() {
        let err = load_plan(&doc(
            r#"{"name":"Survey0","kind":"survey","vehicle":"auv1","waypoints":[[0,0]]},
               {"name":"survey0","kind":"survey","vehicle":"auv1","waypoints":[[1,0]]}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("duplicate objective name"), "{err}");
    }

    #[test]
    fn rejects_unknown_vehicle_and_empty_waypoints() {
        let err = load_plan(&doc(
            r#"{"name":"S","kind":"survey","vehicle":"auv9","waypoints":[[0,0]]}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("unknown vehicle"), "{err}");
        let err = load_plan(&doc(
            r#"{"name":"S","kind":"survey","vehicle":"auv1","waypoints":[]}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("empty waypoints"), "{err}");
    }

    #[test]
    fn rejects_identical_consecutive_waypoints() {
        let err = load_plan(&doc(
            r#"{"name":"S","kind":"survey","vehicle":"auv1","waypoints":[[0,0],[0,0]]}"#,
        ))
        .unwrap_err();
        assert!(matches!(
            err,
            PlanError::Invalid(ValidationError::RepeatedWaypoint { index: 1, .. })
        ));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = load_plan("{\n  \"plan_id\": ,\n}").unwrap_err();
        match err {
            PlanError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn document_round_trips() {
        let text =
            doc(r#"{"name":"S","kind":"transit","vehicle":"auv1","depth":4.5,"waypoints":[[1,2],[3,4]]}"#);
        let plan = load_plan(&text).unwrap();
        let again = load_plan(&plan_to_json(&plan).to_string()).unwrap();
        assert_eq!(plan, again);
    }
}
