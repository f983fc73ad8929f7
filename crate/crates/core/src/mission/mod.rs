//! Mission domain types and the queryable mission store.

mod journal;
mod plan;
mod route;
mod store;
mod types;

pub use journal::{parse_record, replay, Journal};
pub use plan::{load_plan, plan_to_json, validate_plan};
pub use store::{
    apply_status_event, DerivedChange, Estimate, FaultEntry, HistoryFilter, MissionStore, ObjectiveProgress,
    ObjectiveRecord, ObjectiveStatus, Progress, Target, MIN_ETA_SPEED,
};
pub use types::{
    EventType, Health, MissionEvent, MissionPlan, Objective, ObjectiveKind, ObjectiveRevision, StreamRecord,
    VehicleSpec, VehicleState, Waypoint,
};
