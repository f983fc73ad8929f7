use thiserror::Error;

use crate::mission::EventType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("empty plan_id")]
    EmptyPlanId,
    #[error("no vehicles")]
    NoVehicles,
    #[error("no objectives")]
    NoObjectives,
    #[error("empty vehicle id")]
    EmptyVehicleId,
    #[error("duplicate vehicle id '{0}'")]
    DuplicateVehicle(String),
    #[error("vehicle '{0}' needs a positive cruise_speed")]
    BadCruiseSpeed(String),
    #[error("vehicle '{0}' has a negative or non-finite battery_drain_rate")]
    BadDrainRate(String),
    #[error("empty objective name")]
    EmptyObjectiveName,
    #[error("duplicate objective name '{0}'")]
    DuplicateObjective(String),
    #[error("objective '{objective}' refers to unknown vehicle '{vehicle}'")]
    UnknownVehicle { objective: String, vehicle: String },
    #[error("objective '{0}' has empty waypoints")]
    EmptyWaypoints(String),
    #[error("objective '{0}' has a negative or non-finite depth")]
    BadDepth(String),
    #[error("objective '{0}' has a non-finite waypoint")]
    NonFiniteWaypoint(String),
    #[error("objective '{objective}' repeats waypoint {index}")]
    RepeatedWaypoint { objective: String, index: usize },
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("plan syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid plan: {0}")]
    Invalid(#[from] ValidationError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StoreError {
    #[error("unknown vehicle '{0}'")]
    UnknownVehicle(String),
    #[error("unknown objective '{0}'")]
    UnknownObjective(String),
    #[error("non-monotone telemetry for '{vehicle}': t={t} after t={last}")]
    NonMonotone { vehicle: String, t: f64, last: f64 },
    #[error("no telemetry yet for '{0}'")]
    NoData(String),
    #[error("{0} event requires a subject")]
    MissingSubject(EventType),
    #[error("unknown target '{0}'")]
    UnknownTarget(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scenario script entry {index} references unknown vehicle '{vehicle}'")]
    UnknownVehicle { index: usize, vehicle: String },
    #[error("scenario script times must be non-decreasing (entry {0})")]
    UnorderedScript(usize),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}
