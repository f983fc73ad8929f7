//! Deterministic stand-in for the vehicle autonomy layer.

mod scenario;
mod simulator;

pub use scenario::{Scenario, ScriptEntry, Trigger, DEFAULT_T_MAX};
pub use simulator::{
    detour_points, RunSummary, Simulator, DETOUR_OFFSET_M, FAULT_SPEED_FACTOR, MIN_FAULT_SPEED,
};
