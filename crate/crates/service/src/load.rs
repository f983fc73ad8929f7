use std::path::Path;

use anyhow::Context;
use miriam_core::config::{read_file, Config, DEMO_PLAN, DEMO_SCENARIO};
use miriam_core::mission::load_plan;
use miriam_core::runtime::MissionRuntime;
use miriam_core::sim::Scenario;

/// Builds a runtime from plan and scenario files, falling back to the bundled
/// demo for whichever is not given. Config paths come from the environment.
pub fn runtime(plan: Option<&Path>, scenario: Option<&Path>) -> anyhow::Result<MissionRuntime> {
    let config = Config::from_env().context("loading configuration")?;
    let plan_text = match plan {
        Some(p) => read_file(p).with_context(|| format!("reading {}", p.display()))?,
        None => DEMO_PLAN.to_string(),
    };
    let plan = load_plan(&plan_text).context("loading plan")?;
    let scenario_text = match scenario {
        Some(p) => read_file(p).with_context(|| format!("reading {}", p.display()))?,
        None => DEMO_SCENARIO.to_string(),
    };
    let scenario = Scenario::parse(&scenario_text).context("loading scenario")?;
    MissionRuntime::new(&config, plan, scenario).context("invalid scenario")
}
