//! Bundled configuration and file/env overrides.

use std::fs;
use std::path::{Path, PathBuf};

use crate::alert::AlertPolicy;
use crate::dialogue::{Processor, TemplateSet};
use crate::error::ConfigError;
use crate::mission::MissionPlan;
use crate::nlu::{parse_static_entries, Nlu, RuleSet, StaticEntry};

pub const BUNDLED_RULES: &str = include_str!("../data/rules.txt");
pub const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.csv");
pub const BUNDLED_TEMPLATES: &str = include_str!("../data/templates.txt");
pub const BUNDLED_POLICY: &str = include_str!("../data/policy.json");
pub const DEMO_PLAN: &str = include_str!("../data/demo_plan.json");
pub const DEMO_SCENARIO: &str = include_str!("../data/demo_scenario.json");

pub const RULES_ENV: &str = "MIRIAM_RULES";
pub const TEMPLATES_ENV: &str = "MIRIAM_TEMPLATES";
pub const LEXICON_ENV: &str = "MIRIAM_LEXICON";
pub const POLICY_ENV: &str = "MIRIAM_POLICY";

/// Optional file overrides; `None` means the bundled copy.
#[derive(Debug, Clone, Default)]
pub struct ConfigPaths {
    pub rules: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub policy: Option<PathBuf>,
}

impl ConfigPaths {
    pub fn from_env() -> Self {
        let var = |name: &str| {
            std::env::var_os(name)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        };
        Self {
            rules: var(RULES_ENV),
            lexicon: var(LEXICON_ENV),
            templates: var(TEMPLATES_ENV),
            policy: var(POLICY_ENV),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub rules: RuleSet,
    pub statics: Vec<StaticEntry>,
    pub templates: TemplateSet,
    pub policy: AlertPolicy,
}

fn read(path: &Option<PathBuf>, bundled: &'static str) -> Result<(String, String), ConfigError> {
    match path {
        Some(p) => Ok((fs::read_to_string(p)?, p.display().to_string())),
        None => Ok((bundled.to_string(), "<bundled>".to_string())),
    }
}

impl Config {
    pub fn bundled() -> Self {
        Self::load(&ConfigPaths::default()).expect("bundled configuration is valid")
    }

    pub fn load(paths: &ConfigPaths) -> Result<Self, ConfigError> {
        let (text, name) = read(&paths.rules, BUNDLED_RULES)?;
        let rules = RuleSet::parse(&text, &name)?;
        let (text, name) = read(&paths.lexicon, BUNDLED_LEXICON)?;
        let statics = parse_static_entries(&text, &name)?;
        let (text, name) = read(&paths.templates, BUNDLED_TEMPLATES)?;
        let templates = TemplateSet::parse(&text, &name)?;
        templates.validate()?;
        let (text, _) = read(&paths.policy, BUNDLED_POLICY)?;
        let policy = AlertPolicy::from_json(&text)?;
        Ok(Self {
            rules,
            statics,
            templates,
            policy,
        })
    }

    pub fn from_env() -> Result<Self, ConfigError> {
        Self::load(&ConfigPaths::from_env())
    }

    pub fn nlu(&self, plan: &MissionPlan) -> Nlu {
        Nlu::new(self.rules.clone(), self.statics.clone(), plan)
    }

    pub fn processor(&self) -> Processor {
        Processor::new(self.templates.clone()).expect("templates validated at load")
    }
}

pub fn read_file(path: &Path) -> Result<String, ConfigError> {
    Ok(fs::read_to_string(path)?)
}
