use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{run, schedule, ModePolicy, PhaseGraph, PlatformConfig, SimError, SimReport};
use crate::perf::Calibration;

/// Named use case and optimization level, resolved by the workload builders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UseCaseRef {
    pub id: String,
    pub level: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSource {
    Phases(PhaseGraph),
    UsecaseRef(UseCaseRef),
}

fn default_vdd() -> f64 {
    0.8
}

/// A simulation input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Defaults to the platform derived from the calibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub platform: Option<PlatformConfig>,
    /// Path relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_ref: Option<String>,
    #[serde(default = "default_vdd")]
    pub vdd: f64,
    /// Required for explicit phases; use cases bring their own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_policy: Option<ModePolicy>,
    #[serde(flatten)]
    pub source: PhaseSource,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, SimError> {
        Scenario::from_json(&std::fs::read_to_string(path)?)
    }

    /// Calibration file named by the scenario, if any, resolved against the
    /// directory holding the scenario.
    pub fn calibration_path(&self, scenario_dir: &Path) -> Option<PathBuf> {
        self.calibration_ref.as_ref().map(|r| scenario_dir.join(r))
    }

    pub fn platform_for(&self, cal: &Calibration) -> PlatformConfig {
        self.platform.clone().unwrap_or_else(|| PlatformConfig::from_calibration(cal))
    }

    /// Schedule and integrate an explicit phase list.
    pub fn run_phases(&self, cal: &Calibration) -> Result<SimReport, SimError> {
        let PhaseSource::Phases(graph) = &self.source else {
            return Err(SimError::InvalidScenario("scenario references a use case".into()));
        };
        let policy = self
            .mode_policy
            .clone()
            .ok_or_else(|| SimError::InvalidScenario("mode_policy is required with explicit phases".into()))?;
        let platform = self.platform_for(cal);
        let tl = schedule(graph, &platform, cal, self.vdd, &policy)?;
        Ok(run(&tl, &platform, cal).with_label(self.label.clone().unwrap_or_default()))
    }
}
