//! Builders for the three end-node use cases.
//!
//! Each use case turns into a phase graph for a given [`OptLevel`]. Levels
//! are cumulative: parallel software, packed SIMD, the convolution engine at
//! decreasing weight precision, and finally the crypto engine.

mod battery;
mod eeg;
mod face;
pub mod fit;
mod levels;
mod targets;
mod uav;

pub use battery::{battery_projection, BatteryPlan, BatteryProjection, Duty};
pub use eeg::EegSpec;
pub use face::{FaceSpec, NetSpec};
pub use levels::{ConvImpl, LevelConfig, OptLevel};
pub use targets::{verify, TargetCheck, TargetFile, Target};
pub use uav::{resnet20_layers, UavLayer, UavSpec};

use serde::{Deserialize, Serialize};

use crate::perf::Calibration;
use crate::sim::{run, schedule, ModePolicy, PhaseGraph, PlatformConfig, SimError, SimReport, UseCaseRef};

#[derive(Debug, thiserror::Error)]
pub enum WorkloadError {
    #[error("unknown use case `{0}`")]
    UnknownUseCase(String),
    #[error("unknown optimization level `{0}`")]
    UnknownLevel(String),
    #[error("invalid use-case spec: {0}")]
    InvalidSpec(String),
    #[error("target `{0}` not found in report")]
    MissingMetric(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl WorkloadError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, WorkloadError::Sim(e) if e.is_infeasible())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UseCaseId {
    #[serde(rename = "UAV_RESNET20")]
    UavResnet20,
    #[serde(rename = "FACE_DETECT")]
    FaceDetect,
    #[serde(rename = "EEG_SEIZURE")]
    EegSeizure,
}

impl UseCaseId {
    pub const ALL: [UseCaseId; 3] = [UseCaseId::UavResnet20, UseCaseId::FaceDetect, UseCaseId::EegSeizure];

    pub fn name(self) -> &'static str {
        match self {
            UseCaseId::UavResnet20 => "UAV_RESNET20",
            UseCaseId::FaceDetect => "FACE_DETECT",
            UseCaseId::EegSeizure => "EEG_SEIZURE",
        }
    }

    /// Equivalent RISC instructions per iteration.
    pub fn equivalent_ops(self) -> f64 {
        match self {
            UseCaseId::UavResnet20 => 8.54e9,
            UseCaseId::FaceDetect => 9.93e7,
            UseCaseId::EegSeizure => 1.42e7,
        }
    }
}

impl std::fmt::Display for UseCaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for UseCaseId {
    type Err = WorkloadError;
    fn from_str(s: &str) -> Result<Self, WorkloadError> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "UAV_RESNET20" | "UAV" => Ok(UseCaseId::UavResnet20),
            "FACE_DETECT" | "FACE" => Ok(UseCaseId::FaceDetect),
            "EEG_SEIZURE" | "EEG" => Ok(UseCaseId::EegSeizure),
            _ => Err(WorkloadError::UnknownUseCase(s.to_string())),
        }
    }
}

pub fn equivalent_ops(id: UseCaseId) -> f64 {
    id.equivalent_ops()
}

/// Parameters of all three use cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseSpecs {
    pub uav: UavSpec,
    pub face: FaceSpec,
    pub eeg: EegSpec,
}

pub const DEFAULT_USECASES_JSON: &str = include_str!("../../data/usecases.json");

impl Default for UseCaseSpecs {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_USECASES_JSON).expect("embedded use-case specs parse")
    }
}

/// A built graph with the policy it must run under.
#[derive(Debug, Clone)]
pub struct Workload {
    pub id: UseCaseId,
    pub level: OptLevel,
    pub graph: PhaseGraph,
    pub policy: ModePolicy,
}

pub fn build(
    id: UseCaseId,
    level: OptLevel,
    specs: &UseCaseSpecs,
    platform: &PlatformConfig,
) -> Result<Workload, WorkloadError> {
    let cfg = level.config();
    let (graph, policy) = match id {
        UseCaseId::UavResnet20 => (uav::build(&specs.uav, &cfg, platform)?, uav::policy()),
        UseCaseId::FaceDetect => (face::build(&specs.face, &cfg, platform)?, face::policy()),
        UseCaseId::EegSeizure => (eeg::build(&specs.eeg, &cfg)?, eeg::policy()),
    };
    Ok(Workload {
        id,
        level,
        graph,
        policy,
    })
}

/// Build, schedule and integrate one use case at one level.
pub fn simulate(
    id: UseCaseId,
    level: OptLevel,
    vdd: f64,
    cal: &Calibration,
    specs: &UseCaseSpecs,
) -> Result<SimReport, WorkloadError> {
    simulate_on(id, level, vdd, cal, specs, &PlatformConfig::from_calibration(cal), None)
}

/// [`simulate`] on an explicit platform, optionally overriding the mode
/// policy the use case brings.
pub fn simulate_on(
    id: UseCaseId,
    level: OptLevel,
    vdd: f64,
    cal: &Calibration,
    specs: &UseCaseSpecs,
    platform: &PlatformConfig,
    policy: Option<&ModePolicy>,
) -> Result<SimReport, WorkloadError> {
    let w = build(id, level, specs, platform)?;
    let tl = schedule(&w.graph, platform, cal, vdd, policy.unwrap_or(&w.policy))?;
    Ok(run(&tl, platform, cal)
        .with_label(format!("{id} {level}"))
        .with_equivalent_ops(id.equivalent_ops()))
}

pub fn resolve(r: &UseCaseRef) -> Result<(UseCaseId, OptLevel), WorkloadError> {
    Ok((r.id.parse()?, r.level.parse()?))
}

/// Totals of one level inside a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTotals {
    pub level: OptLevel,
    pub seconds: f64,
    pub joules: f64,
    pub pj_per_op: f64,
    pub peak_power_mw: f64,
    pub mode_switches: usize,
}

/// Every level of one use case, with ratios against the single-core
/// baseline and the battery projection of the fully optimized level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseSummary {
    pub version: String,
    pub calibration_sha256: String,
    pub id: UseCaseId,
    pub vdd: f64,
    pub levels: Vec<LevelTotals>,
    pub speedup: f64,
    pub energy_ratio: f64,
    pub best: SimReport,
    pub battery: BatteryProjection,
    /// Bytes of weights fetched per iteration, for the UAV network.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_traffic_bytes: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_peak_bytes: Option<f64>,
}

impl UseCaseSummary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    /// One row per level.
    pub fn to_csv(&self) -> String {
        let num = |x: f64| serde_json::to_string(&x).expect("finite number");
        let mut s = String::from("level,seconds,joules,pj_per_op,peak_power_mw,mode_switches\n");
        for l in &self.levels {
            s += &format!(
                "{},{},{},{},{},{}\n",
                l.level,
                num(l.seconds),
                num(l.joules),
                num(l.pj_per_op),
                num(l.peak_power_mw),
                l.mode_switches
            );
        }
        s
    }
}

pub fn summarize(id: UseCaseId, vdd: f64, cal: &Calibration, specs: &UseCaseSpecs) -> Result<UseCaseSummary, WorkloadError> {
    let mut levels = Vec::new();
    let mut reports = Vec::new();
    for level in OptLevel::ALL {
        let r = simulate(id, level, vdd, cal, specs)?;
        levels.push(LevelTotals {
            level,
            seconds: r.total_seconds,
            joules: r.total_joules,
            pj_per_op: r.pj_per_op.unwrap_or(0.0),
            peak_power_mw: r.peak_power_mw,
            mode_switches: r.mode_switches,
        });
        reports.push(r);
    }
    let base = &levels[0];
    let top = &levels[levels.len() - 1];
    let best = reports.pop().expect("at least one level").without_phases();
    let battery = battery::default_projection(id, cal, specs, &best)?;
    let (weight_traffic_bytes, partial_peak_bytes) = match id {
        UseCaseId::UavResnet20 => {
            let p = OptLevel::PlusHwcrypt.config().weight_precision;
            (Some(specs.uav.weight_traffic(p)), Some(specs.uav.partial_peak_bytes()))
        }
        _ => (None, None),
    };
    Ok(UseCaseSummary {
        version: crate::sim::REPORT_VERSION.to_string(),
        calibration_sha256: cal.digest(),
        id,
        vdd,
        speedup: base.seconds / top.seconds,
        energy_ratio: base.joules / top.joules,
        levels,
        best,
        battery,
        weight_traffic_bytes,
        partial_peak_bytes,
    })
}
