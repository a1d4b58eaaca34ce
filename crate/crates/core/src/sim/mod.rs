//! Discrete-event simulator for the cluster and its external memories.
//!
//! A workload is a graph of [`Phase`]s. [`schedule`] list-schedules it onto
//! lanes (cores, the shared accelerator port, DMA, one lane per external
//! memory), inserting operating-mode switches on demand. [`run`] then sweeps
//! the timeline and integrates power per category.

mod duty;
mod energy;
mod extmem;
mod phase;
mod platform;
mod report;
mod scenario;
mod schedule;
mod tiling;

pub use duty::{sleep_between, DutyCycle};
pub use energy::run;
pub use extmem::ext_transfer;
pub use phase::{Category, Direction, Footprint, Phase, PhaseGraph, PhaseId, PhaseKind, SleepState};
pub use platform::{ExtMemKind, ExtMemModel, PlatformConfig};
pub use report::{PhaseRow, SimReport, REPORT_VERSION};
pub use scenario::{PhaseSource, Scenario, UseCaseRef};
pub use schedule::{schedule, Activity, ActivityKind, Lane, ModePolicy, Timeline};
pub use tiling::{tile_plan, LayerGeometry, Tile, TilePlan};

use crate::perf::{OperatingMode, PerfError};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("dependency cycle through phase `{0}`")]
    CyclicDependency(String),
    #[error("phase `{phase}` depends on unknown phase index {dep}")]
    UnknownDependency { phase: String, dep: usize },
    #[error("no {fs}x{fs} tile fits in {budget} bytes (smallest needs {needed})")]
    TileInfeasible { fs: usize, budget: u64, needed: u64 },
    #[error("phase `{phase}` needs {needed} bytes of {memory}, only {available} available")]
    CapacityExceeded {
        phase: String,
        memory: &'static str,
        needed: u64,
        available: u64,
    },
    #[error("phase `{phase}` cannot run in any permitted mode (policy allows {allowed})")]
    ModeUnavailable { phase: String, allowed: String },
    #[error("unknown external memory `{0}`")]
    UnknownMemory(String),
    #[error("period {period} s is shorter than the active time {active} s")]
    PeriodTooShort { period: f64, active: f64 },
    #[error("invalid platform: {0}")]
    InvalidPlatform(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Perf(#[from] PerfError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SimError {
    /// Whether the error means the requested plan cannot be realized, as
    /// opposed to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            SimError::TileInfeasible { .. }
                | SimError::CapacityExceeded { .. }
                | SimError::ModeUnavailable { .. }
                | SimError::PeriodTooShort { .. }
                | SimError::CyclicDependency(_)
        )
    }
}

fn mode_list(modes: &[OperatingMode]) -> String {
    modes.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
}
