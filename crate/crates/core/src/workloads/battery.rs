use serde::{Deserialize, Serialize};

use super::{UseCaseId, UseCaseSpecs, WorkloadError};
use crate::perf::Calibration;
use crate::sim::{sleep_between, SimReport, SleepState};

/// How iterations are spread over time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Duty {
    /// Back to back until the battery is empty.
    Continuous,
    /// A fixed number of iterations, e.g. over one flight.
    Count { iterations: u64 },
    /// One iteration per period, sleeping in between.
    Periodic { period_s: f64, state: SleepState },
}

/// Battery attached to a use case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryPlan {
    pub joules: f64,
    pub duty: Duty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryProjection {
    pub battery_joules: f64,
    pub duty: Duty,
    /// Energy of one iteration, including any sleep that follows it.
    pub energy_per_iteration_j: f64,
    pub average_power_mw: f64,
    /// Iterations performed: the requested count, or what the battery holds.
    pub iterations: u64,
    pub total_joules: f64,
    pub battery_fraction: f64,
    pub lifetime_s: f64,
    pub lifetime_days: f64,
    pub peak_power_mw: f64,
}

pub fn battery_projection(
    cal: &Calibration,
    iteration: &SimReport,
    battery_joules: f64,
    duty: Duty,
) -> Result<BatteryProjection, WorkloadError> {
    if !(battery_joules > 0.0) {
        return Err(WorkloadError::InvalidSpec(format!("battery energy {battery_joules} J must be positive")));
    }
    let (e, period) = match duty {
        Duty::Continuous | Duty::Count { .. } => (iteration.total_joules, iteration.total_seconds),
        Duty::Periodic { period_s, state } => {
            let d = sleep_between(cal, iteration, period_s, state)?;
            (d.energy_per_period_j, period_s)
        }
    };
    let iterations = match duty {
        Duty::Count { iterations } => iterations,
        _ => (battery_joules / e).floor() as u64,
    };
    let total = iterations as f64 * e;
    let lifetime_s = iterations as f64 * period;
    Ok(BatteryProjection {
        battery_joules,
        duty,
        energy_per_iteration_j: e,
        average_power_mw: e / period * 1e3,
        iterations,
        total_joules: total,
        battery_fraction: total / battery_joules,
        lifetime_s,
        lifetime_days: lifetime_s / 86_400.0,
        peak_power_mw: iteration.peak_power_mw,
    })
}

pub(super) fn default_projection(
    id: UseCaseId,
    cal: &Calibration,
    specs: &UseCaseSpecs,
    iteration: &SimReport,
) -> Result<BatteryProjection, WorkloadError> {
    let plan = match id {
        UseCaseId::UavResnet20 => specs.uav.battery,
        UseCaseId::FaceDetect => specs.face.battery,
        UseCaseId::EegSeizure => specs.eeg.battery,
    };
    battery_projection(cal, iteration, plan.joules, plan.duty)
}
