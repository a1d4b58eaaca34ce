use serde::{Deserialize, Serialize};

use super::{SimError, SimReport, SleepState};
use crate::perf::Calibration;

/// Energy of one period of a duty-cycled workload.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DutyCycle {
    pub period_s: f64,
    pub active_s: f64,
    pub active_j: f64,
    pub sleep_s: f64,
    pub sleep_j: f64,
    pub wakeup_j: f64,
    pub energy_per_period_j: f64,
}

impl DutyCycle {
    pub fn average_mw(&self) -> f64 {
        self.energy_per_period_j / self.period_s * 1e3
    }

    /// Whole periods a battery of `joules` sustains.
    pub fn iterations(&self, joules: f64) -> u64 {
        (joules / self.energy_per_period_j).floor() as u64
    }
}

/// Run `active` once per `period` seconds and spend the rest in `state`.
/// Leaving a state with the FLL off pays its relock time at idle power.
pub fn sleep_between(cal: &Calibration, active: &SimReport, period: f64, state: SleepState) -> Result<DutyCycle, SimError> {
    let active_s = active.total_seconds;
    if !(period >= active_s) {
        return Err(SimError::PeriodTooShort { period, active: active_s });
    }
    let p = &cal.power_table;
    let idle_on = p.idle_cluster_mw.value + p.fll_mw.value;
    let (sleep_mw, wake_s) = match state {
        SleepState::DeepSleep => (p.deep_sleep_mw.value, p.wakeup_fll_off_s.value),
        SleepState::IdleFllOff => (p.idle_cluster_mw.value, p.wakeup_fll_off_s.value),
        SleepState::IdleFllOn => (idle_on, p.wakeup_fll_on_s.value),
    };
    let sleep_s = period - active_s;
    let slept = sleep_s > 0.0;
    let sleep_j = sleep_mw * 1e-3 * sleep_s;
    let wakeup_j = if slept { idle_on * 1e-3 * wake_s } else { 0.0 };
    Ok(DutyCycle {
        period_s: period,
        active_s,
        active_j: active.total_joules,
        sleep_s,
        sleep_j,
        wakeup_j,
        energy_per_period_j: active.total_joules + sleep_j + wakeup_j,
    })
}
