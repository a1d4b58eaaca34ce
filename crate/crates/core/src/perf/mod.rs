//! Timing and power model.
//!
//! Operating modes and their frequencies, cycle costs for accelerator and
//! software kernels, per-unit power and energy integration. All constants
//! come from a [`Calibration`], loaded from JSON; the shipped default is
//! embedded in the crate.

mod calibration;
mod cost;
mod power;

pub use calibration::{
    Calibration, CostTable, Entry, ExtMemParams, FrequencyTable, HwceCpp, PerCores, PerPrecision,
    PowerTable, Provenance, SwKernelTable, UnitPower, DEFAULT_CALIBRATION_JSON,
};
pub use cost::{
    cycles_dma, cycles_hwce, cycles_hwcrypt, cycles_sw, sponge_cycles_per_call, Cores, CryptoKind,
    Cycles, Kernel,
};
pub use power::{
    base_mw, dynamic_mw, energy_of, mode_switch_cost, power_mw, HwcryptUnit, PowerState, UnitSet,
};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PerfError {
    #[error("supply {0} V is outside the calibrated range")]
    VddOutOfRange(f64),
    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("unknown operating mode `{0}`")]
    UnknownMode(String),
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),
}

/// Synthesis-level operating mode. Each trades accelerator availability for
/// clock frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatingMode {
    /// All accelerators available.
    #[serde(rename = "CRY_CNN_SW")]
    CryCnnSw,
    /// Crypto engine limited to the sponge primitives.
    #[serde(rename = "KEC_CNN_SW")]
    KecCnnSw,
    /// Software only.
    #[serde(rename = "SW")]
    Sw,
}

impl OperatingMode {
    pub const ALL: [OperatingMode; 3] = [OperatingMode::CryCnnSw, OperatingMode::KecCnnSw, OperatingMode::Sw];

    pub fn name(self) -> &'static str {
        match self {
            OperatingMode::CryCnnSw => "CRY_CNN_SW",
            OperatingMode::KecCnnSw => "KEC_CNN_SW",
            OperatingMode::Sw => "SW",
        }
    }
}

impl std::fmt::Display for OperatingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatingMode {
    type Err = PerfError;
    fn from_str(s: &str) -> Result<Self, PerfError> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "CRY_CNN_SW" | "CRY" => Ok(OperatingMode::CryCnnSw),
            "KEC_CNN_SW" | "KEC" => Ok(OperatingMode::KecCnnSw),
            "SW" => Ok(OperatingMode::Sw),
            _ => Err(PerfError::UnknownMode(s.to_string())),
        }
    }
}

/// Mode, supply and the resulting clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub mode: OperatingMode,
    pub vdd: f64,
    pub freq_hz: f64,
}

impl OperatingPoint {
    pub fn new(cal: &Calibration, mode: OperatingMode, vdd: f64) -> Result<Self, PerfError> {
        Ok(OperatingPoint {
            mode,
            vdd,
            freq_hz: cal.frequency_of(mode, vdd)?,
        })
    }

    pub fn freq_mhz(&self) -> f64 {
        self.freq_hz / 1e6
    }

    pub fn seconds(&self, cycles: f64) -> f64 {
        cycles / self.freq_hz
    }
}
