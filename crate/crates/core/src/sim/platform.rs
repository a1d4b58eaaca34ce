use serde::{Deserialize, Serialize};

use super::SimError;
use crate::perf::{Calibration, ExtMemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExtMemKind {
    Flash,
    Fram,
}

impl ExtMemKind {
    pub const ALL: [ExtMemKind; 2] = [ExtMemKind::Flash, ExtMemKind::Fram];

    pub fn name(self) -> &'static str {
        match self {
            ExtMemKind::Flash => "FLASH",
            ExtMemKind::Fram => "FRAM",
        }
    }
}

impl std::str::FromStr for ExtMemKind {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self, SimError> {
        match s.to_ascii_uppercase().as_str() {
            "FLASH" => Ok(ExtMemKind::Flash),
            "FRAM" => Ok(ExtMemKind::Fram),
            _ => Err(SimError::UnknownMemory(s.to_string())),
        }
    }
}

/// An SPI-attached memory array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtMemModel {
    pub kind: ExtMemKind,
    /// whole array while transferring
    pub active_ma: f64,
    /// per bank
    pub standby_ua: f64,
    pub supply_v: f64,
    pub bandwidth_bytes_s: f64,
    pub banks: u32,
}

impl ExtMemModel {
    pub fn from_params(kind: ExtMemKind, p: &ExtMemParams) -> Self {
        ExtMemModel {
            kind,
            active_ma: p.active_ma.value,
            standby_ua: p.standby_ua.value,
            supply_v: p.supply_v.value,
            bandwidth_bytes_s: p.bandwidth_mb_s.value * 1e6,
            banks: p.banks.value as u32,
        }
    }

    pub fn active_mw(&self) -> f64 {
        self.active_ma * self.supply_v
    }

    pub fn standby_mw(&self) -> f64 {
        f64::from(self.banks) * self.standby_ua * 1e-3 * self.supply_v
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let ok = self.standby_ua >= 0.0
            && self.active_ma * 1000.0 >= self.standby_ua
            && self.supply_v > 0.0
            && self.bandwidth_bytes_s > 0.0
            && self.banks > 0;
        if ok {
            Ok(())
        } else {
            Err(SimError::InvalidPlatform(format!("{} parameters out of range", self.kind.name())))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformConfig {
    pub tcdm_bytes: u64,
    pub l2_bytes: u64,
    pub tcdm_banks: u32,
    pub accel_ports: u32,
    pub dma_outstanding: u32,
    pub dma_burst_bytes: u32,
    pub hwcrypt_queue_depth: usize,
    pub hwce_queue_depth: usize,
    pub flash: ExtMemModel,
    pub fram: ExtMemModel,
    /// pad power while any SPI transfer is in flight
    pub spi_io_mw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_ref: Option<String>,
}

impl PlatformConfig {
    pub fn from_calibration(cal: &Calibration) -> Self {
        let p = &cal.power_table;
        PlatformConfig {
            tcdm_bytes: 65536,
            l2_bytes: 196_608,
            tcdm_banks: 8,
            accel_ports: 4,
            dma_outstanding: 16,
            dma_burst_bytes: 256,
            hwcrypt_queue_depth: 4,
            hwce_queue_depth: 2,
            flash: ExtMemModel::from_params(ExtMemKind::Flash, &p.flash),
            fram: ExtMemModel::from_params(ExtMemKind::Fram, &p.fram),
            spi_io_mw: p.spi_io_mw.value,
            calibration_ref: None,
        }
    }

    pub fn mem(&self, kind: ExtMemKind) -> &ExtMemModel {
        match kind {
            ExtMemKind::Flash => &self.flash,
            ExtMemKind::Fram => &self.fram,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let positive = [
            self.tcdm_bytes,
            self.l2_bytes,
            u64::from(self.tcdm_banks),
            u64::from(self.accel_ports),
            u64::from(self.dma_outstanding),
            u64::from(self.dma_burst_bytes),
            self.hwcrypt_queue_depth as u64,
            self.hwce_queue_depth as u64,
        ];
        if positive.contains(&0) {
            return Err(SimError::InvalidPlatform("capacities and queue depths must be positive".into()));
        }
        if self.flash.kind != ExtMemKind::Flash || self.fram.kind != ExtMemKind::Fram {
            return Err(SimError::InvalidPlatform("memory descriptors are swapped".into()));
        }
        if !(self.spi_io_mw >= 0.0) {
            return Err(SimError::InvalidPlatform("spi_io_mw must be non-negative".into()));
        }
        self.flash.validate()?;
        self.fram.validate()
    }
}

impl Default for PlatformConfig {
    fn default() -> Self {
        PlatformConfig::from_calibration(&Calibration::default())
    }
}
