use serde::{Deserialize, Serialize};

use super::{Calibration, OperatingMode, OperatingPoint, PerfError};
use crate::conv::Precision;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HwcryptUnit {
    Aes,
    Sponge,
}

/// Cluster units drawing dynamic power.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UnitSet {
    /// average number of busy cores, fractional for partly parallel code
    pub cores: f64,
    pub hwcrypt: Option<HwcryptUnit>,
    pub hwce: Option<Precision>,
    pub dma: bool,
}

impl UnitSet {
    pub fn cores(n: f64) -> Self {
        UnitSet {
            cores: n,
            ..UnitSet::default()
        }
    }

    pub fn hwcrypt(u: HwcryptUnit) -> Self {
        UnitSet {
            hwcrypt: Some(u),
            ..UnitSet::default()
        }
    }

    pub fn hwce(p: Precision) -> Self {
        UnitSet {
            hwce: Some(p),
            ..UnitSet::default()
        }
    }

    pub fn dma() -> Self {
        UnitSet {
            dma: true,
            ..UnitSet::default()
        }
    }

    /// Everything switched on: four cores, DMA and the heaviest accelerator
    /// the mode offers.
    pub fn full_load(mode: OperatingMode) -> Self {
        UnitSet {
            cores: 4.0,
            hwcrypt: match mode {
                OperatingMode::CryCnnSw => Some(HwcryptUnit::Aes),
                OperatingMode::KecCnnSw => Some(HwcryptUnit::Sponge),
                OperatingMode::Sw => None,
            },
            hwce: None,
            dma: true,
        }
    }

    /// Parse a comma-separated list such as `cores=4,aes,hwce8,dma`.
    pub fn parse(s: &str) -> Result<Self, PerfError> {
        let mut u = UnitSet::default();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "aes" => u.hwcrypt = Some(HwcryptUnit::Aes),
                "sponge" => u.hwcrypt = Some(HwcryptUnit::Sponge),
                "hwce16" => u.hwce = Some(Precision::Bits16),
                "hwce8" => u.hwce = Some(Precision::Bits8),
                "hwce4" => u.hwce = Some(Precision::Bits4),
                "dma" => u.dma = true,
                t => match t.strip_prefix("cores=").map(str::parse::<f64>) {
                    Some(Ok(n)) if (0.0..=4.0).contains(&n) => u.cores = n,
                    _ => return Err(PerfError::UnknownUnit(t.to_string())),
                },
            }
        }
        Ok(u)
    }

    /// True when every unit in `self` is also in `other`.
    pub fn is_subset_of(&self, other: &UnitSet) -> bool {
        self.cores <= other.cores
            && (self.hwcrypt.is_none() || self.hwcrypt == other.hwcrypt)
            && (self.hwce.is_none() || self.hwce == other.hwce)
            && (!self.dma || other.dma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PowerState {
    Active(UnitSet),
    /// Cluster clock-gated, optionally keeping its FLL locked.
    Idle { fll_on: bool },
    DeepSleep,
}

fn voltage_scale(cal: &Calibration, vdd: f64) -> f64 {
    let r = vdd / cal.power_table.reference_vdd.value;
    r * r
}

/// Power that does not depend on which units run: SoC domain, leakage and
/// the cluster's clock tree and interconnect.
pub fn base_mw(cal: &Calibration, point: &OperatingPoint) -> Result<f64, PerfError> {
    let p = &cal.power_table;
    let dynamic = p.uw_per_mhz.cluster_base.value * point.freq_mhz() * voltage_scale(cal, point.vdd) / 1000.0;
    Ok(p.soc_mw.value + cal.cluster_leak_mw(point.vdd)? + dynamic)
}

/// Power added by the units in `units`.
pub fn dynamic_mw(cal: &Calibration, point: &OperatingPoint, units: &UnitSet) -> f64 {
    let u = &cal.power_table.uw_per_mhz;
    let mut uw_per_mhz = units.cores * u.core.value;
    uw_per_mhz += match units.hwcrypt {
        Some(HwcryptUnit::Aes) => u.hwcrypt_aes.value,
        Some(HwcryptUnit::Sponge) => u.hwcrypt_sponge.value,
        None => 0.0,
    };
    if let Some(p) = units.hwce {
        uw_per_mhz += u.hwce.get(p);
    }
    if units.dma {
        uw_per_mhz += u.dma.value;
    }
    uw_per_mhz * point.freq_mhz() * voltage_scale(cal, point.vdd) / 1000.0
}

pub fn power_mw(cal: &Calibration, point: &OperatingPoint, state: &PowerState) -> Result<f64, PerfError> {
    let p = &cal.power_table;
    match state {
        PowerState::Active(units) => Ok(base_mw(cal, point)? + dynamic_mw(cal, point, units)),
        PowerState::Idle { fll_on } => {
            Ok(p.idle_cluster_mw.value + if *fll_on { p.fll_mw.value } else { 0.0 })
        }
        PowerState::DeepSleep => Ok(p.deep_sleep_mw.value),
    }
}

/// Joules spent running `cycles` at `point`.
pub fn energy_of(cal: &Calibration, cycles: f64, point: &OperatingPoint, state: &PowerState) -> Result<f64, PerfError> {
    Ok(power_mw(cal, point, state)? * 1e-3 * cycles / point.freq_hz)
}

/// Seconds to move between modes: a fixed number of reference-clock cycles
/// for the FLL to relock.
pub fn mode_switch_cost(cal: &Calibration, from: OperatingMode, to: OperatingMode) -> f64 {
    if from == to {
        0.0
    } else {
        cal.cost_table.mode_switch_ref_cycles.value / cal.cost_table.ref_clock_hz.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_load_at_high_supply_near_120mw() {
        let cal = Calibration::default();
        for mode in OperatingMode::ALL {
            let pt = OperatingPoint::new(&cal, mode, 1.2).unwrap();
            let p = power_mw(&cal, &pt, &PowerState::Active(UnitSet::full_load(mode))).unwrap();
            assert!((p / 120.0 - 1.0).abs() < 0.10, "{mode}: {p}");
        }
    }

    #[test]
    fn idle_and_sleep_floors() {
        let cal = Calibration::default();
        let pt = OperatingPoint::new(&cal, OperatingMode::CryCnnSw, 0.8).unwrap();
        let idle_off = power_mw(&cal, &pt, &PowerState::Idle { fll_on: false }).unwrap();
        let idle_on = power_mw(&cal, &pt, &PowerState::Idle { fll_on: true }).unwrap();
        assert!(idle_off <= 1.0);
        assert!((idle_on - idle_off - 0.4).abs() < 1e-12);
        let sleep = power_mw(&cal, &pt, &PowerState::DeepSleep).unwrap();
        assert!(sleep < idle_off);
        let empty = power_mw(&cal, &pt, &PowerState::Active(UnitSet::default())).unwrap();
        assert!(sleep <= empty);
    }

    #[test]
    fn superset_draws_more() {
        let cal = Calibration::default();
        let pt = OperatingPoint::new(&cal, OperatingMode::KecCnnSw, 1.0).unwrap();
        let small = UnitSet::parse("cores=1").unwrap();
        let big = UnitSet::parse("cores=4,sponge,dma").unwrap();
        assert!(small.is_subset_of(&big));
        let ps = power_mw(&cal, &pt, &PowerState::Active(small)).unwrap();
        let pb = power_mw(&cal, &pt, &PowerState::Active(big)).unwrap();
        assert!(pb >= ps);
        assert!(UnitSet::parse("gpu").is_err());
    }

    #[test]
    fn zero_cycles_zero_energy() {
        let cal = Calibration::default();
        let pt = OperatingPoint::new(&cal, OperatingMode::Sw, 0.8).unwrap();
        assert_eq!(energy_of(&cal, 0.0, &pt, &PowerState::Active(UnitSet::cores(4.0))).unwrap(), 0.0);
    }

    #[test]
    fn switch_costs_ten_reference_cycles() {
        let cal = Calibration::default();
        let s = mode_switch_cost(&cal, OperatingMode::CryCnnSw, OperatingMode::KecCnnSw);
        assert!((s - 100e-6).abs() < 1e-12);
        assert_eq!(mode_switch_cost(&cal, OperatingMode::Sw, OperatingMode::Sw), 0.0);
    }
}
