use serde::{Deserialize, Serialize};

use super::{Calibration, PerCores, PerfError};
use crate::conv::{FilterSize, Precision};

/// Operation classes of the crypto engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CryptoKind {
    Ecb,
    Xts,
    SpongeAe { rate_bits: u32, rounds: u32 },
}

impl CryptoKind {
    pub fn is_aes(self) -> bool {
        matches!(self, CryptoKind::Ecb | CryptoKind::Xts)
    }
}

/// Cycle cost split into the part the issuing core pays to program the
/// engine and the part the engine spends on data.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cycles {
    pub setup: f64,
    pub data: f64,
}

impl Cycles {
    pub fn total(self) -> f64 {
        self.setup + self.data
    }
}

/// Cycles for one sponge permutation call at the given round count. Each
/// call moves one rate block, so a narrower rate needs proportionally more
/// calls at the same per-call cost.
pub fn sponge_cycles_per_call(cal: &Calibration, rounds: u32) -> f64 {
    let groups = f64::from(rounds.div_ceil(3)) / f64::from(20u32.div_ceil(3));
    cal.cost_table.sponge_cpb_at_rate128_r20.value * 16.0 * groups
}

pub fn cycles_hwcrypt(cal: &Calibration, kind: CryptoKind, nbytes: u64) -> Cycles {
    let c = &cal.cost_table;
    let setup = c.hwcrypt_setup_cycles.value;
    let data = match kind {
        CryptoKind::Ecb => c.hwcrypt_ecb_cpb.value * nbytes as f64,
        CryptoKind::Xts => c.hwcrypt_xts_cpb.value * nbytes as f64,
        CryptoKind::SpongeAe { rate_bits, rounds } => {
            let calls = (nbytes * 8).div_ceil(u64::from(rate_bits.max(1)));
            calls as f64 * sponge_cycles_per_call(cal, rounds)
        }
    };
    Cycles { setup, data }
}

/// One engine job over an `out_w x out_h` output.
pub fn cycles_hwce(cal: &Calibration, out_w: u64, out_h: u64, fs: FilterSize, precision: Precision) -> Cycles {
    let c = &cal.cost_table;
    let fill = c.hwce_linebuffer_fill_per_row.value * (fs.side() - 1) as f64;
    Cycles {
        setup: c.hwce_setup_cycles.value,
        data: fill + c.hwce_cyc_per_px.get(fs, precision) * (out_w * out_h) as f64,
    }
}

pub fn cycles_dma(cal: &Calibration, bytes: u64) -> f64 {
    let c = &cal.cost_table;
    // four 32-bit TCDM ports cap the transfer rate
    let bpc = c.dma_bytes_per_cycle.value.min(16.0);
    c.dma_setup_cycles.value + (bytes as f64 / bpc).ceil()
}

/// Core configuration of a software kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cores {
    Core1,
    Core4,
    Core4Simd,
}

impl Cores {
    pub fn from_parts(cores: u32, simd: bool) -> Result<Self, PerfError> {
        match (cores, simd) {
            (1, false) => Ok(Cores::Core1),
            (4, false) => Ok(Cores::Core4),
            (4, true) => Ok(Cores::Core4Simd),
            _ => Err(PerfError::UnknownUnit(format!("{cores} cores, simd {simd}"))),
        }
    }

    pub fn count(self) -> u32 {
        match self {
            Cores::Core1 => 1,
            _ => 4,
        }
    }
}

/// Software kernels with table-driven costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// per output pixel
    Conv5x5,
    /// per output pixel
    Conv3x3,
    /// per byte
    AesEcb,
    /// per byte
    AesXts,
    Dense,
    Pca,
    Dwt,
    Svm,
    Act,
}

impl Kernel {
    fn table(self, cal: &Calibration) -> &PerCores {
        let c = &cal.cost_table;
        match self {
            Kernel::Conv5x5 => &c.sw_conv5x5_cyc_per_px,
            Kernel::Conv3x3 => &c.sw_conv3x3_cyc_per_px,
            Kernel::AesEcb => &c.sw_aes_ecb_cpb,
            Kernel::AesXts => &c.sw_aes_xts_cpb,
            Kernel::Dense => &c.sw_kernels.dense,
            Kernel::Pca => &c.sw_kernels.pca,
            Kernel::Dwt => &c.sw_kernels.dwt,
            Kernel::Svm => &c.sw_kernels.svm,
            Kernel::Act => &c.sw_kernels.act,
        }
    }

    pub fn cycles_per_unit(self, cal: &Calibration, cores: Cores) -> f64 {
        let t = self.table(cal);
        match cores {
            Cores::Core1 => t.core1.value,
            Cores::Core4 => t.core4.value,
            Cores::Core4Simd => t.core4_simd.value,
        }
    }

    /// Average number of cores kept busy. Parallel efficiency below 100%
    /// leaves cores clock-gated at barriers; the packed-SIMD variant keeps
    /// the same occupancy as the plain parallel one.
    pub fn busy_cores(self, cal: &Calibration, cores: Cores) -> f64 {
        match cores {
            Cores::Core1 => 1.0,
            Cores::Core4 | Cores::Core4Simd => {
                let t = self.table(cal);
                (t.core1.value / t.core4.value).clamp(1.0, 4.0)
            }
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = PerfError;
    fn from_str(s: &str) -> Result<Self, PerfError> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| PerfError::UnknownKernel(s.to_string()))
    }
}

/// Software kernel cost: per-unit table lookup plus the fork/join overhead
/// of a parallel region.
pub fn cycles_sw(cal: &Calibration, kernel: Kernel, units: f64, cores: Cores) -> f64 {
    let c = &cal.cost_table;
    let overhead = match cores {
        Cores::Core1 => 0.0,
        _ => c.parallel_open_cycles.value + c.barrier_cycles.value,
    };
    kernel.cycles_per_unit(cal, cores) * units + overhead
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecb_8k_close_to_3100() {
        let cal = Calibration::default();
        let c = cycles_hwcrypt(&cal, CryptoKind::Ecb, 8192).total();
        assert!((c / 3100.0 - 1.0).abs() < 0.02, "{c}");
        assert_eq!(c, cycles_hwcrypt(&cal, CryptoKind::Xts, 8192).total());
    }

    #[test]
    fn zero_bytes_cost_setup_only() {
        let cal = Calibration::default();
        for k in [CryptoKind::Ecb, CryptoKind::Xts, CryptoKind::SpongeAe { rate_bits: 8, rounds: 6 }] {
            let c = cycles_hwcrypt(&cal, k, 0);
            assert_eq!(c.data, 0.0);
            assert_eq!(c.total(), cal.cost_table.hwcrypt_setup_cycles.value);
        }
    }

    #[test]
    fn sponge_rate_halving_doubles_data_cycles() {
        let cal = Calibration::default();
        let a = cycles_hwcrypt(&cal, CryptoKind::SpongeAe { rate_bits: 128, rounds: 20 }, 4096).data;
        let b = cycles_hwcrypt(&cal, CryptoKind::SpongeAe { rate_bits: 64, rounds: 20 }, 4096).data;
        assert_eq!(b, 2.0 * a);
        assert!((a / 4096.0 - 0.51).abs() < 1e-12);
    }

    #[test]
    fn hwce_zero_area_is_overhead_only() {
        let cal = Calibration::default();
        let c = cycles_hwce(&cal, 0, 0, FilterSize::Five, Precision::Bits16);
        assert_eq!(c.data, 4.0 * cal.cost_table.hwce_linebuffer_fill_per_row.value);
        let big = cycles_hwce(&cal, 100, 100, FilterSize::Five, Precision::Bits16).total();
        assert!((big / 11_400.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn software_tables() {
        let cal = Calibration::default();
        assert_eq!(Kernel::Conv5x5.cycles_per_unit(&cal, Cores::Core1), 94.0);
        assert_eq!(Kernel::Conv5x5.cycles_per_unit(&cal, Cores::Core4Simd), 13.0);
        let ratio = Kernel::AesEcb.cycles_per_unit(&cal, Cores::Core1) / cal.cost_table.hwcrypt_ecb_cpb.value;
        assert!((ratio / 450.0 - 1.0).abs() < 0.02);
        assert!(matches!("fft".parse::<Kernel>(), Err(PerfError::UnknownKernel(_))));
        assert_eq!("dense".parse::<Kernel>().unwrap(), Kernel::Dense);
    }

    #[test]
    fn dma_cost() {
        let cal = Calibration::default();
        assert_eq!(cycles_dma(&cal, 0), 10.0);
        assert_eq!(cycles_dma(&cal, 17), 13.0);
    }
}
