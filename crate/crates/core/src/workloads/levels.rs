use serde::{Deserialize, Serialize};

use super::WorkloadError;
use crate::conv::{FilterSize, Precision};
use crate::perf::{Cores, CryptoKind, Kernel};
use crate::sim::PhaseKind;

/// Optimization levels, each adding to the one before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OptLevel {
    #[serde(rename = "SW1")]
    Sw1,
    #[serde(rename = "SW4")]
    Sw4,
    #[serde(rename = "SW4_SIMD")]
    Sw4Simd,
    #[serde(rename = "HWCE16")]
    Hwce16,
    #[serde(rename = "HWCE8")]
    Hwce8,
    #[serde(rename = "HWCE4")]
    Hwce4,
    #[serde(rename = "PLUS_HWCRYPT")]
    PlusHwcrypt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvImpl {
    Software,
    Hwce(Precision),
}

/// What a level turns on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelConfig {
    pub conv: ConvImpl,
    /// core configuration of every software kernel
    pub cores: Cores,
    pub hw_crypto: bool,
    pub weight_precision: Precision,
}

impl OptLevel {
    pub const ALL: [OptLevel; 7] = [
        OptLevel::Sw1,
        OptLevel::Sw4,
        OptLevel::Sw4Simd,
        OptLevel::Hwce16,
        OptLevel::Hwce8,
        OptLevel::Hwce4,
        OptLevel::PlusHwcrypt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OptLevel::Sw1 => "SW1",
            OptLevel::Sw4 => "SW4",
            OptLevel::Sw4Simd => "SW4_SIMD",
            OptLevel::Hwce16 => "HWCE16",
            OptLevel::Hwce8 => "HWCE8",
            OptLevel::Hwce4 => "HWCE4",
            OptLevel::PlusHwcrypt => "PLUS_HWCRYPT",
        }
    }

    pub fn config(self) -> LevelConfig {
        let (conv, cores, hw_crypto) = match self {
            OptLevel::Sw1 => (ConvImpl::Software, Cores::Core1, false),
            OptLevel::Sw4 => (ConvImpl::Software, Cores::Core4, false),
            OptLevel::Sw4Simd => (ConvImpl::Software, Cores::Core4Simd, false),
            OptLevel::Hwce16 => (ConvImpl::Hwce(Precision::Bits16), Cores::Core4Simd, false),
            OptLevel::Hwce8 => (ConvImpl::Hwce(Precision::Bits8), Cores::Core4Simd, false),
            OptLevel::Hwce4 => (ConvImpl::Hwce(Precision::Bits4), Cores::Core4Simd, false),
            OptLevel::PlusHwcrypt => (ConvImpl::Hwce(Precision::Bits4), Cores::Core4Simd, true),
        };
        let weight_precision = match conv {
            ConvImpl::Software => Precision::Bits16,
            ConvImpl::Hwce(p) => p,
        };
        LevelConfig {
            conv,
            cores,
            hw_crypto,
            weight_precision,
        }
    }
}

impl LevelConfig {
    /// AES-XTS over `bytes`, on the engine or in software.
    pub fn xts(&self, bytes: u64) -> PhaseKind {
        if self.hw_crypto {
            PhaseKind::Hwcrypt {
                op: CryptoKind::Xts,
                bytes,
            }
        } else {
            self.sw(Kernel::AesXts, bytes as f64)
        }
    }

    pub fn sw(&self, kernel: Kernel, units: f64) -> PhaseKind {
        PhaseKind::Sw {
            kernel,
            units,
            cores: self.cores,
        }
    }

    /// Convolution producing `out_px` pixels on each of `out_c` maps from
    /// `in_c` input maps. The engine runs one job per input map and group of
    /// output maps, at unit stride; strided layers subsample afterwards.
    pub fn conv(&self, fs: FilterSize, out_px: f64, stride: usize, in_c: usize, out_c: usize) -> PhaseKind {
        match self.conv {
            ConvImpl::Software => {
                let kernel = match fs {
                    FilterSize::Three => Kernel::Conv3x3,
                    FilterSize::Five => Kernel::Conv5x5,
                };
                self.sw(kernel, out_px * (in_c * out_c) as f64)
            }
            ConvImpl::Hwce(p) => PhaseKind::Hwce {
                pixels: (out_px * (stride * stride) as f64).round() as u64,
                fs,
                precision: p,
                jobs: (in_c * out_c.div_ceil(p.filters())) as u64,
            },
        }
    }
}

impl std::fmt::Display for OptLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OptLevel {
    type Err = WorkloadError;
    fn from_str(s: &str) -> Result<Self, WorkloadError> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        OptLevel::ALL
            .into_iter()
            .find(|l| l.name() == up)
            .ok_or_else(|| WorkloadError::UnknownLevel(s.to_string()))
    }
}
