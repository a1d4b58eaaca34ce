use serde::{Deserialize, Serialize};

use super::ExtMemKind;
use crate::conv::{FilterSize, Precision};
use crate::perf::{Cores, CryptoKind, Kernel, OperatingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseId(pub usize);

/// Energy breakdown buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "CONV")]
    Conv,
    #[serde(rename = "AES/KEC")]
    Crypto,
    #[serde(rename = "DENSE")]
    Dense,
    #[serde(rename = "DMA_OTHER")]
    DmaOther,
    #[serde(rename = "FRAM")]
    Fram,
    #[serde(rename = "FLASH")]
    Flash,
    #[serde(rename = "SPI_IO")]
    SpiIo,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Conv,
        Category::Crypto,
        Category::Dense,
        Category::DmaOther,
        Category::Fram,
        Category::Flash,
        Category::SpiIo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Conv => "CONV",
            Category::Crypto => "AES/KEC",
            Category::Dense => "DENSE",
            Category::DmaOther => "DMA_OTHER",
            Category::Fram => "FRAM",
            Category::Flash => "FLASH",
            Category::SpiIo => "SPI_IO",
        }
    }

    pub fn of_mem(kind: ExtMemKind) -> Self {
        match kind {
            ExtMemKind::Flash => Category::Flash,
            ExtMemKind::Fram => Category::Fram,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Read,
    Write,
}

/// Power state while the cluster waits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SleepState {
    DeepSleep,
    IdleFllOn,
    IdleFllOff,
}

fn one() -> u64 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Hwcrypt {
        op: CryptoKind,
        bytes: u64,
    },
    /// `jobs` engine jobs, each producing `pixels` output pixels per map.
    Hwce {
        pixels: u64,
        fs: FilterSize,
        precision: Precision,
        #[serde(default = "one")]
        jobs: u64,
    },
    Sw {
        kernel: Kernel,
        units: f64,
        cores: Cores,
    },
    Dma {
        bytes: u64,
    },
    ExtMem {
        mem: ExtMemKind,
        bytes: u64,
        dir: Direction,
    },
    ModeSwitch {
        to: OperatingMode,
    },
    Sleep {
        seconds: f64,
        state: SleepState,
    },
}

impl PhaseKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PhaseKind::Hwcrypt { .. } => "hwcrypt",
            PhaseKind::Hwce { .. } => "hwce",
            PhaseKind::Sw { .. } => "sw",
            PhaseKind::Dma { .. } => "dma",
            PhaseKind::ExtMem { .. } => "ext_mem",
            PhaseKind::ModeSwitch { .. } => "mode_switch",
            PhaseKind::Sleep { .. } => "sleep",
        }
    }

    pub fn default_category(&self) -> Category {
        match self {
            PhaseKind::Hwcrypt { .. } => Category::Crypto,
            PhaseKind::Hwce { .. } => Category::Conv,
            PhaseKind::Sw { kernel, .. } => match kernel {
                Kernel::Conv5x5 | Kernel::Conv3x3 => Category::Conv,
                Kernel::AesEcb | Kernel::AesXts => Category::Crypto,
                Kernel::Dense | Kernel::Pca | Kernel::Dwt | Kernel::Svm => Category::Dense,
                Kernel::Act => Category::DmaOther,
            },
            PhaseKind::ExtMem { mem, .. } => Category::of_mem(*mem),
            PhaseKind::Dma { .. } | PhaseKind::ModeSwitch { .. } | PhaseKind::Sleep { .. } => Category::DmaOther,
        }
    }

    /// Modes able to run the phase. `None` means the phase does not use the
    /// cluster at all.
    pub fn capable_modes(&self) -> Option<&'static [OperatingMode]> {
        use OperatingMode::*;
        match self {
            PhaseKind::Hwcrypt { op, .. } if op.is_aes() => Some(&[CryCnnSw]),
            PhaseKind::Hwcrypt { .. } | PhaseKind::Hwce { .. } => Some(&[CryCnnSw, KecCnnSw]),
            PhaseKind::Sw { .. } | PhaseKind::Dma { .. } => Some(&[CryCnnSw, KecCnnSw, Sw]),
            PhaseKind::ExtMem { .. } | PhaseKind::ModeSwitch { .. } | PhaseKind::Sleep { .. } => None,
        }
    }

    pub fn is_accelerator(&self) -> bool {
        matches!(self, PhaseKind::Hwcrypt { .. } | PhaseKind::Hwce { .. })
    }
}

/// Declared memory residency, checked against the platform at schedule time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Footprint {
    #[serde(default)]
    pub tcdm: u64,
    #[serde(default)]
    pub l2: u64,
}

impl Footprint {
    pub fn is_empty(&self) -> bool {
        self.tcdm == 0 && self.l2 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub name: String,
    pub kind: PhaseKind,
    #[serde(default)]
    pub deps: Vec<PhaseId>,
    /// When false the phase is a full barrier: it waits for everything
    /// scheduled before it and everything after waits for it.
    #[serde(default = "yes")]
    pub overlappable: bool,
    /// Pin to one operating mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<OperatingMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    #[serde(default, skip_serializing_if = "Footprint::is_empty")]
    pub footprint: Footprint,
}

impl Phase {
    pub fn new(name: impl Into<String>, kind: PhaseKind) -> Self {
        Phase {
            name: name.into(),
            kind,
            deps: Vec::new(),
            overlappable: true,
            mode: None,
            category: None,
            footprint: Footprint::default(),
        }
    }

    pub fn after(mut self, deps: impl IntoIterator<Item = PhaseId>) -> Self {
        self.deps.extend(deps);
        self
    }

    pub fn barrier(mut self) -> Self {
        self.overlappable = false;
        self
    }

    pub fn pinned(mut self, mode: OperatingMode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn in_category(mut self, c: Category) -> Self {
        self.category = Some(c);
        self
    }

    pub fn with_footprint(mut self, tcdm: u64, l2: u64) -> Self {
        self.footprint = Footprint { tcdm, l2 };
        self
    }

    pub fn category(&self) -> Category {
        self.category.unwrap_or_else(|| self.kind.default_category())
    }
}

/// Phases in insertion order; dependencies refer to earlier or later
/// entries by index.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseGraph {
    pub phases: Vec<Phase>,
}

impl PhaseGraph {
    pub fn new() -> Self {
        PhaseGraph::default()
    }

    pub fn push(&mut self, phase: Phase) -> PhaseId {
        self.phases.push(phase);
        PhaseId(self.phases.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Phase> {
        self.phases.iter()
    }

    /// Append `other`, shifting its indices; every root of `other` is made
    /// to depend on `after`.
    pub fn append(&mut self, other: &PhaseGraph, after: &[PhaseId]) -> Vec<PhaseId> {
        let base = self.phases.len();
        let mut ids = Vec::with_capacity(other.len());
        for p in &other.phases {
            let mut q = p.clone();
            q.deps = q.deps.iter().map(|d| PhaseId(d.0 + base)).collect();
            if p.deps.is_empty() {
                q.deps.extend_from_slice(after);
            }
            ids.push(self.push(q));
        }
        ids
    }

    /// Phases nothing else depends on.
    pub fn sinks(&self) -> Vec<PhaseId> {
        let mut used = vec![false; self.phases.len()];
        for p in &self.phases {
            for d in &p.deps {
                if let Some(u) = used.get_mut(d.0) {
                    *u = true;
                }
            }
        }
        (0..self.phases.len()).filter(|&i| !used[i]).map(PhaseId).collect()
    }

    pub fn set_overlappable(&mut self, on: bool) {
        for p in &mut self.phases {
            p.overlappable = on;
        }
    }
}
