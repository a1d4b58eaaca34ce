//! Seizure detection on a 23-channel EEG window: PCA, discrete wavelet
//! transform and an SVM, all in software. The principal components are
//! encrypted before leaving the node.

use serde::{Deserialize, Serialize};

use super::{BatteryPlan, LevelConfig, WorkloadError};
use crate::perf::{Kernel, OperatingMode};
use crate::sim::{ModePolicy, Phase, PhaseGraph, PhaseKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EegSpec {
    pub channels: usize,
    pub window_samples: usize,
    pub bytes_per_sample: usize,
    pub components: usize,
    /// Work of each kernel in units of its cost-table entry.
    pub pca_units: f64,
    pub dwt_units: f64,
    pub svm_units: f64,
    pub battery: BatteryPlan,
}

impl EegSpec {
    pub fn window_bytes(&self) -> u64 {
        (self.channels * self.window_samples * self.bytes_per_sample) as u64
    }

    pub fn component_bytes(&self) -> u64 {
        (self.components * self.window_samples * self.bytes_per_sample) as u64
    }
}

pub(super) fn policy() -> ModePolicy {
    ModePolicy::Fixed(OperatingMode::CryCnnSw)
}

pub(super) fn build(spec: &EegSpec, cfg: &LevelConfig) -> Result<PhaseGraph, WorkloadError> {
    if !spec.component_bytes().is_multiple_of(16) {
        return Err(WorkloadError::InvalidSpec("component block must be a multiple of 16 bytes".into()));
    }
    let mut g = PhaseGraph::new();
    let din = g.push(Phase::new("window.dma_in", PhaseKind::Dma { bytes: spec.window_bytes() }));
    let pca = g.push(Phase::new("pca", cfg.sw(Kernel::Pca, spec.pca_units)).after([din]));
    g.push(Phase::new("components.xts", cfg.xts(spec.component_bytes())).after([pca]));
    let dwt = g.push(Phase::new("dwt", cfg.sw(Kernel::Dwt, spec.dwt_units)).after([pca]));
    g.push(Phase::new("svm", cfg.sw(Kernel::Svm, spec.svm_units)).after([dwt]));
    Ok(g)
}
