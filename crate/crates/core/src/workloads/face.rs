//! Two-stage cascade face detection on a 224x224 RGB frame.
//!
//! The 12-net scans every window; only the fraction of windows it flags
//! reaches the 24-net. The frame is encrypted when a face is found, which
//! the modeled iteration assumes.

use serde::{Deserialize, Serialize};

use super::{BatteryPlan, LevelConfig, WorkloadError};
use crate::conv::FilterSize;
use crate::perf::{Kernel, OperatingMode};
use crate::sim::{ModePolicy, Phase, PhaseGraph, PhaseId, PhaseKind, PlatformConfig, SimError};

/// One cascade stage: a valid convolution followed by a dense classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    pub name: String,
    pub input_side: usize,
    pub in_c: usize,
    pub fs: FilterSize,
    pub conv_out_c: usize,
    /// Widths of the dense layers, starting with the pooled feature count.
    pub dense: Vec<usize>,
}

impl NetSpec {
    pub fn conv_side(&self) -> usize {
        self.input_side + 1 - self.fs.side()
    }

    pub fn conv_macs(&self) -> u64 {
        (self.conv_side().pow(2) * self.in_c * self.conv_out_c * self.fs.taps()) as u64
    }

    pub fn dense_macs(&self) -> u64 {
        self.dense.windows(2).map(|w| (w[0] * w[1]) as u64).sum()
    }

    fn input_bytes(&self) -> u64 {
        (self.input_side.pow(2) * self.in_c * 2) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub frame_side: usize,
    pub frame_channels: usize,
    pub bytes_per_pixel_channel: usize,
    /// windows the first stage classifies per frame
    pub windows: usize,
    /// fraction of windows forwarded to the second stage
    pub trigger_fraction: f64,
    pub stage1: NetSpec,
    pub stage2: NetSpec,
    /// L2 to TCDM chunk size of the frame encryption
    pub crypt_chunk_bytes: u64,
    pub battery: BatteryPlan,
}

impl FaceSpec {
    pub fn stage2_windows(&self) -> usize {
        (self.windows as f64 * self.trigger_fraction).round() as usize
    }

    pub fn frame_bytes(&self) -> u64 {
        (self.frame_side.pow(2) * self.frame_channels * self.bytes_per_pixel_channel) as u64
    }
}

pub(super) fn policy() -> ModePolicy {
    ModePolicy::Fixed(OperatingMode::CryCnnSw)
}

/// DMA in, convolution, activation and classifier of every window, with
/// two windows in flight.
fn windows(g: &mut PhaseGraph, net: &NetSpec, count: usize, cfg: &LevelConfig, platform: &PlatformConfig, after: &[PhaseId]) -> Result<Vec<PhaseId>, SimError> {
    let side = net.conv_side();
    let out_px = (side * side) as f64;
    let ws = |ob: usize| {
        2 * net.input_bytes()
            + 2 * (side * side * ob * 2) as u64
            + (net.in_c * ob * net.fs.taps()) as u64 * u64::from(cfg.weight_precision.bits()) / 8
    };
    // split the output maps until a block fits next to its double buffers
    let mut ob = net.conv_out_c;
    while ws(ob) > platform.tcdm_bytes {
        if ob == 1 {
            return Err(SimError::CapacityExceeded {
                phase: format!("{}/conv", net.name),
                memory: "TCDM",
                needed: ws(1),
                available: platform.tcdm_bytes,
            });
        }
        ob = ob.div_ceil(2);
    }
    let mut done: Vec<PhaseId> = Vec::new();
    for w in 0..count {
        let tag = format!("{}/w{w}", net.name);
        let mut deps = after.to_vec();
        if w >= 2 {
            deps.push(done[w - 2]);
        }
        let din = g.push(Phase::new(format!("{tag}.dma_in"), PhaseKind::Dma { bytes: net.input_bytes() }).after(deps));
        let mut conv = din;
        for oc0 in (0..net.conv_out_c).step_by(ob) {
            let n = ob.min(net.conv_out_c - oc0);
            conv = g.push(
                Phase::new(format!("{tag}.conv{oc0}"), cfg.conv(net.fs, out_px, 1, net.in_c, n))
                    .after([conv])
                    .with_footprint(ws(n), 0),
            );
        }
        let act = g.push(Phase::new(format!("{tag}.act"), cfg.sw(Kernel::Act, out_px * net.conv_out_c as f64)).after([conv]));
        done.push(g.push(Phase::new(format!("{tag}.dense"), cfg.sw(Kernel::Dense, net.dense_macs() as f64)).after([act])));
    }
    Ok(done)
}

pub(super) fn build(spec: &FaceSpec, cfg: &LevelConfig, platform: &PlatformConfig) -> Result<PhaseGraph, WorkloadError> {
    if !(0.0..=1.0).contains(&spec.trigger_fraction) {
        return Err(WorkloadError::InvalidSpec(format!("trigger fraction {} outside [0, 1]", spec.trigger_fraction)));
    }
    if spec.crypt_chunk_bytes == 0 || !spec.crypt_chunk_bytes.is_multiple_of(16) {
        return Err(WorkloadError::InvalidSpec("crypt chunk must be a positive multiple of 16 bytes".into()));
    }
    let mut g = PhaseGraph::new();
    let s1 = windows(&mut g, &spec.stage1, spec.windows, cfg, platform, &[])?;
    let s2 = windows(&mut g, &spec.stage2, spec.stage2_windows(), cfg, platform, &s1)?;
    let detected = s2.last().or(s1.last()).copied();

    let total = spec.frame_bytes();
    let mut outs: Vec<PhaseId> = Vec::new();
    let mut off = 0u64;
    while off < total {
        let k = outs.len();
        let n = spec.crypt_chunk_bytes.min(total - off).next_multiple_of(16);
        let mut deps: Vec<PhaseId> = detected.into_iter().collect();
        if k >= 2 {
            deps.push(outs[k - 2]);
        }
        let din = g.push(Phase::new(format!("frame/c{k}.dma_in"), PhaseKind::Dma { bytes: n }).after(deps));
        let enc = g.push(Phase::new(format!("frame/c{k}.xts"), cfg.xts(n)).after([din]));
        outs.push(g.push(Phase::new(format!("frame/c{k}.dma_out"), PhaseKind::Dma { bytes: n }).after([enc])));
        off += n;
    }
    Ok(g)
}
