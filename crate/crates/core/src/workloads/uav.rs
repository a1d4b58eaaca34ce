//! Secure scene classification with a ResNet-20 on a 224x224 frame.
//!
//! Weights live encrypted in flash, partial results encrypted in FRAM. Each
//! layer is tiled for the TCDM; tiles sharing an output position are staged
//! through L2 in batches. Per batch: FRAM read, XTS decrypt, then per tile
//! DMA in, convolution, activation, DMA out, and finally XTS encrypt and
//! FRAM write.

use serde::{Deserialize, Serialize};

use super::{BatteryPlan, LevelConfig, WorkloadError};
use crate::conv::{FilterSize, Precision};
use crate::perf::{Kernel, OperatingMode};
use crate::sim::{
    tile_plan, Direction, ExtMemKind, LayerGeometry, ModePolicy, Phase, PhaseGraph, PhaseId, PhaseKind, PlatformConfig,
    SimError, Tile,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavSpec {
    pub input_side: usize,
    pub input_channels: usize,
    pub stem_channels: usize,
    pub stage_channels: Vec<usize>,
    pub convs_per_stage: usize,
    pub classes: usize,
    /// Multiply-accumulates per inference; the reconstructed layer schedule
    /// is scaled uniformly to match.
    pub target_macs: f64,
    /// Weight bytes fetched from flash per inference at 16-bit precision.
    pub weight_traffic_bytes_16bit: f64,
    pub battery: BatteryPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavLayer {
    pub name: String,
    pub geom: LayerGeometry,
    /// adds the block shortcut after this convolution
    pub residual: bool,
}

impl UavLayer {
    pub fn out_bytes(&self) -> u64 {
        (self.geom.out_w() * self.geom.out_h() * self.geom.out_c * 2) as u64
    }
}

/// Stem convolution, then stages of 3x3 convolutions; every stage after the
/// first halves the resolution in its first layer. A shortcut is added after
/// every second convolution of a stage.
pub fn resnet20_layers(spec: &UavSpec) -> Vec<UavLayer> {
    let conv = |side: usize, in_c: usize, out_c: usize, stride: usize| LayerGeometry {
        in_w: side,
        in_h: side,
        in_c,
        out_c,
        fs: FilterSize::Three,
        stride,
        same_padding: true,
    };
    let mut layers = vec![UavLayer {
        name: "conv0".into(),
        geom: conv(spec.input_side, spec.input_channels, spec.stem_channels, 1),
        residual: false,
    }];
    let mut side = spec.input_side;
    let mut ch = spec.stem_channels;
    for (s, &out_c) in spec.stage_channels.iter().enumerate() {
        for k in 0..spec.convs_per_stage {
            let stride = if s > 0 && k == 0 { 2 } else { 1 };
            let g = conv(side, ch, out_c, stride);
            side = g.out_w();
            ch = out_c;
            layers.push(UavLayer {
                name: format!("s{}c{}", s + 1, k + 1),
                geom: g,
                residual: k % 2 == 1,
            });
        }
    }
    layers
}

impl UavSpec {
    pub fn raw_macs(&self) -> u64 {
        resnet20_layers(self).iter().map(|l| l.geom.macs()).sum::<u64>() + self.dense_macs()
    }

    pub fn dense_macs(&self) -> u64 {
        (self.stage_channels.last().copied().unwrap_or(self.stem_channels) * self.classes) as u64
    }

    pub fn scale(&self) -> f64 {
        self.target_macs / self.raw_macs() as f64
    }

    pub fn weight_traffic(&self, p: Precision) -> f64 {
        self.weight_traffic_bytes_16bit * f64::from(p.bits()) / 16.0
    }

    /// Largest encrypted activation held in FRAM at once.
    pub fn partial_peak_bytes(&self) -> f64 {
        let peak = resnet20_layers(self).iter().map(UavLayer::out_bytes).max().unwrap_or(0);
        peak as f64 * self.scale()
    }
}

pub(super) fn policy() -> ModePolicy {
    ModePolicy::Dynamic(vec![OperatingMode::CryCnnSw, OperatingMode::KecCnnSw])
}

/// Output positions in row-major order, each with its output-channel blocks.
fn positions(tiles: &[Tile]) -> Vec<Vec<Tile>> {
    let mut sorted = tiles.to_vec();
    sorted.sort_by_key(|t| (t.y0, t.x0, t.oc0));
    let mut out: Vec<Vec<Tile>> = Vec::new();
    for t in sorted {
        match out.last_mut() {
            Some(group) if group[0].x0 == t.x0 && group[0].y0 == t.y0 => group.push(t),
            _ => out.push(vec![t]),
        }
    }
    out
}

pub(super) fn build(spec: &UavSpec, cfg: &LevelConfig, platform: &PlatformConfig) -> Result<PhaseGraph, WorkloadError> {
    let layers = resnet20_layers(spec);
    let s = spec.scale();
    let sc = |x: u64| (x as f64 * s).round() as u64;
    let p = cfg.weight_precision;
    let raw_w16: u64 = layers.iter().map(|l| l.geom.weight_bytes(Precision::Bits16)).sum();
    let wscale = spec.weight_traffic_bytes_16bit / raw_w16 as f64;

    let mut g = PhaseGraph::new();
    let mut prev_writes: Vec<PhaseId> = Vec::new();
    let mut prev_weights: Option<PhaseId> = None;

    for (li, layer) in layers.iter().enumerate() {
        let geom = &layer.geom;
        let n = &layer.name;
        let plan = tile_plan(geom, p, platform.tcdm_bytes)?;
        let wbytes = geom.weight_bytes(p);
        let wtraffic = (wbytes as f64 * wscale).round() as u64;
        let flash = g.push(
            Phase::new(
                format!("{n}/weights.flash"),
                PhaseKind::ExtMem {
                    mem: ExtMemKind::Flash,
                    bytes: wtraffic,
                    dir: Direction::Read,
                },
            )
            .after(prev_weights),
        );
        let wdec = g.push(Phase::new(format!("{n}/weights.xts"), cfg.xts(wtraffic)).after([flash]));
        prev_weights = Some(wdec);

        // stage positions through L2: weights stay resident, two batch
        // buffers alternate
        let budget = platform.l2_bytes.saturating_sub(wbytes) / 2;
        let in_bytes = |t: &Tile| (geom.input_span(t.w) * geom.input_span(t.h) * geom.in_c * 2) as u64;
        let out_bytes = |t: &Tile| (t.w * t.h * geom.out_c * 2) as u64;
        let stage_bytes = |t: &Tile| {
            let shortcut = if layer.residual { out_bytes(t) } else { 0 };
            in_bytes(t) + out_bytes(t) + shortcut
        };
        let mut batches: Vec<Vec<Vec<Tile>>> = Vec::new();
        let mut used = 0u64;
        for pos in positions(&plan.tiles) {
            let need = stage_bytes(&pos[0]);
            if need > budget {
                return Err(SimError::CapacityExceeded {
                    phase: format!("{n}/stage"),
                    memory: "L2",
                    needed: wbytes + 2 * need,
                    available: platform.l2_bytes,
                }
                .into());
            }
            match batches.last_mut() {
                Some(b) if used + need <= budget => {
                    b.push(pos);
                    used += need;
                }
                _ => {
                    batches.push(vec![pos]);
                    used = need;
                }
            }
        }

        // input region of a batch: consecutive positions of one tile row
        // share their horizontal halo
        let batch_in = |batch: &[Vec<Tile>]| -> u64 {
            let mut total = 0;
            let mut k = 0;
            while k < batch.len() {
                let row = batch[k][0];
                let mut w = 0;
                while k < batch.len() && batch[k][0].y0 == row.y0 {
                    w += batch[k][0].w;
                    k += 1;
                }
                total += (geom.input_span(w) * geom.input_span(row.h) * geom.in_c * 2) as u64;
            }
            total
        };
        let mut writes: Vec<PhaseId> = Vec::new();
        let mut dma_outs: Vec<PhaseId> = Vec::new();
        let mut last_read: Option<PhaseId> = None;
        for (bi, batch) in batches.iter().enumerate() {
            let b_in = batch_in(batch);
            let b_out: u64 = batch.iter().map(|pos| out_bytes(&pos[0])).sum();
            let b_short = if layer.residual { b_out } else { 0 };
            let l2 = wbytes + 2 * batch.iter().map(|pos| stage_bytes(&pos[0])).sum::<u64>();
            let staged = if li == 0 {
                // the frame arrives in L2 from the camera interface
                wdec
            } else {
                let mut deps: Vec<PhaseId> = Vec::new();
                match last_read {
                    None => deps.extend(&prev_writes),
                    Some(r) => deps.push(r),
                }
                if bi >= 2 {
                    deps.push(writes[bi - 2]);
                }
                let read = g.push(
                    Phase::new(
                        format!("{n}/b{bi}.fram_read"),
                        PhaseKind::ExtMem {
                            mem: ExtMemKind::Fram,
                            bytes: sc(b_in + b_short),
                            dir: Direction::Read,
                        },
                    )
                    .after(deps),
                );
                last_read = Some(read);
                g.push(
                    Phase::new(format!("{n}/b{bi}.xts_dec"), cfg.xts(sc(b_in + b_short)))
                        .after([read, wdec])
                        .with_footprint(0, l2),
                )
            };
            let mut outs = Vec::new();
            for pos in batch {
                for t in pos {
                    let k = dma_outs.len();
                    let wblock = (geom.in_c * t.oc * geom.fs.taps()) as u64 * u64::from(p.bits()) / 8;
                    let mut deps = vec![staged];
                    if k >= 2 {
                        deps.push(dma_outs[k - 2]);
                    }
                    let tag = format!("{n}/t{}_{}_{}", t.x0, t.y0, t.oc0);
                    let din = g.push(
                        Phase::new(format!("{tag}.dma_in"), PhaseKind::Dma { bytes: sc(in_bytes(t) + wblock) })
                            .after(deps),
                    );
                    let px = t.pixels() as f64 * s;
                    let conv = g.push(
                        Phase::new(format!("{tag}.conv"), cfg.conv(geom.fs, px, geom.stride, geom.in_c, t.oc))
                            .after([din])
                            .with_footprint(geom.working_set(t.w, t.h, t.oc, p), 0),
                    );
                    let passes = if layer.residual { 2.0 } else { 1.0 };
                    let act = g.push(
                        Phase::new(format!("{tag}.act"), cfg.sw(Kernel::Act, px * t.oc as f64 * passes)).after([conv]),
                    );
                    let dout = g.push(
                        Phase::new(format!("{tag}.dma_out"), PhaseKind::Dma {
                            bytes: sc((t.pixels() * t.oc * 2) as u64),
                        })
                        .after([act]),
                    );
                    dma_outs.push(dout);
                    outs.push(dout);
                }
            }
            let enc = g.push(Phase::new(format!("{n}/b{bi}.xts_enc"), cfg.xts(sc(b_out))).after(outs));
            writes.push(g.push(
                Phase::new(
                    format!("{n}/b{bi}.fram_write"),
                    PhaseKind::ExtMem {
                        mem: ExtMemKind::Fram,
                        bytes: sc(b_out),
                        dir: Direction::Write,
                    },
                )
                .after([enc]),
            ));
        }
        prev_writes = writes;
    }

    // global average pooling and the classifier
    let last = layers.last().expect("network has layers");
    let feat = sc(last.out_bytes());
    let read = g.push(
        Phase::new(
            "head.fram_read",
            PhaseKind::ExtMem {
                mem: ExtMemKind::Fram,
                bytes: feat,
                dir: Direction::Read,
            },
        )
        .after(prev_writes),
    );
    let dec = g.push(Phase::new("head.xts_dec", cfg.xts(feat)).after([read]));
    let din = g.push(Phase::new("head.dma_in", PhaseKind::Dma { bytes: feat }).after([dec]));
    let pool = g.push(Phase::new("head.pool", cfg.sw(Kernel::Act, feat as f64 / 2.0)).after([din]));
    g.push(Phase::new("head.dense", cfg.sw(Kernel::Dense, spec.dense_macs() as f64)).after([pool]));
    Ok(g)
}
