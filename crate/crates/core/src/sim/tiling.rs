use serde::{Deserialize, Serialize};

use super::SimError;
use crate::conv::{FilterSize, Precision};

/// One convolutional layer. With `same_padding` the input is assumed
/// zero-padded in L2 so the output is `in / stride`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerGeometry {
    pub in_w: usize,
    pub in_h: usize,
    pub in_c: usize,
    pub out_c: usize,
    pub fs: FilterSize,
    pub stride: usize,
    pub same_padding: bool,
}

impl LayerGeometry {
    pub fn out_w(&self) -> usize {
        if self.same_padding {
            self.in_w / self.stride
        } else {
            (self.in_w - self.fs.side()) / self.stride + 1
        }
    }

    pub fn out_h(&self) -> usize {
        if self.same_padding {
            self.in_h / self.stride
        } else {
            (self.in_h - self.fs.side()) / self.stride + 1
        }
    }

    pub fn macs(&self) -> u64 {
        (self.out_w() * self.out_h() * self.in_c * self.out_c * self.fs.taps()) as u64
    }

    pub fn weight_bytes(&self, p: Precision) -> u64 {
        (self.in_c * self.out_c * self.fs.taps()) as u64 * u64::from(p.bits()) / 8
    }

    /// Input window needed for an output span of `n` pixels.
    pub fn input_span(&self, n: usize) -> usize {
        (n - 1) * self.stride + self.fs.side()
    }

    /// TCDM bytes for a `w x h` output tile over `oc` output channels: double
    /// buffered 16-bit input and output plus the tile's weights.
    pub fn working_set(&self, w: usize, h: usize, oc: usize, p: Precision) -> u64 {
        let input = (self.input_span(w) * self.input_span(h) * self.in_c * 2) as u64;
        let output = (w * h * oc * 2) as u64;
        let weights = (self.in_c * oc * self.fs.taps()) as u64 * u64::from(p.bits()) / 8;
        2 * input + 2 * output + weights
    }
}

/// Output region `[x0, x0+w) x [y0, y0+h)` over channels `[oc0, oc0+oc)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tile {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
    pub oc0: usize,
    pub oc: usize,
}

impl Tile {
    pub fn pixels(&self) -> usize {
        self.w * self.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilePlan {
    pub side: usize,
    pub oc_block: usize,
    pub tiles: Vec<Tile>,
}

/// Split a layer's output into tiles whose working set fits `tcdm_budget`.
///
/// Candidates are square tiles over a power-of-two fraction of the output
/// channels; the one covering the most output values wins, ties going to
/// the larger side. Edge tiles are clipped.
pub fn tile_plan(geom: &LayerGeometry, precision: Precision, tcdm_budget: u64) -> Result<TilePlan, SimError> {
    let (ow, oh) = (geom.out_w(), geom.out_h());
    if ow == 0 || oh == 0 || geom.out_c == 0 || geom.in_c == 0 {
        return Err(SimError::InvalidScenario("layer with empty output".into()));
    }
    let max_side = ow.max(oh);
    let mut best: Option<(usize, usize)> = None;
    let mut ob = geom.out_c;
    loop {
        // working set grows with the side, so search from the top
        let fit = (1..=max_side)
            .rev()
            .find(|&t| geom.working_set(t.min(ow), t.min(oh), ob, precision) <= tcdm_budget);
        if let Some(t) = fit {
            let score = |t: usize, ob: usize| t.min(ow) * t.min(oh) * ob;
            let better = match best {
                None => true,
                Some((bt, bob)) => (score(t, ob), t) > (score(bt, bob), bt),
            };
            if better {
                best = Some((t, ob));
            }
        }
        if ob == 1 {
            break;
        }
        ob = ob.div_ceil(2);
    }
    let Some((side, oc_block)) = best else {
        return Err(SimError::TileInfeasible {
            fs: geom.fs.side(),
            budget: tcdm_budget,
            needed: geom.working_set(1, 1, 1, precision),
        });
    };
    let mut tiles = Vec::new();
    for oc0 in (0..geom.out_c).step_by(oc_block) {
        for y0 in (0..oh).step_by(side) {
            for x0 in (0..ow).step_by(side) {
                tiles.push(Tile {
                    x0,
                    y0,
                    w: side.min(ow - x0),
                    h: side.min(oh - y0),
                    oc0,
                    oc: oc_block.min(geom.out_c - oc0),
                });
            }
        }
    }
    Ok(TilePlan { side, oc_block, tiles })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(side: usize, in_c: usize, out_c: usize) -> LayerGeometry {
        LayerGeometry {
            in_w: side,
            in_h: side,
            in_c,
            out_c,
            fs: FilterSize::Three,
            stride: 1,
            same_padding: true,
        }
    }

    #[test]
    fn small_layer_is_one_tile() {
        let plan = tile_plan(&layer(32, 4, 4), Precision::Bits16, 65536).unwrap();
        assert_eq!(plan.tiles.len(), 1);
        assert_eq!(plan.tiles[0].pixels(), 32 * 32);
    }

    #[test]
    fn tiny_budget_is_infeasible() {
        let g = layer(32, 1, 1);
        let need = g.working_set(1, 1, 1, Precision::Bits16);
        assert!(matches!(
            tile_plan(&g, Precision::Bits16, need - 1),
            Err(SimError::TileInfeasible { .. })
        ));
        assert!(tile_plan(&g, Precision::Bits16, need).is_ok());
    }

    #[test]
    fn stride_halves_output() {
        let mut g = layer(224, 16, 32);
        g.stride = 2;
        assert_eq!(g.out_w(), 112);
        assert_eq!(g.input_span(10), 21);
    }
}
