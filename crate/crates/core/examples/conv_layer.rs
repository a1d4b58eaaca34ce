//! A 4-bit convolution layer on the engine model: four output maps from
//! one pass over the input, checked against the direct loop.
//!
//!     cargo run --example conv_layer

use nodesim::conv::{hwce_convolve, reference_convolve, FeatureMap, FilterSize, HwceJob, Precision, QFormat, WeightSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (w, h) = (32, 24);
    // Q8 activations, Q2 weights, Q8 outputs
    let input = FeatureMap::new(w, h, QFormat::new(8)?, (0..w * h).map(|_| rng.gen_range(-512..512)).collect())?;
    let filters = (0..4).map(|_| (0..9).map(|_| rng.gen_range(-8..8)).collect()).collect();
    let weights = WeightSet::new(FilterSize::Three, Precision::Bits4, filters, QFormat::new(2)?)?;
    let job = HwceJob {
        input,
        y_in: None,
        weights,
        q_out: QFormat::new(8)?,
    };
    let out = hwce_convolve(&job)?;
    assert_eq!(out, reference_convolve(&job)?);
    for (m, map) in out.iter().enumerate() {
        let px = map.pixels();
        let (lo, hi) = (px.iter().min().unwrap(), px.iter().max().unwrap());
        println!("map {m}: {}x{} range [{lo}, {hi}]", map.width(), map.height());
    }
    Ok(())
}
