use super::datapath::{normalize_saturate, recombine, window_sums, ACC_BITS};
use super::linebuffer::LineBuffer;
use super::weights::interleave_weights;
use super::{ConvError, FeatureMap, HwceJob, QFormat};

/// Normalization shift `q_x + q_w - q_out`.
pub fn q_shift(q_x: QFormat, q_w: QFormat, q_out: QFormat) -> Result<u32, ConvError> {
    let s = i32::from(q_x.bits()) + i32::from(q_w.bits()) - i32::from(q_out.bits());
    if s < 0 {
        return Err(ConvError::NegativeShift {
            q_x: q_x.bits(),
            q_w: q_w.bits(),
            q_out: q_out.bits(),
        });
    }
    Ok(s as u32)
}

struct Prepared {
    fs: usize,
    out_w: usize,
    out_h: usize,
    shift: u32,
    maps: usize,
}

fn prepare(job: &HwceJob) -> Result<Prepared, ConvError> {
    let fs = job.weights.filter_size().side();
    let (w, h) = (job.input.width(), job.input.height());
    if w < fs || h < fs {
        return Err(ConvError::ImageSmallerThanFilter {
            width: w,
            height: h,
            fs,
        });
    }
    let (out_w, out_h) = (w - fs + 1, h - fs + 1);
    let maps = job.weights.precision().filters();
    if let Some(y_in) = &job.y_in {
        if y_in.len() != maps {
            return Err(ConvError::DimensionMismatch(format!(
                "{} y_in maps for {} outputs",
                y_in.len(),
                maps
            )));
        }
        for m in y_in {
            if m.width() != out_w || m.height() != out_h {
                return Err(ConvError::DimensionMismatch(format!(
                    "y_in is {}x{}, output is {}x{}",
                    m.width(),
                    m.height(),
                    out_w,
                    out_h
                )));
            }
            if m.q() != job.q_out {
                return Err(ConvError::QMismatch {
                    expected: job.q_out.bits(),
                    got: m.q().bits(),
                });
            }
        }
    }
    let shift = q_shift(job.input.q(), job.weights.q_w(), job.q_out)?;
    Ok(Prepared {
        fs,
        out_w,
        out_h,
        shift,
        maps,
    })
}

fn finish(acc: i64, shift: u32) -> i16 {
    let limit = 1i64 << (ACC_BITS - 1);
    assert!(
        (-limit..limit).contains(&acc),
        "accumulator {acc} exceeds {ACC_BITS} bits"
    );
    normalize_saturate(acc, shift).0
}

/// Run one job through the line buffer and the sliced datapath. Returns one
/// map per filter, in the output Q format.
pub fn hwce_convolve(job: &HwceJob) -> Result<Vec<FeatureMap>, ConvError> {
    let p = prepare(job)?;
    let buf = interleave_weights(&job.weights);
    let precision = job.weights.precision();
    let mut outs = vec![Vec::with_capacity(p.out_w * p.out_h); p.maps];
    let mut lb = LineBuffer::new(p.fs, job.input.width());
    for &px in job.input.pixels() {
        let Some((window, x, y)) = lb.push(px) else {
            continue;
        };
        let sums = recombine(&window_sums(&window, &buf.0, precision), precision);
        for (m, sum) in sums.into_iter().enumerate() {
            let base = job
                .y_in
                .as_ref()
                .map_or(0, |ys| i64::from(ys[m].get(x, y).0));
            outs[m].push(finish((base << p.shift) + sum, p.shift));
        }
    }
    outs.into_iter()
        .map(|px| FeatureMap::new(p.out_w, p.out_h, job.q_out, px))
        .collect()
}

/// Scalar reference: direct indexing and full-width products, same rounding.
pub fn reference_convolve(job: &HwceJob) -> Result<Vec<FeatureMap>, ConvError> {
    let p = prepare(job)?;
    let mut outs = Vec::with_capacity(p.maps);
    for (m, taps) in job.weights.filters().iter().enumerate() {
        let mut px = Vec::with_capacity(p.out_w * p.out_h);
        for y in 0..p.out_h {
            for x in 0..p.out_w {
                let mut acc: i64 = job
                    .y_in
                    .as_ref()
                    .map_or(0, |ys| i64::from(ys[m].get(x, y).0) << p.shift);
                for dy in 0..p.fs {
                    for dx in 0..p.fs {
                        acc += i64::from(taps[dy * p.fs + dx])
                            * i64::from(job.input.get(x + dx, y + dy).0);
                    }
                }
                px.push(finish(acc, p.shift));
            }
        }
        outs.push(FeatureMap::new(p.out_w, p.out_h, job.q_out, px)?);
    }
    Ok(outs)
}
