use std::path::Path;

use nodesim::conv::{
    deinterleave_weights, direct_windows, extract_windows, hwce_convolve, interleave_weights,
    normalize_saturate, recombine, reference_convolve, sop_slice, window_sums, FeatureMap,
    FilterSize, GoldenCase, HwceJob, Precision, QFormat, WeightSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: u32) -> QFormat {
    QFormat::new(n).unwrap()
}

fn random_map(r: &mut ChaCha8Rng, w: usize, h: usize, qf: QFormat, amp: i16) -> FeatureMap {
    let px = (0..w * h).map(|_| r.gen_range(-amp..=amp)).collect();
    FeatureMap::new(w, h, qf, px).unwrap()
}

fn random_weights(r: &mut ChaCha8Rng, fs: FilterSize, p: Precision, q_w: QFormat) -> WeightSet {
    let (lo, hi) = p.weight_range();
    let filters = (0..p.filters())
        .map(|_| (0..fs.taps()).map(|_| r.gen_range(lo..=hi) as i16).collect())
        .collect();
    WeightSet::new(fs, p, filters, q_w).unwrap()
}

#[test]
fn golden_cases_match() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden/hwce");
    let mut n = 0;
    for entry in std::fs::read_dir(&root).unwrap() {
        let dir = entry.unwrap().path();
        let case = GoldenCase::from_file(&dir.join("manifest.json")).unwrap();
        assert!(case.check(&dir).unwrap(), "golden case {} differs", case.name);
        n += 1;
    }
    assert_eq!(n, 14);
}

#[test]
fn random_jobs_match_scalar_oracle() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for fs in [FilterSize::Three, FilterSize::Five] {
        for p in Precision::ALL {
            for _ in 0..20 {
                let q_x = q(r.gen_range(0..=12));
                let q_w = q(r.gen_range(0..p.bits()));
                let q_out = q(r.gen_range(0..=(q_x.bits() + q_w.bits()).min(15)) as u32);
                let input = random_map(&mut r, 16, 16, q_x, 20_000);
                let weights = random_weights(&mut r, fs, p, q_w);
                let side = 16 - fs.side() + 1;
                let y_in = r.gen_bool(0.5).then(|| {
                    (0..p.filters()).map(|_| random_map(&mut r, side, side, q_out, 30_000)).collect()
                });
                let job = HwceJob { input, y_in, weights, q_out };
                assert_eq!(hwce_convolve(&job).unwrap(), reference_convolve(&job).unwrap());
            }
        }
    }
}

#[test]
fn multi_output_modes_equal_single_filter_runs() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    for p in [Precision::Bits8, Precision::Bits4] {
        for fs in [FilterSize::Three, FilterSize::Five] {
            let input = random_map(&mut r, 14, 11, q(6), 5000);
            let weights = random_weights(&mut r, fs, p, q(2));
            let multi = hwce_convolve(&HwceJob {
                input: input.clone(),
                y_in: None,
                weights: weights.clone(),
                q_out: q(5),
            })
            .unwrap();
            for (m, taps) in weights.filters().iter().enumerate() {
                let single = WeightSet::new(fs, Precision::Bits16, vec![taps.clone()], q(2)).unwrap();
                let out = hwce_convolve(&HwceJob {
                    input: input.clone(),
                    y_in: None,
                    weights: single,
                    q_out: q(5),
                })
                .unwrap();
                assert_eq!(out[0], multi[m]);
            }
        }
    }
}

#[test]
fn slice_recombination_on_corner_weights() {
    let nibbles = [0x0u16, 0x7, 0x8, 0xF];
    let window: Vec<i16> = vec![-32768, 32767, -1, 1, 12345, -23456, 0, 2, -3];
    for code in 0..256u16 {
        let w = (0..4).fold(0u16, |acc, j| acc | (nibbles[((code >> (2 * j)) & 3) as usize] << (4 * j)));
        let locs = vec![w; 9];
        let s = window_sums(&window, &locs, Precision::Bits16);
        let direct: i64 = window.iter().map(|&x| i64::from(x) * i64::from(w as i16)).sum();
        assert_eq!(recombine(&s, Precision::Bits16)[0], direct, "weight {w:#06x}");
    }
}

#[test]
fn slice_recombination_on_random_weights() {
    let mut r = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10_000 {
        let window: Vec<i16> = (0..25).map(|_| r.gen()).collect();
        let weights: Vec<i16> = (0..25).map(|_| r.gen()).collect();
        let locs: Vec<u16> = weights.iter().map(|&w| w as u16).collect();
        let total: i64 = (0..4)
            .map(|j| {
                let digits: Vec<u8> = locs.iter().map(|&l| ((l >> (4 * j)) & 0xF) as u8).collect();
                sop_slice(&window, &digits, j == 3) << (4 * j)
            })
            .sum();
        let direct: i64 = window.iter().zip(&weights).map(|(&x, &w)| i64::from(x) * i64::from(w)).sum();
        assert_eq!(total, direct);
    }
}

#[test]
fn line_buffer_matches_direct_indexing_for_all_sizes() {
    let mut r = ChaCha8Rng::seed_from_u64(24);
    for fs in [3, 5] {
        for w in 3..=64 {
            for h in 3..=64 {
                let fm = random_map(&mut r, w, h, q(0), 1000);
                match (extract_windows(&fm, fs), direct_windows(&fm, fs)) {
                    (Ok(a), Ok(b)) => {
                        assert_eq!(a.len(), (w - fs + 1) * (h - fs + 1));
                        assert_eq!(a, b, "{w}x{h} fs {fs}");
                    }
                    (Err(_), Err(_)) => assert!(w < fs || h < fs),
                    _ => panic!("line buffer and direct disagree on validity for {w}x{h}"),
                }
            }
        }
    }
}

#[test]
fn thirty_two_square_gives_900_windows() {
    let mut r = ChaCha8Rng::seed_from_u64(25);
    let fm = random_map(&mut r, 32, 32, q(0), 30000);
    let ws = extract_windows(&fm, 3).unwrap();
    assert_eq!(ws.len(), 900);
    assert_eq!(ws, direct_windows(&fm, 3).unwrap());
}

#[test]
fn chained_channels_match_wide_accumulator_when_unshifted() {
    let mut r = ChaCha8Rng::seed_from_u64(26);
    let channels: Vec<FeatureMap> = (0..6).map(|_| random_map(&mut r, 10, 10, q(0), 40)).collect();
    // small enough that no intermediate result saturates
    let weights: Vec<WeightSet> = (0..6)
        .map(|_| {
            let taps = (0..9).map(|_| r.gen_range(-20i16..=20)).collect();
            WeightSet::new(FilterSize::Three, Precision::Bits16, vec![taps], q(0)).unwrap()
        })
        .collect();
    let mut y = FeatureMap::filled(8, 8, q(0), 0);
    for (x, w) in channels.iter().zip(&weights) {
        y = hwce_convolve(&HwceJob {
            input: x.clone(),
            y_in: Some(vec![y]),
            weights: w.clone(),
            q_out: q(0),
        })
        .unwrap()
        .remove(0);
    }
    for py in 0..8 {
        for px in 0..8 {
            let mut acc = 0i64;
            for (x, w) in channels.iter().zip(&weights) {
                for k in 0..9 {
                    acc += i64::from(w.filters()[0][k]) * i64::from(x.get(px + k % 3, py + k / 3).0);
                }
            }
            assert_eq!(i64::from(y.get(px, py).0), acc);
        }
    }
}

#[test]
fn chained_channels_with_shift_follow_chained_oracle() {
    let mut r = ChaCha8Rng::seed_from_u64(27);
    let mut y_hw = FeatureMap::filled(6, 6, q(8), 0);
    let mut y_ref = y_hw.clone();
    for _ in 0..4 {
        let x = random_map(&mut r, 8, 8, q(8), 3000);
        let w = random_weights(&mut r, FilterSize::Three, Precision::Bits8, q(4));
        let hw = hwce_convolve(&HwceJob { input: x.clone(), y_in: Some(vec![y_hw.clone(), y_hw]), weights: w.clone(), q_out: q(8) }).unwrap();
        let rf = reference_convolve(&HwceJob { input: x, y_in: Some(vec![y_ref.clone(), y_ref]), weights: w, q_out: q(8) }).unwrap();
        assert_eq!(hw, rf);
        y_hw = hw[0].clone();
        y_ref = rf[0].clone();
    }
}

#[test]
fn four_bit_pattern_packing_against_brute_force() {
    let pattern: Vec<i16> = (0..25).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    let ws = WeightSet::new(FilterSize::Five, Precision::Bits4, vec![pattern.clone(); 4], q(0)).unwrap();
    let buf = interleave_weights(&ws);
    for (k, &loc) in buf.0.iter().enumerate() {
        let mut expect = 0u16;
        for f in 0..4 {
            expect |= ((pattern[k] as u16) & 0xF) << (4 * f);
        }
        assert_eq!(loc, expect);
    }
}

proptest! {
    #[test]
    fn interleave_round_trip(
        p_idx in 0usize..3,
        five: bool,
        seed: u64,
    ) {
        let p = Precision::ALL[p_idx];
        let fs = if five { FilterSize::Five } else { FilterSize::Three };
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let ws = random_weights(&mut r, fs, p, q(3));
        let back = deinterleave_weights(&interleave_weights(&ws), fs, p, q(3)).unwrap();
        prop_assert_eq!(back, ws);
    }

    #[test]
    fn normalization_matches_integer_oracle(acc in -(1i64 << 46)..(1i64 << 46), s in 0u32..31) {
        let got = i64::from(normalize_saturate(acc, s).0);
        let scaled = if s == 0 { acc } else { (acc + (1 << (s - 1))).div_euclid(1 << s) };
        prop_assert_eq!(got, scaled.clamp(-32768, 32767));
    }

    #[test]
    fn outputs_never_wrap(seed: u64, p_idx in 0usize..3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = Precision::ALL[p_idx];
        let input = random_map(&mut r, 7, 7, q(0), i16::MAX);
        let weights = random_weights(&mut r, FilterSize::Five, p, q(0));
        let job = HwceJob { input, y_in: Some((0..p.filters()).map(|_| random_map(&mut r, 3, 3, q(0), i16::MAX)).collect()), weights, q_out: q(0) };
        prop_assert_eq!(hwce_convolve(&job).unwrap(), reference_convolve(&job).unwrap());
    }
}
