use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{OperatingMode, PerfError};
use crate::conv::{FilterSize, Precision};

/// The shipped default calibration.
pub const DEFAULT_CALIBRATION_JSON: &str = include_str!("../../data/calibration.json");

/// Where a constant comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A published measurement of the chip.
    Measured,
    /// Solved numerically against end-to-end targets.
    Fitted,
    /// Computed from other entries.
    Derived,
    /// Taken from a component datasheet.
    Datasheet,
    /// A modeling assumption.
    Assumed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub provenance: Provenance,
}

impl Entry {
    pub fn new(value: f64, provenance: Provenance) -> Self {
        Entry { value, provenance }
    }
}

/// Maximum cluster clock per mode, in MHz, at each supply point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub vdd_points: Vec<f64>,
    #[serde(rename = "CRY_CNN_SW")]
    pub cry_cnn_sw: Vec<Entry>,
    #[serde(rename = "KEC_CNN_SW")]
    pub kec_cnn_sw: Vec<Entry>,
    #[serde(rename = "SW")]
    pub sw: Vec<Entry>,
}

impl FrequencyTable {
    pub fn mhz(&self, mode: OperatingMode) -> &[Entry] {
        match mode {
            OperatingMode::CryCnnSw => &self.cry_cnn_sw,
            OperatingMode::KecCnnSw => &self.kec_cnn_sw,
            OperatingMode::Sw => &self.sw,
        }
    }

    pub fn mhz_mut(&mut self, mode: OperatingMode) -> &mut Vec<Entry> {
        match mode {
            OperatingMode::CryCnnSw => &mut self.cry_cnn_sw,
            OperatingMode::KecCnnSw => &mut self.kec_cnn_sw,
            OperatingMode::Sw => &mut self.sw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerPrecision {
    #[serde(rename = "16")]
    pub b16: Entry,
    #[serde(rename = "8")]
    pub b8: Entry,
    #[serde(rename = "4")]
    pub b4: Entry,
}

impl PerPrecision {
    pub fn get(&self, p: Precision) -> f64 {
        match p {
            Precision::Bits16 => self.b16.value,
            Precision::Bits8 => self.b8.value,
            Precision::Bits4 => self.b4.value,
        }
    }

    fn entries(&self) -> [&Entry; 3] {
        [&self.b16, &self.b8, &self.b4]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HwceCpp {
    #[serde(rename = "5x5")]
    pub fs5: PerPrecision,
    #[serde(rename = "3x3")]
    pub fs3: PerPrecision,
}

impl HwceCpp {
    pub fn get(&self, fs: FilterSize, p: Precision) -> f64 {
        match fs {
            FilterSize::Five => self.fs5.get(p),
            FilterSize::Three => self.fs3.get(p),
        }
    }
}

/// Cycles per work unit on one core, four cores, and four cores with the
/// packed-SIMD extensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerCores {
    pub core1: Entry,
    pub core4: Entry,
    pub core4_simd: Entry,
}

impl PerCores {
    fn entries(&self) -> [&Entry; 3] {
        [&self.core1, &self.core4, &self.core4_simd]
    }

    pub fn entries_mut(&mut self) -> [&mut Entry; 3] {
        [&mut self.core1, &mut self.core4, &mut self.core4_simd]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwKernelTable {
    /// per multiply-accumulate
    pub dense: PerCores,
    /// per multiply-accumulate
    pub pca: PerCores,
    /// per input sample per decomposition level
    pub dwt: PerCores,
    /// per multiply-accumulate
    pub svm: PerCores,
    /// per activation element (ReLU, pooling, shortcut add)
    pub act: PerCores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub hwcrypt_setup_cycles: Entry,
    pub hwcrypt_ecb_cpb: Entry,
    pub hwcrypt_xts_cpb: Entry,
    pub sponge_cpb_at_rate128_r20: Entry,
    pub hwce_setup_cycles: Entry,
    pub hwce_linebuffer_fill_per_row: Entry,
    pub hwce_cyc_per_px: HwceCpp,
    pub sw_conv5x5_cyc_per_px: PerCores,
    pub sw_conv3x3_cyc_per_px: PerCores,
    pub sw_aes_ecb_cpb: PerCores,
    pub sw_aes_xts_cpb: PerCores,
    pub sw_kernels: SwKernelTable,
    pub dma_setup_cycles: Entry,
    pub dma_bytes_per_cycle: Entry,
    pub barrier_cycles: Entry,
    pub critical_cycles: Entry,
    pub parallel_open_cycles: Entry,
    pub mode_switch_ref_cycles: Entry,
    pub ref_clock_hz: Entry,
}

/// Dynamic power coefficients in uW/MHz at the reference supply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitPower {
    pub cluster_base: Entry,
    pub core: Entry,
    pub hwce: PerPrecision,
    pub hwcrypt_aes: Entry,
    pub hwcrypt_sponge: Entry,
    pub dma: Entry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtMemParams {
    pub active_ma: Entry,
    pub standby_ua: Entry,
    pub supply_v: Entry,
    pub bandwidth_mb_s: Entry,
    pub banks: Entry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub reference_vdd: Entry,
    pub soc_mw: Entry,
    /// one entry per frequency-table supply point
    pub cluster_leak_mw: Vec<Entry>,
    pub uw_per_mhz: UnitPower,
    pub idle_cluster_mw: Entry,
    pub fll_mw: Entry,
    pub deep_sleep_mw: Entry,
    pub wakeup_fll_on_s: Entry,
    pub wakeup_fll_off_s: Entry,
    pub flash: ExtMemParams,
    pub fram: ExtMemParams,
    pub spi_io_mw: Entry,
    /// Published efficiency figures kept for comparison; not used by the model.
    pub anchors: BTreeMap<String, Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub frequencies: FrequencyTable,
    pub cost_table: CostTable,
    pub power_table: PowerTable,
    /// Free-form notes: label meanings and the targets fitted entries were
    /// solved against.
    pub provenance: BTreeMap<String, String>,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration::from_json(DEFAULT_CALIBRATION_JSON).expect("embedded calibration is valid")
    }
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> Result<f64, PerfError> {
    const EPS: f64 = 1e-9;
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    if !(x >= lo - EPS && x <= hi + EPS) {
        return Err(PerfError::VddOutOfRange(x));
    }
    let x = x.clamp(lo, hi);
    for i in 1..xs.len() {
        if x <= xs[i] {
            let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return Ok(ys[i - 1] + t * (ys[i] - ys[i - 1]));
        }
    }
    Ok(ys[ys.len() - 1])
}

impl Calibration {
    pub fn from_json(text: &str) -> Result<Self, PerfError> {
        let cal: Calibration =
            serde_json::from_str(text).map_err(|e| PerfError::InvalidCalibration(e.to_string()))?;
        cal.validate()?;
        Ok(cal)
    }

    pub fn from_path(path: &Path) -> Result<Self, PerfError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PerfError::InvalidCalibration(format!("{}: {e}", path.display())))?;
        Calibration::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("calibration serializes");
        s.push('\n');
        s
    }

    /// SHA-256 of the canonical compact JSON form.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("calibration serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn validate(&self) -> Result<(), PerfError> {
        let bad = |m: String| Err(PerfError::InvalidCalibration(m));
        let f = &self.frequencies;
        let n = f.vdd_points.len();
        if n < 2 || f.vdd_points.windows(2).any(|w| w[1] <= w[0]) {
            return bad("vdd_points must be strictly increasing with at least two points".into());
        }
        for mode in OperatingMode::ALL {
            let e = f.mhz(mode);
            if e.len() != n {
                return bad(format!("{mode} has {} frequency points, expected {n}", e.len()));
            }
            if e.iter().any(|x| x.value <= 0.0) || e.windows(2).any(|w| w[1].value < w[0].value) {
                return bad(format!("{mode} frequencies must be positive and non-decreasing"));
            }
        }
        for i in 0..n {
            let (c, k, s) = (f.cry_cnn_sw[i].value, f.kec_cnn_sw[i].value, f.sw[i].value);
            if !(s >= k && k >= c) {
                return bad(format!("mode ordering violated at {} V", f.vdd_points[i]));
            }
        }
        if self.power_table.cluster_leak_mw.len() != n {
            return bad("cluster_leak_mw needs one entry per supply point".into());
        }
        let c = &self.cost_table;
        let k = &c.sw_kernels;
        let mut positive: Vec<&Entry> = vec![
            &c.hwcrypt_setup_cycles,
            &c.hwcrypt_ecb_cpb,
            &c.hwcrypt_xts_cpb,
            &c.sponge_cpb_at_rate128_r20,
            &c.hwce_setup_cycles,
            &c.hwce_linebuffer_fill_per_row,
            &c.dma_setup_cycles,
            &c.dma_bytes_per_cycle,
            &c.barrier_cycles,
            &c.critical_cycles,
            &c.parallel_open_cycles,
            &c.mode_switch_ref_cycles,
            &c.ref_clock_hz,
        ];
        positive.extend(c.hwce_cyc_per_px.fs5.entries());
        positive.extend(c.hwce_cyc_per_px.fs3.entries());
        for t in [
            &c.sw_conv5x5_cyc_per_px,
            &c.sw_conv3x3_cyc_per_px,
            &c.sw_aes_ecb_cpb,
            &c.sw_aes_xts_cpb,
            &k.dense,
            &k.pca,
            &k.dwt,
            &k.svm,
            &k.act,
        ] {
            positive.extend(t.entries());
        }
        if positive.iter().any(|e| !(e.value > 0.0)) {
            return bad("every cost coefficient must be positive".into());
        }
        let p = &self.power_table;
        let u = &p.uw_per_mhz;
        let mut nonneg: Vec<&Entry> = vec![
            &p.soc_mw,
            &p.idle_cluster_mw,
            &p.fll_mw,
            &p.deep_sleep_mw,
            &p.spi_io_mw,
            &u.cluster_base,
            &u.core,
            &u.hwcrypt_aes,
            &u.hwcrypt_sponge,
            &u.dma,
        ];
        nonneg.extend(u.hwce.entries());
        nonneg.extend(p.cluster_leak_mw.iter());
        if nonneg.iter().any(|e| !(e.value >= 0.0)) {
            return bad("power entries must be non-negative".into());
        }
        for (name, m) in [("flash", &p.flash), ("fram", &p.fram)] {
            if !(m.active_ma.value * 1000.0 >= m.standby_ua.value && m.standby_ua.value >= 0.0) {
                return bad(format!("{name}: active current must be at least standby"));
            }
            if !(m.bandwidth_mb_s.value > 0.0 && m.supply_v.value > 0.0) {
                return bad(format!("{name}: bandwidth and supply must be positive"));
            }
        }
        Ok(())
    }

    /// Maximum cluster frequency, linearly interpolated between supply points.
    pub fn frequency_of(&self, mode: OperatingMode, vdd: f64) -> Result<f64, PerfError> {
        let ys: Vec<f64> = self.frequencies.mhz(mode).iter().map(|e| e.value).collect();
        Ok(interp(&self.frequencies.vdd_points, &ys, vdd)? * 1e6)
    }

    pub fn cluster_leak_mw(&self, vdd: f64) -> Result<f64, PerfError> {
        let ys: Vec<f64> = self.power_table.cluster_leak_mw.iter().map(|e| e.value).collect();
        interp(&self.frequencies.vdd_points, &ys, vdd)
    }

    pub fn vdd_range(&self) -> (f64, f64) {
        let v = &self.frequencies.vdd_points;
        (v[0], v[v.len() - 1])
    }

    /// Every entry with its dotted path, for listings and provenance checks.
    pub fn entries(&self) -> Vec<(String, Entry)> {
        fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, Entry)>) {
            match v {
                serde_json::Value::Object(map) => {
                    if let (Some(value), Some(prov)) = (map.get("value"), map.get("provenance")) {
                        if let (Some(x), Ok(p)) = (
                            value.as_f64(),
                            serde_json::from_value::<Provenance>(prov.clone()),
                        ) {
                            out.push((prefix.to_string(), Entry::new(x, p)));
                            return;
                        }
                    }
                    for (k, child) in map {
                        let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                        walk(&p, child, out);
                    }
                }
                serde_json::Value::Array(items) => {
                    for (i, child) in items.iter().enumerate() {
                        walk(&format!("{prefix}[{i}]"), child, out);
                    }
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        let v = serde_json::to_value(self).expect("calibration serializes");
        walk("", &v, &mut out);
        out
    }
}
