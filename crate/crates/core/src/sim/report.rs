use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Category;

pub const REPORT_VERSION: &str = concat!("nodesim ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub index: usize,
    pub name: String,
    pub kind: String,
    pub mode: Option<String>,
    pub category: Category,
    pub start_s: f64,
    pub end_s: f64,
    pub cycles: f64,
    pub joules: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub version: String,
    pub calibration_sha256: String,
    pub label: String,
    pub vdd: f64,
    pub policy: String,
    pub initial_mode: String,
    /// cluster clock cycles elapsed while awake
    pub total_cycles: f64,
    pub total_seconds: f64,
    pub total_joules: f64,
    pub breakdown: BTreeMap<Category, f64>,
    /// on-chip only
    pub peak_power_mw: f64,
    pub mode_switches: usize,
    pub stall_seconds: f64,
    pub equivalent_ops: Option<f64>,
    pub pj_per_op: Option<f64>,
    #[serde(default)]
    pub phases: Vec<PhaseRow>,
}

fn num(x: f64) -> String {
    // same shortest round-trip form serde_json writes
    serde_json::to_string(&x).expect("finite")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SimReport {
    pub fn with_equivalent_ops(mut self, ops: f64) -> Self {
        self.equivalent_ops = Some(ops);
        self.pj_per_op = Some(self.total_joules / ops * 1e12);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn without_phases(mut self) -> Self {
        self.phases.clear();
        self
    }

    pub fn category(&self, c: Category) -> f64 {
        self.breakdown.get(&c).copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Summary as `key,value` lines, a blank line, then one row per phase.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let opt = |x: Option<f64>| x.map(num).unwrap_or_else(|| "null".into());
        let rows: Vec<(String, String)> = vec![
            ("version".into(), csv_field(&self.version)),
            ("calibration_sha256".into(), self.calibration_sha256.clone()),
            ("label".into(), csv_field(&self.label)),
            ("vdd".into(), num(self.vdd)),
            ("policy".into(), csv_field(&self.policy)),
            ("initial_mode".into(), self.initial_mode.clone()),
            ("total_cycles".into(), num(self.total_cycles)),
            ("total_seconds".into(), num(self.total_seconds)),
            ("total_joules".into(), num(self.total_joules)),
            ("peak_power_mw".into(), num(self.peak_power_mw)),
            ("mode_switches".into(), self.mode_switches.to_string()),
            ("stall_seconds".into(), num(self.stall_seconds)),
            ("equivalent_ops".into(), opt(self.equivalent_ops)),
            ("pj_per_op".into(), opt(self.pj_per_op)),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k},{v}");
        }
        for (c, v) in &self.breakdown {
            let _ = writeln!(out, "breakdown.{},{}", c.name(), num(*v));
        }
        out.push_str("\nindex,name,kind,mode,category,start_s,end_s,cycles,joules\n");
        for r in &self.phases {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.index,
                csv_field(&r.name),
                r.kind,
                r.mode.as_deref().unwrap_or(""),
                r.category.name(),
                num(r.start_s),
                num(r.end_s),
                num(r.cycles),
                num(r.joules)
            );
        }
        out
    }
}
