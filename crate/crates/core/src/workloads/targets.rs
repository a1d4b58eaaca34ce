use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::WorkloadError;

/// A metric bound. `metric` is a dotted path into a report, with numeric
/// segments indexing arrays (`levels.0.joules`, `breakdown.AES/KEC`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Relative tolerance around `value`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetFile {
    #[serde(default)]
    pub label: String,
    pub targets: Vec<Target>,
}

impl TargetFile {
    pub fn from_json(text: &str) -> Result<Self, WorkloadError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCheck {
    pub metric: String,
    pub actual: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl std::fmt::Display for TargetCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "ok  " } else { "FAIL" };
        write!(f, "{verdict} {} = {:.6e} in [{:.6e}, {:.6e}]", self.metric, self.actual, self.lo, self.hi)
    }
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    let mut cur = v;
    let mut rest = path;
    while !rest.is_empty() {
        // keys may themselves contain dots' neighbours such as '/', so try
        // the longest matching key first
        let next = match cur {
            Value::Object(map) => {
                let mut found = None;
                for (i, _) in rest.match_indices('.').chain([(rest.len(), "")]).collect::<Vec<_>>().into_iter().rev() {
                    if let Some(child) = map.get(&rest[..i]) {
                        found = Some((child, i));
                        break;
                    }
                }
                found
            }
            Value::Array(items) => {
                let i = rest.find('.').unwrap_or(rest.len());
                rest[..i].parse::<usize>().ok().and_then(|k| items.get(k)).map(|c| (c, i))
            }
            _ => None,
        }?;
        cur = next.0;
        rest = rest.get(next.1 + 1..).unwrap_or("");
    }
    Some(cur)
}

/// Check every target against a report serialized as JSON.
pub fn verify(report: &Value, targets: &TargetFile) -> Result<Vec<TargetCheck>, WorkloadError> {
    targets
        .targets
        .iter()
        .map(|t| {
            let actual = lookup(report, &t.metric)
                .and_then(Value::as_f64)
                .ok_or_else(|| WorkloadError::MissingMetric(t.metric.clone()))?;
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            if let Some(v) = t.value {
                let tol = t.rel_tol.unwrap_or(0.0) * v.abs();
                lo = v - tol;
                hi = v + tol;
            }
            if let Some(m) = t.min {
                lo = lo.max(m);
            }
            if let Some(m) = t.max {
                hi = hi.min(m);
            }
            Ok(TargetCheck {
                metric: t.metric.clone(),
                actual,
                lo,
                hi,
                pass: actual >= lo && actual <= hi,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dotted_paths_and_bounds() {
        let r = json!({"total_joules": 0.027, "breakdown": {"AES/KEC": 1e-3}, "levels": [{"seconds": 2.0}]});
        let f = TargetFile::from_json(
            r#"{"targets": [
                {"metric": "total_joules", "value": 0.027, "rel_tol": 0.15},
                {"metric": "breakdown.AES/KEC", "max": 2e-3},
                {"metric": "levels.0.seconds", "min": 3.0}
            ]}"#,
        )
        .unwrap();
        let c = verify(&r, &f).unwrap();
        assert_eq!(c.iter().map(|c| c.pass).collect::<Vec<_>>(), [true, true, false]);
        let missing = TargetFile::from_json(r#"{"targets": [{"metric": "nope", "min": 0}]}"#).unwrap();
        assert!(matches!(verify(&r, &missing), Err(WorkloadError::MissingMetric(_))));
    }
}
