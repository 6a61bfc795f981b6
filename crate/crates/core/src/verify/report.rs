//! Paired-side reports, verdicts, and content hashing.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::engine::MCEstimate;
use crate::special::IDENTITY_RTOL;

/// Standard-error multiplier in the verdict rule.
pub const VERDICT_K: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Inconclusive,
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Holds => "HOLDS",
            Self::Inconclusive => "INCONCLUSIVE",
            Self::Violated => "VIOLATED",
        })
    }
}

/// Verdict for the claim `lhs ≤ rhs`.
pub fn verdict(lhs: &MCEstimate, rhs: &MCEstimate) -> Verdict {
    let k = VERDICT_K;
    if lhs.exact && rhs.exact {
        return if lhs.mean <= rhs.mean + IDENTITY_RTOL * rhs.mean.abs() {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
    }
    if lhs.mean - k * lhs.std_error > rhs.mean + k * rhs.std_error {
        Verdict::Violated
    } else if lhs.mean + k * lhs.std_error <= rhs.mean - k * rhs.std_error {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    }
}

/// A named diagnostic attached to a report (e.g. MC-vs-exact concordance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactSides {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
}

/// One inequality `lhs ≤ rhs` with both sides, slack, and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub label: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: MCEstimate,
    pub rhs: MCEstimate,
    pub ratio: Option<f64>,
    /// `(rhs − lhs) / √(se_l² + se_r²)`; absent when both errors vanish.
    pub slack_sigmas: Option<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSides>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub seed: u64,
    pub runtime_seconds: f64,
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    let r = a / b;
    r.is_finite().then_some(r)
}

impl InequalityReport {
    pub fn new(label: impl Into<String>, lhs: MCEstimate, rhs: MCEstimate, seed: u64) -> Self {
        let spread = lhs.std_error.hypot(rhs.std_error);
        Self {
            label: label.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            ratio: ratio(lhs.mean, rhs.mean),
            slack_sigmas: (spread > 0.0).then(|| (rhs.mean - lhs.mean) / spread),
            verdict: verdict(&lhs, &rhs),
            exact: None,
            checks: Vec::new(),
            notes: Vec::new(),
            seed,
            runtime_seconds: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn with_exact(mut self, lhs: f64, rhs: f64) -> Self {
        self.exact = Some(ExactSides { lhs, rhs, ratio: ratio(lhs, rhs) });
        self
    }

    pub fn check(mut self, name: &str, passed: bool, detail: impl Into<String>) -> Self {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        self
    }

    /// Adds the standard "MC within 5 se of the closed form" checks for whichever sides are sampled.
    pub fn concordance_checks(mut self) -> Self {
        if let Some(ex) = self.exact {
            for (side, est, value) in [("lhs", self.lhs, ex.lhs), ("rhs", self.rhs, ex.rhs)] {
                if !est.exact {
                    self = self.check(
                        &format!("{side}_mc_matches_exact"),
                        est.agrees_with(value, 5.0),
                        format!("mc {} ± {} vs exact {value} ({:.2} se)", est.mean, est.std_error, est.sigmas_from(value)),
                    );
                }
            }
        }
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_seconds = start.elapsed().as_secs_f64();
        self
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// SHA-256 of the JSON with all `runtime_seconds` fields zeroed.
    pub fn content_hash(&self) -> String {
        content_hash(self)
    }

    /// One human-readable line.
    pub fn summary_line(&self) -> String {
        let side = |e: &MCEstimate| {
            if e.exact {
                format!("{:.6}", e.mean)
            } else {
                format!("{:.6}±{:.2e}", e.mean, e.std_error)
            }
        };
        format!(
            "{:<13} {}  [{} <= {}]",
            self.verdict.to_string(),
            self.label,
            side(&self.lhs),
            side(&self.rhs)
        )
    }
}

/// A group of related report lines sharing one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSet {
    pub label: String,
    pub reports: Vec<InequalityReport>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub seed: u64,
    pub runtime_seconds: f64,
}

impl ReportSet {
    pub fn new(label: impl Into<String>, seed: u64) -> Self {
        Self {
            label: label.into(),
            reports: Vec::new(),
            extras: BTreeMap::new(),
            notes: Vec::new(),
            seed,
            runtime_seconds: 0.0,
        }
    }

    /// The worst verdict across lines (`HOLDS` for an empty set).
    pub fn verdict(&self) -> Verdict {
        self.reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Holds)
    }

    pub fn checks_pass(&self) -> bool {
        self.reports.iter().all(InequalityReport::checks_pass)
    }

    pub fn extra(&mut self, key: &str, value: impl Serialize) {
        self.extras.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn content_hash(&self) -> String {
        content_hash(self)
    }
}

fn zero_runtimes(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, item) in map.iter_mut() {
                if k == "runtime_seconds" {
                    *item = Value::from(0.0);
                } else {
                    zero_runtimes(item);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(zero_runtimes),
        _ => {}
    }
}

/// SHA-256 (hex) of the compact JSON of `value` with every `runtime_seconds` zeroed.
pub fn content_hash<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    zero_runtimes(&mut v);
    let digest = Sha256::digest(v.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(mean: f64, se: f64) -> MCEstimate {
        MCEstimate { mean, std_error: se, count: 1000, exact: false, stream: None }
    }

    #[test]
    fn verdict_rule() {
        assert_eq!(verdict(&mc(1.0, 0.1), &mc(2.0, 0.1)), Verdict::Holds);
        assert_eq!(verdict(&mc(1.0, 0.1), &mc(1.5, 0.1)), Verdict::Inconclusive);
        assert_eq!(verdict(&mc(2.0, 0.1), &mc(1.0, 0.1)), Verdict::Violated);
        assert_eq!(verdict(&mc(1.29, 0.1), &mc(1.0, 0.0)), Verdict::Inconclusive);
        assert_eq!(verdict(&mc(1.31, 0.1), &mc(1.0, 0.0)), Verdict::Violated);
        let e = MCEstimate::exact;
        assert_eq!(verdict(&e(1.0), &e(1.0)), Verdict::Holds);
        assert_eq!(verdict(&e(1.0 + 1e-14), &e(1.0)), Verdict::Holds);
        assert_eq!(verdict(&e(1.0 + 1e-9), &e(1.0)), Verdict::Violated);
        assert_eq!(verdict(&mc(0.0, 0.0), &mc(0.0, 0.0)), Verdict::Holds);
    }

    #[test]
    fn verdict_ordering() {
        let mut set = ReportSet::new("s", 1);
        assert_eq!(set.verdict(), Verdict::Holds);
        set.reports.push(InequalityReport::new("a", mc(1.0, 0.1), mc(1.2, 0.1), 1));
        set.reports.push(InequalityReport::new("b", mc(1.0, 0.1), mc(2.0, 0.1), 1));
        assert_eq!(set.verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn json_shape_and_hash_ignore_runtime() {
        let mut r = InequalityReport::new("x", mc(1.0, 0.1), MCEstimate::exact(2.0), 42)
            .param("n", 2)
            .with_exact(1.0, 2.0);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["label", "params", "lhs", "rhs", "ratio", "slack_sigmas", "verdict", "seed", "runtime_seconds"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "HOLDS");
        assert_eq!(v["lhs"]["se"], 0.1);
        assert_eq!(v["rhs"]["exact"], true);
        let h = r.content_hash();
        r.runtime_seconds = 12.5;
        assert_eq!(h, r.content_hash());
        r.seed = 43;
        assert_ne!(h, r.content_hash());
        assert_eq!(h.len(), 64);
        let back: InequalityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn undefined_ratio_is_null() {
        let r = InequalityReport::new("zero", MCEstimate::exact(0.0), MCEstimate::exact(0.0), 0);
        assert_eq!(r.ratio, None);
        assert_eq!(r.slack_sigmas, None);
        assert_eq!(r.verdict, Verdict::Holds);
    }
}
