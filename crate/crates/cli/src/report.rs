//! JSON report types.

use serde::Serialize;
use sidkit::cpdag::{ComponentBound, SidBounds};
use sidkit::{BoundsKind, SidReport, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub reports: &'a [DistanceReport],
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub path: String,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    pub kind: BoundsKind,
    pub fixed: usize,
    pub components: Vec<ComponentBound>,
}

impl From<&SidBounds> for Bounds {
    fn from(b: &SidBounds) -> Self {
        Bounds {
            lower: b.lower,
            upper: b.upper,
            kind: b.kind,
            fixed: b.fixed,
            components: b.per_component.clone(),
        }
    }
}

/// One metric for one pair of inputs. Exactly one of `value` and `bounds` is set.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub metric: String,
    pub inputs: Vec<Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<Vec<Verdict>>>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyDetail>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDetail {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreements: Option<usize>,
}

impl DistanceReport {
    pub fn new(metric: &str, inputs: Vec<Input>, labels: Vec<String>) -> Self {
        DistanceReport {
            metric: metric.to_string(),
            inputs,
            value: None,
            bounds: None,
            labels,
            verdicts: None,
            warnings: Vec::new(),
            verify: None,
        }
    }

    pub fn with_count(mut self, v: usize) -> Self {
        self.value = Some(v.into());
        self
    }

    /// `halves / 2`, written as an integer when it is one.
    pub fn with_halves(mut self, halves: usize) -> Self {
        self.value = Some(if halves.is_multiple_of(2) {
            (halves / 2).into()
        } else {
            serde_json::Number::from_f64(halves as f64 / 2.0).expect("finite")
        });
        self
    }

    pub fn with_bounds(mut self, b: &SidBounds) -> Self {
        self.bounds = Some(b.into());
        self.warnings.extend(b.warnings.iter().cloned());
        self
    }

    pub fn with_verdicts(mut self, r: &SidReport) -> Self {
        self.verdicts = Some(r.verdicts.chunks(r.p.max(1)).map(|c| c.to_vec()).collect());
        self
    }

    /// One line for the terminal.
    pub fn summary(&self) -> String {
        let mut line = match (&self.value, &self.bounds) {
            (Some(v), _) => format!("{}: {v}", self.metric),
            (None, Some(b)) => {
                let label = match b.kind {
                    BoundsKind::Attained => "attained bounds",
                    BoundsKind::PerNode => "per-node bounds",
                };
                format!("{}: [{}, {}] ({label})", self.metric, b.lower, b.upper)
            }
            (None, None) => self.metric.clone(),
        };
        if let Some(v) = &self.verify {
            match (v.fast, v.reference, v.agree, v.pairs, v.agreements) {
                (Some(f), Some(r), Some(a), _, _) => {
                    line = format!(
                        "{} ({}): fast {f}, reference {r}, {}",
                        self.metric,
                        v.mode,
                        if a { "agree" } else { "DISAGREE" }
                    );
                }
                (_, _, _, Some(n), Some(k)) => {
                    line = format!("{} ({}): {k}/{n} pairs agree", self.metric, v.mode);
                }
                _ => {}
            }
        }
        line
    }
}
