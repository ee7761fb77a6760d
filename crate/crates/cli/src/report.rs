use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Every anchor a record may carry.
pub const ANCHORS: &[&str] = &[
    "slice-block-half",
    "one-step-amplification",
    "block-chain",
    "norm-chain",
    "perfect-zk",
    "measure-reflect",
    "block-identities",
    "invariant-plane",
    "grover-rotation",
    "phase-solver",
    "measure-reflect-schedule",
];

/// A float written with 17 significant digits; non-finite values become
/// `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check: String,
    pub anchor: &'static str,
    pub value: Float,
    /// `None` marks an informational record, which always passes.
    pub tolerance: Option<Float>,
    pub pass: bool,
}

impl Record {
    /// Passes iff `value ≤ tolerance`.
    pub fn bound(check: impl Into<String>, anchor: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            anchor,
            value: Float(value),
            tolerance: Some(Float(tolerance)),
            pass: value <= tolerance,
        }
    }

    pub fn info(check: impl Into<String>, anchor: &'static str, value: f64) -> Self {
        Self {
            check: check.into(),
            anchor,
            value: Float(value),
            tolerance: None,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Dims {
    pub w: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_seconds: Float,
    pub trial_seconds: Vec<Float>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub dims: Dims,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub pass: bool,
    pub records: Vec<Record>,
    pub environment: Environment,
}

impl Report {
    pub fn new(command: &'static str, records: Vec<Record>, environment: Environment) -> Self {
        Self {
            command,
            pass: records.iter().all(|r| r.pass),
            records,
            environment,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}
