//! The `VerificationReport` JSON document and value encoders.

use gcs_core::exact::{ExactMatrix, Point, Q};
use serde::Serialize;
use serde_json::{json, Value};

use crate::seedfile::FORMAT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Excluded,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Excluded => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity or statement the check tests.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub n: usize,
    pub k: usize,
    pub family: String,
    pub points: usize,
    pub rng_seed: u64,
    pub range: i64,
    pub grid: i64,
    pub charge_bound: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub format: u32,
    pub suite: String,
    pub parameters: Parameters,
    pub passed: bool,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    /// Records are sorted by id, so the report does not depend on the order
    /// in which checks finished.
    pub fn new(suite: &str, parameters: Parameters, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Excluded => summary.excluded += 1,
            }
        }
        VerificationReport { format: FORMAT, suite: suite.into(), parameters, passed: summary.fail == 0, summary, records }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}  {}  ({})\n", r.status.label(), r.id, r.anchor));
        }
        let s = &self.summary;
        out.push_str(&format!("{}: {} passed, {} failed, {} excluded\n", self.suite, s.pass, s.fail, s.excluded));
        out
    }
}

pub fn q_json(v: &Q) -> Value {
    Value::String(v.to_string())
}

pub fn matrix_json(m: &ExactMatrix<Q>) -> Value {
    Value::Array((1..=m.rows()).map(|i| Value::Array(m.row(i).iter().map(q_json).collect())).collect())
}

pub fn point_json(p: &Point) -> Value {
    json!({ "x": matrix_json(&p.x), "y": matrix_json(&p.y) })
}
