//! JSON report schema shared by every checker.
//!
//! A report is `{verdict, axioms: [{tag, pass, witness?, note?}], millis}`.
//! Composite analyses nest sub-reports under `details`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Pass or fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    /// `Pass` when `ok` holds.
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Whether this is `Pass`.
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// A concrete counterexample, sufficient to replay the failed clause.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which clause of the axiom failed.
    pub clause: String,
    /// Element indices of the subgroup at which the clause failed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroup: Vec<u32>,
    /// Element indices of a second subgroup (target of a morphism), when relevant.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target: Vec<u32>,
    /// A morphism as images of the subgroup's elements, when relevant.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphism: Vec<u32>,
    /// Numerical facts supporting the failure (orders, counts).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, u64>,
    /// Human-readable description.
    pub detail: String,
}

/// Outcome of one axiom or condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub tag: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AxiomResult {
    /// A passing clause.
    pub fn pass(tag: &str) -> AxiomResult {
        AxiomResult { tag: tag.into(), pass: true, witness: None, note: None }
    }

    /// A failing clause with its witness.
    pub fn fail(tag: &str, witness: Witness) -> AxiomResult {
        AxiomResult { tag: tag.into(), pass: false, witness: Some(witness), note: None }
    }

    /// Attaches a note.
    pub fn with_note(mut self, note: impl Into<String>) -> AxiomResult {
        self.note = Some(note.into());
        self
    }
}

/// Report of a checker run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub axioms: Vec<AxiomResult>,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

/// Saturation reports use the common schema.
pub type SaturationReport = Report;

impl Report {
    /// Builds a report whose verdict is the conjunction of its clauses.
    pub fn from_axioms(axioms: Vec<AxiomResult>, millis: u64) -> Report {
        let verdict = Verdict::from_bool(axioms.iter().all(|a| a.pass));
        Report { verdict, axioms, millis, details: BTreeMap::new() }
    }

    /// Whether the verdict is pass.
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    /// The first failing clause, if any.
    pub fn first_failure(&self) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| !a.pass)
    }

    /// The clause with a given tag.
    pub fn axiom(&self, tag: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.tag == tag)
    }

    /// Attaches a detail value.
    pub fn with_detail(mut self, key: &str, value: serde_json::Value) -> Report {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Zeroes timing fields recursively so output is byte-stable.
    pub fn strip_timing(&mut self) {
        self.millis = 0;
        for v in self.details.values_mut() {
            strip_millis(v);
        }
    }
}

/// Zeroes every `millis` field inside a JSON value.
pub fn strip_millis(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "millis" {
                    *x = serde_json::Value::from(0);
                } else {
                    strip_millis(x);
                }
            }
        }
        serde_json::Value::Array(xs) => xs.iter_mut().for_each(strip_millis),
        _ => {}
    }
}

/// Milliseconds elapsed since `start`.
pub fn millis_since(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}
