//! Report records shared by every suite.

use serde::Serialize;

use crate::exactalg::{Ring, ToJson};
use crate::graded::{GradedMap, Violation};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one identity check. Recorded items carry data but are never
/// counted as failures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub degrees_checked: Vec<usize>,
    pub passed: bool,
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
}

impl RelationCheck {
    /// Checks that `diff` vanishes on its determined components.
    pub fn vanishing<T: Ring + ToJson>(relation: impl Into<String>, diff: &GradedMap<T>) -> Self {
        let (degrees_checked, first_violation) = diff.zero_check();
        RelationCheck {
            relation: relation.into(),
            passed: first_violation.is_none(),
            degrees_checked,
            asserted: true,
            first_violation,
        }
    }

    pub fn recorded<T: Ring + ToJson>(relation: impl Into<String>, diff: &GradedMap<T>) -> Self {
        RelationCheck { asserted: false, ..RelationCheck::vanishing(relation, diff) }
    }

    pub fn flag(relation: impl Into<String>, passed: bool) -> Self {
        RelationCheck {
            relation: relation.into(),
            degrees_checked: Vec::new(),
            passed,
            asserted: true,
            first_violation: None,
        }
    }

    /// `false` only for an asserted check that failed.
    pub fn ok(&self) -> bool {
        self.passed || !self.asserted
    }
}

pub fn all_ok(checks: &[RelationCheck]) -> bool {
    checks.iter().all(RelationCheck::ok)
}

/// A named collection of checks with the parameters it ran at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<RelationCheck>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, parameters: serde_json::Map<String, serde_json::Value>, checks: Vec<RelationCheck>) -> Self {
        let passed = all_ok(&checks);
        SuiteReport { suite: suite.into(), parameters, checks, passed }
    }

    pub fn failures(&self) -> Vec<&RelationCheck> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }

    pub fn find(&self, relation: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.relation == relation)
    }
}

/// `{"key": value, ...}` with values already in report form.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $( m.insert($k.to_string(), serde_json::json!($v)); )*
        m
    }};
}
