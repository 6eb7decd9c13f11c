//! Replays test cases against a (possibly mutated) app and judges them by
//! node-sequence equality and fault events in the log.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artifact::{to_json, Provenance};
use crate::crawler::{current_node, reaction_target};
use crate::testgen::{TestCase, TestSuite};
use crate::tvsim::{init_session, press_key, AppSpec, LogEvent, LogKind, SimError};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    FailMismatch,
    FailFault,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub expected: NodeId,
    pub observed: NodeId,
    pub events: Vec<LogEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub outcome: Outcome,
    /// Index of the key press that failed. `None` on pass, or when the
    /// session did not even start on the test's first node.
    pub failed_step: Option<usize>,
    pub fault_ids: BTreeSet<String>,
    pub trace: Vec<TraceStep>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("test has {nodes} nodes but {keys} keys")]
    MalformedTest { nodes: usize, keys: usize },
}

pub fn execute_test(spec: &AppSpec, test: &TestCase, focus: Option<&str>) -> Result<Verdict, ExecError> {
    if test.nodes.len() != test.keys.len() + 1 {
        return Err(ExecError::MalformedTest { nodes: test.nodes.len(), keys: test.keys.len() });
    }
    let mut state = init_session(spec, focus)?;
    let mut verdict = Verdict { outcome: Outcome::Pass, failed_step: None, fault_ids: BTreeSet::new(), trace: vec![] };

    if current_node(spec, &state).id != test.nodes[0] {
        verdict.outcome = Outcome::FailMismatch;
        return Ok(verdict);
    }

    for (i, &key) in test.keys.iter().enumerate() {
        let before = state.clone();
        let events = press_key(spec, &mut state, key).to_vec();
        let observed = reaction_target(spec, &before, &state, &events).unwrap_or_else(|| current_node(spec, &state)).id;
        verdict.fault_ids.extend(events.iter().filter(|e| e.kind == LogKind::Fault).map(|e| e.detail.clone()));
        let expected = test.nodes[i + 1].clone();
        let matched = observed == expected;
        let faulted = events.iter().any(|e| e.kind == LogKind::Fault);
        verdict.trace.push(TraceStep { expected, observed, events });

        // a mismatch caused by a fault in the same press is reported as the fault
        if state.halted || (!matched && faulted) {
            verdict.outcome = Outcome::FailFault;
            verdict.failed_step = Some(i);
            return Ok(verdict);
        }
        if !matched {
            verdict.outcome = Outcome::FailMismatch;
            verdict.failed_step = Some(i);
            return Ok(verdict);
        }
    }
    if !verdict.fault_ids.is_empty() {
        verdict.outcome = Outcome::FailFault;
    }
    Ok(verdict)
}

/// Runs every test from a fresh session; one result per test, in order.
pub fn execute_suite(spec: &AppSpec, suite: &TestSuite, focus: Option<&str>) -> Vec<Result<Verdict, ExecError>> {
    suite.tests.iter().map(|t| execute_test(spec, t, focus)).collect()
}

pub const VERDICTS_SCHEMA: &str = "tvcreeper.verdicts";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictLine {
    pub test: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<usize>,
    pub fault_ids: BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerdictsDocument<'a> {
    schema: &'a str,
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    passed: usize,
    failed: usize,
    verdicts: Vec<VerdictLine>,
}

pub fn verdict_lines(results: &[Result<Verdict, ExecError>]) -> Vec<VerdictLine> {
    results
        .iter()
        .enumerate()
        .map(|(test, r)| match r {
            Ok(v) => VerdictLine {
                test,
                outcome: Some(v.outcome),
                failed_step: v.failed_step,
                fault_ids: v.fault_ids.clone(),
                error: None,
            },
            Err(e) => VerdictLine {
                test,
                outcome: None,
                failed_step: None,
                fault_ids: BTreeSet::new(),
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// The `verdicts.json` report.
pub fn save_verdicts(results: &[Result<Verdict, ExecError>], provenance: Option<&Provenance>) -> String {
    let passed = results.iter().filter(|r| matches!(r, Ok(v) if v.passed())).count();
    to_json(&VerdictsDocument {
        schema: VERDICTS_SCHEMA,
        version: 1,
        provenance,
        passed,
        failed: results.len() - passed,
        verdicts: verdict_lines(results),
    })
}
