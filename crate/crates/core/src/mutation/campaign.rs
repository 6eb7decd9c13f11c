use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{apply_mutant, Mutant, MutationOperator, MutationScore};
use crate::artifact::{to_json, Provenance};
use crate::executor::{execute_suite, Outcome};
use crate::testgen::TestSuite;
use crate::tvsim::AppSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KillChannel {
    /// A verdict recorded the mutant's fault event.
    Fault,
    /// A test passing on the original app failed with a mismatch.
    Divergence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MutantOutcome {
    pub id: String,
    pub operator: MutationOperator,
    pub killed: bool,
    pub channels: BTreeSet<KillChannel>,
    pub killing_tests: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MutationReport {
    /// Test index -> mutants that test killed.
    pub per_test: BTreeMap<usize, BTreeSet<String>>,
    pub killed: BTreeSet<String>,
    pub alive: BTreeSet<String>,
    pub score: MutationScore,
    pub mutants: Vec<MutantOutcome>,
}

impl MutationReport {
    /// Per test, the mutants it killed that no earlier test already killed.
    pub fn first_kills(&self, tests: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        (0..tests)
            .map(|t| {
                self.per_test.get(&t).map(|ids| ids.iter().filter(|id| seen.insert(id.as_str())).count()).unwrap_or(0)
            })
            .collect()
    }
}

fn evaluate(
    spec: &AppSpec,
    suite: &TestSuite,
    baseline_pass: &[bool],
    m: &Mutant,
    focus: Option<&str>,
) -> MutantOutcome {
    let mut outcome = MutantOutcome {
        id: m.id.clone(),
        operator: m.operator,
        killed: false,
        channels: BTreeSet::new(),
        killing_tests: Vec::new(),
        errors: Vec::new(),
    };
    let mutated = match apply_mutant(spec, m) {
        Ok(s) => s,
        Err(e) => {
            outcome.errors.push(e.to_string());
            return outcome;
        }
    };
    for (t, result) in execute_suite(&mutated, suite, focus).into_iter().enumerate() {
        let verdict = match result {
            Ok(v) => v,
            Err(e) => {
                outcome.errors.push(format!("test {t}: {e}"));
                continue;
            }
        };
        let mut killed_here = false;
        if verdict.fault_ids.contains(&m.id) {
            outcome.channels.insert(KillChannel::Fault);
            killed_here = true;
        }
        if baseline_pass[t] && verdict.outcome == Outcome::FailMismatch {
            outcome.channels.insert(KillChannel::Divergence);
            killed_here = true;
        }
        if killed_here {
            outcome.killing_tests.push(t);
        }
    }
    outcome.killed = !outcome.killing_tests.is_empty();
    outcome
}

/// Applies each mutant alone, runs the whole suite against it, and
/// aggregates kills. `jobs` bounds worker threads (0 = one per core).
pub fn run_campaign(
    spec: &AppSpec,
    suite: &TestSuite,
    mutants: &[Mutant],
    focus: Option<&str>,
    jobs: usize,
) -> MutationReport {
    let baseline_pass: Vec<bool> =
        execute_suite(spec, suite, focus).iter().map(|r| matches!(r, Ok(v) if v.passed())).collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let outcomes: Vec<MutantOutcome> =
        pool.install(|| mutants.par_iter().map(|m| evaluate(spec, suite, &baseline_pass, m, focus)).collect());

    let mut per_test: BTreeMap<usize, BTreeSet<String>> =
        (0..suite.tests.len()).map(|t| (t, BTreeSet::new())).collect();
    let mut killed = BTreeSet::new();
    let mut alive = BTreeSet::new();
    for o in &outcomes {
        for t in &o.killing_tests {
            per_test.entry(*t).or_default().insert(o.id.clone());
        }
        if o.killed {
            killed.insert(o.id.clone());
        } else {
            alive.insert(o.id.clone());
        }
    }
    let score = MutationScore::from_counts(killed.len() as u64, alive.len() as u64);
    MutationReport { per_test, killed, alive, score, mutants: outcomes }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReportDocument<'a> {
    schema: &'a str,
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    total_mutants: usize,
    total_killed: usize,
    total_alive: usize,
    #[serde(flatten)]
    report: &'a MutationReport,
}

/// The `report.json` document.
pub fn save_report(report: &MutationReport, provenance: Option<&Provenance>) -> String {
    to_json(&ReportDocument {
        schema: "tvcreeper.report",
        version: 1,
        provenance,
        total_mutants: report.killed.len() + report.alive.len(),
        total_killed: report.killed.len(),
        total_alive: report.alive.len(),
        report,
    })
}

/// Plain-text table: one row per test path with the mutants it killed first,
/// then the campaign totals on the first row.
pub fn render_table(case_study: &str, report: &MutationReport, tests: usize) -> String {
    let header =
        ["Case Study", "Generated Path", "Mut. Killed", "Total Mut. Killed", "Mut. Alive", "Total Mut. Score %"];
    let mut rows: Vec<[String; 6]> = Vec::new();
    let first = report.first_kills(tests);
    for (t, kills) in first.iter().enumerate() {
        let lead = t == 0;
        rows.push([
            if lead { case_study.to_string() } else { String::new() },
            format!("Path {}", t + 1),
            kills.to_string(),
            if lead { report.killed.len().to_string() } else { String::new() },
            if lead { report.alive.len().to_string() } else { String::new() },
            if lead { report.score.to_string() } else { String::new() },
        ]);
    }
    if rows.is_empty() {
        rows.push([
            case_study.to_string(),
            "-".into(),
            "0".into(),
            report.killed.len().to_string(),
            report.alive.len().to_string(),
            report.score.to_string(),
        ]);
    }
    let widths: Vec<usize> =
        (0..6).map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0)).collect();
    let line = |cells: &[&str]| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(&header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
    for r in &rows {
        out.push_str(&line(&r.iter().map(String::as_str).collect::<Vec<_>>()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::{enumerate_mutants, mutation_score, Score};
    use crate::testgen::TestCase;
    use crate::tvsim::{load_app_spec, Key};

    fn spec() -> AppSpec {
        load_app_spec(
            r#"{"name":"t","rootScreen":"s","screens":[{"id":"s","initialFocus":"a","widgets":[
            {"id":"a","kind":"action","effects":[{"kind":"fetch-resource","argument":"u"},{"kind":"terminal-action","argument":"A"}]},
            {"id":"b","kind":"action","effects":[{"kind":"lookup-element","argument":"x"},{"kind":"terminal-action","argument":"B"}]},
            {"id":"c","kind":"action","effects":[{"kind":"set-attribute","argument":"class"},{"kind":"terminal-action","argument":"C"}]}],
            "nav":{"a":{"Right":"b"},"b":{"Right":"c","Left":"a"}}}]}"#,
        )
        .unwrap()
    }

    fn suite() -> TestSuite {
        let t = |nodes: &[&str], keys: &[Key]| TestCase {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: vec![],
            keys: keys.to_vec(),
        };
        TestSuite {
            tests: vec![t(&["s/a", "s/a!A"], &[Key::Ok]), t(&["s/a", "s/b", "s/b!B"], &[Key::Right, Key::Ok])],
            covered_edges: Default::default(),
            uncoverable: Default::default(),
        }
    }

    #[test]
    fn reached_sites_are_killed() {
        let ops = MutationOperator::ALL.into_iter().collect();
        let ms = enumerate_mutants(&spec(), &ops, None);
        assert_eq!(ms.len(), 3);
        let report = run_campaign(&spec(), &suite(), &ms, None, 2);
        assert_eq!(report.killed.iter().collect::<Vec<_>>(), ["NEE:s/b/0", "RAR:s/a/0"]);
        assert_eq!(report.alive.iter().collect::<Vec<_>>(), ["NEA:s/c/0"]);
        assert_eq!(report.score, MutationScore::Percent(mutation_score(2, 1).unwrap()));
        assert_eq!(report.per_test[&0].len(), 1);
        assert_eq!(report.first_kills(2), [1, 1]);
        let rar = report.mutants.iter().find(|o| o.id == "RAR:s/a/0").unwrap();
        assert_eq!(rar.channels, BTreeSet::from([KillChannel::Fault]));
    }

    #[test]
    fn zero_mutants() {
        let report = run_campaign(&spec(), &suite(), &[], None, 1);
        assert_eq!(report.score, MutationScore::NoMutants);
        assert!(save_report(&report, None).contains("\"score\": \"no-mutants\""));
        assert!(render_table("t", &report, 2).contains("no-mutants"));
    }

    #[test]
    fn table_layout() {
        let ops = MutationOperator::ALL.into_iter().collect();
        let report = run_campaign(&spec(), &suite(), &enumerate_mutants(&spec(), &ops, None), None, 1);
        let table = render_table("Tiny", &report, 2);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("| Case Study | Generated Path |"));
        assert!(lines[2].contains("Tiny") && lines[2].contains("66.7"));
        assert_eq!(Score(667).to_string(), "66.7");
    }
}
