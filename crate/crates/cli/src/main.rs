//! `tvcreeper`: crawl an app spec, cut a sub-model, generate and run tests,
//! and score them with mutants. Every artifact records the hash of the file
//! it came from and of the root app spec.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use tvcreeper_core::artifact::{content_hash, Provenance};
use tvcreeper_core::executor::save_verdicts;
use tvcreeper_core::model::{
    load_model_document, load_sub_model_document, save_model_document, save_sub_model_document,
};
use tvcreeper_core::mutation::{render_table, save_mutants, save_report, MutationScore};
use tvcreeper_core::testgen::{load_suite, save_suite, to_keys_text};
use tvcreeper_core::tvsim::{derive_nav_from_grid, load_app_spec};
use tvcreeper_core::{
    crawl, enumerate_mutants, execute_suite, export_dot, extract_sub_model, generate_tests, run_campaign, AppSpec,
    CrawlConfig, MutationOperator,
};

const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_UNCOVERABLE: u8 = 3;
const EXIT_FAILED_TESTS: u8 = 4;
const EXIT_NO_MUTANTS: u8 = 5;
const EXIT_STALE: u8 = 6;

#[derive(Parser)]
#[command(name = "tvcreeper", version, about = "Model-based testing for remote-control app UIs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore an app spec and write its model.
    Crawl {
        spec: PathBuf,
        /// Start widget, when the root screen declares none.
        #[arg(long)]
        focus: Option<String>,
        /// Stop after this many probe key presses.
        #[arg(long)]
        max_actions: Option<u64>,
        #[arg(long, short, default_value = "model.json")]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Keep only what lies on walks from the start to the destinations.
    Submodel {
        model: PathBuf,
        /// Node id or unique node label; repeatable.
        #[arg(long = "dest", required = true)]
        destinations: Vec<String>,
        #[arg(long, short, default_value = "submodel.json")]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate an all-edge-coverage suite from a sub-model.
    Gen {
        submodel: PathBuf,
        #[arg(long, short, default_value = "suite.json")]
        out: PathBuf,
        /// Also write the key sequences, one key per line.
        #[arg(long)]
        keys: Option<PathBuf>,
    },
    /// Execute a suite against the app spec.
    Run {
        spec: PathBuf,
        suite: PathBuf,
        #[arg(long)]
        focus: Option<String>,
        #[arg(long, short, default_value = "verdicts.json")]
        out: PathBuf,
    },
    /// Seed mutants one at a time and score the suite.
    Mutate {
        spec: PathBuf,
        suite: PathBuf,
        /// Comma-separated operator acronyms; all nine by default.
        #[arg(long, value_delimiter = ',')]
        ops: Vec<String>,
        /// Only mutate widgets present in this sub-model.
        #[arg(long)]
        scope: Option<PathBuf>,
        #[arg(long)]
        focus: Option<String>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, short, default_value = "report.json")]
        out: PathBuf,
        #[arg(long)]
        mutants: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

/// An error carrying its process exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type Outcome = Result<u8, Failure>;

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

fn fail(code: u8, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).with_context(|| format!("reading {}", path.display())).code(EXIT_IO)
}

fn text(path: &Path, bytes: Vec<u8>) -> Result<String, Failure> {
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display())).code(EXIT_INVALID)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display())).code(EXIT_IO)
}

/// The spec with grid navigation derived, and the hash of its file.
fn load_spec(path: &Path) -> Result<(AppSpec, String), Failure> {
    let bytes = read(path)?;
    let hash = content_hash(&bytes);
    let spec = load_app_spec(&text(path, bytes)?)
        .with_context(|| format!("invalid app spec {}", path.display()))
        .code(EXIT_INVALID)?;
    Ok((derive_nav_from_grid(&spec), hash))
}

fn require_provenance(p: Option<Provenance>, path: &Path) -> Result<Provenance, Failure> {
    p.ok_or_else(|| fail(EXIT_STALE, anyhow!("{} carries no provenance header", path.display())))
}

fn check_spec(p: &Provenance, spec_hash: &str, path: &Path) -> Result<(), Failure> {
    if p.spec != spec_hash {
        return Err(fail(EXIT_STALE, anyhow!("{} was derived from a different app spec", path.display())));
    }
    Ok(())
}

fn cmd_crawl(
    spec_path: &Path,
    focus: Option<String>,
    max_actions: Option<u64>,
    out: &Path,
    dot: Option<&Path>,
) -> Outcome {
    if max_actions == Some(0) {
        return Err(fail(EXIT_INVALID, anyhow!("--max-actions must be at least 1")));
    }
    let (spec, hash) = load_spec(spec_path)?;
    let result = crawl(&spec, &CrawlConfig { max_actions, focus }).code(EXIT_INVALID)?;
    let prov = Provenance { upstream: hash.clone(), spec: hash };
    write(out, &save_model_document(&result.model, Some(&prov)))?;
    if let Some(dot) = dot {
        write(dot, &export_dot(&result.model))?;
    }
    println!(
        "{} nodes, {} edges, {} end nodes, {} key presses{}",
        result.model.nodes().len(),
        result.model.edges().len(),
        result.model.end_nodes().len(),
        result.actions_used,
        if result.truncated { " (truncated)" } else { "" }
    );
    Ok(0)
}

fn cmd_submodel(model_path: &Path, destinations: &[String], out: &Path, dot: Option<&Path>) -> Outcome {
    let bytes = read(model_path)?;
    let upstream = content_hash(&bytes);
    let (model, prov) = load_model_document(&text(model_path, bytes)?).code(EXIT_INVALID)?;
    let prov = require_provenance(prov, model_path)?;
    let mut ids = Vec::new();
    for d in destinations {
        let id = model.resolve_node(d).ok_or_else(|| fail(EXIT_INVALID, anyhow!("unknown destination `{d}`")))?;
        ids.push(id.to_string());
    }
    let sub = extract_sub_model(&model, ids.iter().map(String::as_str)).code(EXIT_INVALID)?;
    write(out, &save_sub_model_document(&sub, Some(&Provenance { upstream, spec: prov.spec })))?;
    if let Some(dot) = dot {
        write(dot, &export_dot(sub.graph()))?;
    }
    println!("{} nodes, {} edges", sub.graph().nodes().len(), sub.graph().edges().len());
    Ok(0)
}

fn cmd_gen(sub_path: &Path, out: &Path, keys: Option<&Path>) -> Outcome {
    let bytes = read(sub_path)?;
    let upstream = content_hash(&bytes);
    let (sub, prov) = load_sub_model_document(&text(sub_path, bytes)?).code(EXIT_INVALID)?;
    let prov = require_provenance(prov, sub_path)?;
    let suite = generate_tests(&sub).code(EXIT_INVALID)?;
    write(out, &save_suite(&suite, Some(&Provenance { upstream, spec: prov.spec })))?;
    if let Some(keys) = keys {
        write(keys, &to_keys_text(&suite))?;
    }
    println!("{} tests covering {} edges", suite.tests.len(), suite.covered_edges.len());
    if !suite.uncoverable.is_empty() {
        for e in &suite.uncoverable {
            eprintln!("uncoverable edge: {e}");
        }
        return Ok(EXIT_UNCOVERABLE);
    }
    Ok(0)
}

fn load_checked_suite(path: &Path, spec_hash: &str) -> Result<(tvcreeper_core::TestSuite, String), Failure> {
    let bytes = read(path)?;
    let upstream = content_hash(&bytes);
    let (suite, prov) = load_suite(&text(path, bytes)?).code(EXIT_INVALID)?;
    check_spec(&require_provenance(prov, path)?, spec_hash, path)?;
    Ok((suite, upstream))
}

fn cmd_run(spec_path: &Path, suite_path: &Path, focus: Option<&str>, out: &Path) -> Outcome {
    let (spec, spec_hash) = load_spec(spec_path)?;
    let (suite, upstream) = load_checked_suite(suite_path, &spec_hash)?;
    let results = execute_suite(&spec, &suite, focus);
    write(out, &save_verdicts(&results, Some(&Provenance { upstream, spec: spec_hash })))?;
    let passed = results.iter().filter(|r| matches!(r, Ok(v) if v.passed())).count();
    println!("{passed}/{} tests passed", results.len());
    Ok(if passed == results.len() { 0 } else { EXIT_FAILED_TESTS })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mutate(
    spec_path: &Path,
    suite_path: &Path,
    ops: &[String],
    scope: Option<&Path>,
    focus: Option<&str>,
    jobs: usize,
    out: &Path,
    mutants_out: Option<&Path>,
    table: Option<&Path>,
) -> Outcome {
    let (spec, spec_hash) = load_spec(spec_path)?;
    let (suite, upstream) = load_checked_suite(suite_path, &spec_hash)?;
    let operators: BTreeSet<MutationOperator> = if ops.is_empty() {
        MutationOperator::ALL.into_iter().collect()
    } else {
        ops.iter().map(|o| o.parse()).collect::<Result<_, _>>().code(EXIT_INVALID)?
    };
    let scope = match scope {
        Some(path) => {
            let (sub, prov) = load_sub_model_document(&text(path, read(path)?)?).code(EXIT_INVALID)?;
            check_spec(&require_provenance(prov, path)?, &spec_hash, path)?;
            Some(sub)
        }
        None => None,
    };
    let mutants = enumerate_mutants(&spec, &operators, scope.as_ref());
    let prov = Provenance { upstream, spec: spec_hash };
    if let Some(path) = mutants_out {
        write(path, &save_mutants(&mutants, Some(&prov)))?;
    }
    let report = run_campaign(&spec, &suite, &mutants, focus, jobs);
    write(out, &save_report(&report, Some(&prov)))?;
    if let Some(path) = table {
        write(path, &render_table(&spec.name, &report, suite.tests.len()))?;
    }
    println!(
        "{} mutants: {} killed, {} alive, score {}",
        mutants.len(),
        report.killed.len(),
        report.alive.len(),
        report.score
    );
    Ok(if report.score == MutationScore::NoMutants { EXIT_NO_MUTANTS } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Crawl { spec, focus, max_actions, out, dot } => {
            cmd_crawl(&spec, focus, max_actions, &out, dot.as_deref())
        }
        Command::Submodel { model, destinations, out, dot } => {
            cmd_submodel(&model, &destinations, &out, dot.as_deref())
        }
        Command::Gen { submodel, out, keys } => cmd_gen(&submodel, &out, keys.as_deref()),
        Command::Run { spec, suite, focus, out } => cmd_run(&spec, &suite, focus.as_deref(), &out),
        Command::Mutate { spec, suite, ops, scope, focus, jobs, out, mutants, table } => cmd_mutate(
            &spec,
            &suite,
            &ops,
            scope.as_deref(),
            focus.as_deref(),
            jobs,
            &out,
            mutants.as_deref(),
            table.as_deref(),
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ops_split_on_commas() {
        let cli = Cli::try_parse_from(["tvcreeper", "mutate", "a.json", "s.json", "--ops", "NEA,rar"]).unwrap();
        let Command::Mutate { ops, jobs, .. } = cli.command else { panic!("parsed another command") };
        assert_eq!(ops, ["NEA", "rar"]);
        assert_eq!(jobs, 0);
    }
}
