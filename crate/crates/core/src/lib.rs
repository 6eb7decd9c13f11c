//! Model-based testing for remote-control-driven app UIs.
//!
//! The pipeline: [`crawler::crawl`] a simulated app ([`tvsim`]) into a
//! [`model::MegaModel`], cut a destination [`model::SubModel`] out of it,
//! [`testgen::generate_tests`] an all-edge-coverage suite, run it with
//! [`executor`], and score it with [`mutation`] campaigns.

pub mod artifact;
pub mod crawler;
pub mod executor;
pub mod fixtures;
pub mod model;
pub mod mutation;
pub mod testgen;
pub mod tvsim;

pub type NodeId = String;
pub type EdgeId = String;

pub use crawler::{brute_force_model, crawl, CrawlConfig, CrawlError, CrawlResult};
pub use executor::{execute_suite, execute_test, ExecError, Outcome, Verdict};
pub use model::{export_dot, extract_sub_model, load_model, save_model, MegaModel, ModelError, SubModel};
pub use mutation::{
    apply_mutant, enumerate_mutants, mutation_score, run_campaign, Mutant, MutationOperator, MutationReport,
};
pub use testgen::{build_cover, candidate_walk, generate_tests, CoverElement, GenError, TestCase, TestSuite};
pub use tvsim::{AppSpec, Key};
