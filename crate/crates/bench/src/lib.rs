//! Benchmark harness: datasets, synthetic corpus generation, the LLM
//! gateway with replay caching, the evaluation runner, and report output.

pub mod dataset;
pub mod exemplars;
pub mod gateway;
pub mod report;
pub mod runner;
pub mod synth;

/// Step-2 solver program shown verbatim in extraction-method prompts.
/// Never executed by the harness — the native solver produces answers.
pub const SOLVER_SOURCE: &str = include_str!("../data/solver.py");
