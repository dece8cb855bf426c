use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use tqa_bench::dataset::{load_dataset, sample_items, write_dataset, DatasetItem};
use tqa_bench::exemplars::ExemplarLibrary;
use tqa_bench::gateway::{
    load_live_settings, Backend, Gateway, GatewayError, HttpTransport, LiveConfig,
};
use tqa_bench::report::{emit_report, render_table, RunReport};
use tqa_bench::runner::{extraction_request, run_pipeline, RunError, RunOptions};
use tqa_bench::synth::generate_synthetic;

use tqa_core::extract::render_extraction_block;
use tqa_core::metrics::{aggregate_report, score_question, ItemResult};
use tqa_core::prompt::Method;
use tqa_core::temporal::AnswerSet;

#[derive(Parser)]
#[command(name = "tqa", about = "Temporal QA benchmark harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a method over a dataset and emit a report.
    Run(RunArgs),
    /// Generate an oracle-verified synthetic dataset.
    Synth(SynthArgs),
    /// Score a prediction file against gold answers.
    Score(ScoreArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Line-delimited JSON dataset.
    #[arg(long)]
    dataset: PathBuf,
    /// standard | cot-qcra | cot-cqra | cot-qcar | cot-cqar | extract-code | extract-code-noexec
    #[arg(long)]
    method: String,
    /// live | replay | fixture
    #[arg(long)]
    backend: String,
    /// Model identifier recorded in requests and reports.
    #[arg(long, default_value = "default-model")]
    model: String,
    /// Evaluate a random subset of this size.
    #[arg(long)]
    sample: Option<usize>,
    /// Sampling seed; required whenever --sample is smaller than the dataset.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json, failures.json, table.txt.
    #[arg(long)]
    out: PathBuf,
    /// Replay/fixture store directory (one JSON entry per cache key).
    #[arg(long)]
    store: Option<PathBuf>,
    /// Live-mode config file (endpoint, credential_env, timeout_secs, cache_dir).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Maximum completion tokens per request.
    #[arg(long, default_value_t = 256)]
    max_tokens: u32,
    /// In-flight completion limit.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    /// Dataset output path (.jsonl).
    #[arg(long)]
    out: PathBuf,
    /// Also seed this replay store with ground-truth extraction completions
    /// so `run --method extract-code --backend replay` works offline.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Model id the seeded store entries should match.
    #[arg(long, default_value = "default-model")]
    model: String,
    #[arg(long, default_value_t = 256)]
    max_tokens: u32,
}

#[derive(Args)]
struct ScoreArgs {
    /// Predictions: line-delimited JSON {"id": str, "answers": [str]}.
    #[arg(long)]
    pred: PathBuf,
    /// Gold dataset in the standard line schema.
    #[arg(long)]
    gold: PathBuf,
}

/// Exit codes: 0 success, 1 config error, 2 fixture/replay miss.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Score(args) => cmd_score(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::FixtureMiss(key)) => {
            eprintln!("error: no stored completion for key {key}");
            ExitCode::from(2)
        }
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    Config(String),
    FixtureMiss(String),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Gateway(GatewayError::ReplayMiss(key)) => CliError::FixtureMiss(key),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn config_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let method = Method::parse_name(&args.method)
        .ok_or_else(|| CliError::Config(format!("unknown method: {}", args.method)))?;

    let backend = match args.backend.as_str() {
        "replay" | "fixture" => {
            // Both read the same on-disk store; "fixture" loads it eagerly
            // into memory.
            let dir = args.store.clone().ok_or_else(|| {
                CliError::Config("--store is required for replay/fixture backends".to_string())
            })?;
            if !dir.is_dir() {
                return Err(CliError::Config(format!(
                    "store directory not found: {}",
                    dir.display()
                )));
            }
            if args.backend == "replay" {
                Backend::Replay { dir }
            } else {
                let mut entries = HashMap::new();
                for entry in fs::read_dir(&dir).map_err(config_err)? {
                    let path = entry.map_err(config_err)?.path();
                    if path.extension().is_some_and(|e| e == "json") {
                        let text = fs::read_to_string(&path).map_err(config_err)?;
                        let cached: tqa_bench::gateway::CacheEntry =
                            serde_json::from_str(&text).map_err(config_err)?;
                        entries.insert(cached.key, cached.completion);
                    }
                }
                Backend::Fixture { entries }
            }
        }
        "live" => {
            let config_path = args.config.clone().ok_or_else(|| {
                CliError::Config("--config is required for the live backend".to_string())
            })?;
            let settings = load_live_settings(&config_path).map_err(config_err)?;
            Backend::Live(LiveConfig {
                endpoint: settings.endpoint,
                credential_env: settings.credential_env,
                cache_dir: settings.cache_dir,
                timeout_secs: settings.timeout_secs,
                transport: Arc::new(HttpTransport),
            })
        }
        other => return Err(CliError::Config(format!("unknown backend: {other}"))),
    };

    let items = load_dataset(&args.dataset).map_err(config_err)?;
    let items = match args.sample {
        Some(n) if n < items.len() => {
            let seed = args.seed.ok_or_else(|| {
                CliError::Config("--seed is required when --sample is smaller than the dataset".to_string())
            })?;
            sample_items(&items, n, seed).map_err(config_err)?
        }
        Some(n) => sample_items(&items, n, args.seed.unwrap_or(0)).map_err(config_err)?,
        None => items,
    };

    let gateway = Gateway::new(backend);
    let lib = ExemplarLibrary::builtin();
    let opts = RunOptions {
        method,
        model_id: args.model,
        max_tokens: args.max_tokens,
        concurrency: args.concurrency,
    };
    let outcome = run_pipeline(&gateway, &lib, &opts, &items)?;
    let report = RunReport::from_outcome(&outcome);
    emit_report(&report, &args.out).map_err(config_err)?;
    print!("{}", render_table(std::slice::from_ref(&report)));
    if !report.failures.is_empty() {
        println!("{} item(s) failed to parse; see failures.json", report.failures.len());
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Config("--count must be positive".to_string()));
    }
    let corpus = generate_synthetic(args.count, args.seed);
    let items: Vec<DatasetItem> = corpus.iter().map(|(item, _)| item.clone()).collect();
    write_dataset(&args.out, &items).map_err(config_err)?;

    if let Some(store) = &args.store {
        let opts = RunOptions {
            method: Method::ExtractCode,
            model_id: args.model,
            max_tokens: args.max_tokens,
            concurrency: 1,
        };
        let lib = ExemplarLibrary::builtin();
        for (item, extraction) in &corpus {
            let ex = lib.get(&opts.method, item.multi).map_err(config_err)?;
            let req = extraction_request(item, ex, &opts).map_err(|e| config_err(e))?;
            tqa_bench::gateway::write_cache_entry(
                store,
                &req,
                &render_extraction_block(extraction),
            )
            .map_err(config_err)?;
        }
    }
    println!("wrote {} items to {}", items.len(), args.out.display());
    Ok(())
}

#[derive(serde::Deserialize)]
struct PredLine {
    id: String,
    answers: Vec<String>,
}

fn cmd_score(args: ScoreArgs) -> Result<(), CliError> {
    let gold_items = load_dataset(&args.gold).map_err(config_err)?;
    let gold_by_id: HashMap<&str, &DatasetItem> =
        gold_items.iter().map(|i| (i.id.as_str(), i)).collect();

    let pred_text = fs::read_to_string(&args.pred).map_err(config_err)?;
    let mut results = Vec::new();
    for (idx, line) in pred_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let pred: PredLine = serde_json::from_str(line)
            .map_err(|e| CliError::Config(format!("pred line {}: {e}", idx + 1)))?;
        let gold = gold_by_id
            .get(pred.id.as_str())
            .ok_or_else(|| CliError::Config(format!("pred id not in gold: {}", pred.id)))?;
        let predicted = AnswerSet::new(pred.answers);
        let score = score_question(&predicted, &gold.gold).map_err(config_err)?;
        results.push(ItemResult {
            id: pred.id,
            score,
            predicted,
        });
    }
    if results.is_empty() {
        return Err(CliError::Config("prediction file is empty".to_string()));
    }
    let report = aggregate_report(results, Method::Standard, "all".to_string())
        .map_err(config_err)?;
    println!(
        "n = {}  SEM = {}  F1 = {}",
        report.n,
        report.sem_display(),
        report.f1_display()
    );
    Ok(())
}
