//! Per-item evaluation: prompt building, gateway calls, answer extraction,
//! scoring, and the ordered concurrent join.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use tqa_core::extract::parse_extraction_block;
use tqa_core::metrics::{aggregate_report, score_question, EvalReport, ItemResult};
use tqa_core::prompt::{
    build_cot_prompt, build_extraction_prompt, build_no_exec_prompt, build_standard_prompt,
    parse_model_answer, Exemplar, Method,
};
use tqa_core::temporal::AnswerSet;

use crate::dataset::DatasetItem;
use crate::exemplars::ExemplarLibrary;
use crate::gateway::{CompletionRequest, Gateway, GatewayError};
use crate::SOLVER_SOURCE;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub method: Method,
    pub model_id: String,
    pub max_tokens: u32,
    /// In-flight completion limit.
    pub concurrency: usize,
}

impl RunOptions {
    pub fn new(method: Method, model_id: impl Into<String>) -> Self {
        RunOptions {
            method,
            model_id: model_id.into(),
            max_tokens: 256,
            concurrency: 4,
        }
    }
}

/// An item whose model output could not be turned into an answer. Scored
/// sem=0, f1=0 and listed in the report's failure section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureRecord {
    pub id: String,
    pub stage: &'static str,
    pub reason: String,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub method: Method,
    pub model_id: String,
    /// One aggregated report per split label, plus per-item scores.
    pub per_split: BTreeMap<String, EvalReport>,
    pub failures: Vec<FailureRecord>,
    pub n: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error("exemplar library: {0}")]
    Exemplar(#[from] crate::exemplars::MissingExemplar),
    #[error("prompt construction: {0}")]
    Prompt(tqa_core::prompt::PromptError),
    #[error("no items to evaluate")]
    EmptyRun,
}

fn request(prompt: String, opts: &RunOptions, stop: &[&str]) -> CompletionRequest {
    CompletionRequest::new(prompt, opts.model_id.clone())
        .with_max_tokens(opts.max_tokens)
        .with_stop(stop.iter().copied())
}

/// Step-1 extraction request (extract-code and the no-exec ablation).
pub fn extraction_request(
    item: &DatasetItem,
    ex: &Exemplar,
    opts: &RunOptions,
) -> Result<CompletionRequest, RunError> {
    let prompt =
        build_extraction_prompt(&item.question, &item.context, ex).map_err(RunError::Prompt)?;
    Ok(request(prompt, opts, &["\n\n"]))
}

/// Single request for the standard and CoT baselines.
pub fn baseline_request(
    item: &DatasetItem,
    ex: &Exemplar,
    opts: &RunOptions,
) -> Result<CompletionRequest, RunError> {
    match &opts.method {
        Method::Standard => Ok(request(
            build_standard_prompt(&item.question, &item.context, ex, item.multi),
            opts,
            &["\n"],
        )),
        Method::Cot(ordering) => {
            let prompt = build_cot_prompt(&item.question, &item.context, ex, *ordering, item.multi)
                .map_err(RunError::Prompt)?;
            Ok(request(prompt, opts, &["\n\n"]))
        }
        _ => unreachable!("baseline_request is only called for baselines"),
    }
}

/// Step-2 request for the no-exec ablation, given the canonical rendering
/// of the parsed step-1 block.
pub fn noexec_request(
    item: &DatasetItem,
    ex: &Exemplar,
    extraction_block: &str,
    opts: &RunOptions,
) -> CompletionRequest {
    let prompt = build_no_exec_prompt(
        &item.question,
        &item.context,
        ex,
        extraction_block,
        SOLVER_SOURCE,
    );
    request(prompt, opts, &["\n"])
}

/// The step-1 cue consumes the `extracted_info = ` left-hand side, so the
/// raw completion usually starts at the dictionary literal.
pub fn restore_extraction_block(completion: &str) -> String {
    let trimmed = completion.trim();
    if trimmed.starts_with("extracted_info") {
        trimmed.to_string()
    } else {
        format!("extracted_info = {trimmed}")
    }
}

/// Evaluate one item. `Ok(Err(...))` is a per-item failure (scored zero);
/// `Err(...)` is a configuration/gateway failure that aborts the run.
fn run_item(
    gateway: &Gateway,
    lib: &ExemplarLibrary,
    opts: &RunOptions,
    item: &DatasetItem,
) -> Result<Result<AnswerSet, FailureRecord>, RunError> {
    let fail = |stage: &'static str, reason: String| FailureRecord {
        id: item.id.clone(),
        stage,
        reason,
    };
    let ex = lib.get(&opts.method, item.multi)?;
    match &opts.method {
        Method::Standard | Method::Cot(_) => {
            let completion = gateway.complete(&baseline_request(item, ex, opts)?)?;
            Ok(parse_model_answer(&completion, &opts.method, item.multi)
                .map_err(|e| fail("answer", e.to_string())))
        }
        Method::ExtractCode => {
            let completion = gateway.complete(&extraction_request(item, ex, opts)?)?;
            let block = restore_extraction_block(&completion);
            let extraction = match parse_extraction_block(&block) {
                Ok(x) => x,
                Err(e) => return Ok(Err(fail("extraction-parse", e.to_string()))),
            };
            Ok(extraction.solve().map_err(|e| fail("solve", e.to_string())))
        }
        Method::ExtractCodeNoExec => {
            let completion = gateway.complete(&extraction_request(item, ex, opts)?)?;
            let block = restore_extraction_block(&completion);
            let extraction = match parse_extraction_block(&block) {
                Ok(x) => x,
                Err(e) => return Ok(Err(fail("extraction-parse", e.to_string()))),
            };
            let canonical = tqa_core::extract::render_extraction_block(&extraction);
            let answer_text = gateway.complete(&noexec_request(item, ex, &canonical, opts))?;
            Ok(parse_model_answer(&answer_text, &opts.method, item.multi)
                .map_err(|e| fail("answer", e.to_string())))
        }
    }
}

/// Run `f` over `items` with up to `concurrency` workers; results are
/// returned in input order.
fn parallel_map_ordered<T, I, F>(items: &[I], concurrency: usize, f: F) -> Vec<T>
where
    T: Send,
    I: Sync,
    F: Fn(&I) -> T + Sync,
{
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..concurrency.max(1).min(items.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let out = f(&items[i]);
                results.lock().expect("results lock")[i] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|slot| slot.expect("every index visited"))
        .collect()
}

/// Full evaluation: prompts, completions, scoring, per-split aggregation.
/// Parse failures score zero; gateway errors abort.
pub fn run_pipeline(
    gateway: &Gateway,
    lib: &ExemplarLibrary,
    opts: &RunOptions,
    items: &[DatasetItem],
) -> Result<RunOutcome, RunError> {
    if items.is_empty() {
        return Err(RunError::EmptyRun);
    }
    let outcomes = parallel_map_ordered(items, opts.concurrency, |item| {
        run_item(gateway, lib, opts, item)
    });

    let mut per_split: BTreeMap<String, Vec<ItemResult>> = BTreeMap::new();
    let mut failures = Vec::new();
    for (item, outcome) in items.iter().zip(outcomes) {
        let predicted = match outcome? {
            Ok(answer) => answer,
            Err(record) => {
                failures.push(record);
                AnswerSet::empty()
            }
        };
        let score = score_question(&predicted, &item.gold)
            .expect("gold non-empty by dataset invariant");
        per_split
            .entry(item.split.as_str().to_string())
            .or_default()
            .push(ItemResult {
                id: item.id.clone(),
                score,
                predicted,
            });
    }

    let per_split = per_split
        .into_iter()
        .map(|(split, results)| {
            let report = aggregate_report(results, opts.method, split.clone())
                .expect("split groups are non-empty");
            (split, report)
        })
        .collect();

    Ok(RunOutcome {
        method: opts.method,
        model_id: opts.model_id.clone(),
        per_split,
        failures,
        n: items.len(),
    })
}
