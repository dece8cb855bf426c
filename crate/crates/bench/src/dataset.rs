//! Line-delimited JSON datasets and seeded sampling.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use tqa_core::temporal::AnswerSet;

/// Dataset partition label. `L2`/`L3` are event-time vs event-event
/// difficulty levels; `easy`/`hard` are the coarse alternative labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Split {
    #[serde(rename = "l2", alias = "L2")]
    L2,
    #[serde(rename = "l3", alias = "L3")]
    L3,
    #[serde(rename = "easy")]
    Easy,
    #[serde(rename = "hard")]
    Hard,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::L2 => "l2",
            Split::L3 => "l3",
            Split::Easy => "easy",
            Split::Hard => "hard",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One benchmark question. `multi` is derived from gold arity at load time,
/// never read from the file.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetItem {
    pub id: String,
    pub question: String,
    pub context: String,
    pub gold: AnswerSet,
    pub split: Split,
    pub multi: bool,
}

/// On-disk line schema.
#[derive(Debug, Serialize, Deserialize)]
struct RawItem {
    id: String,
    question: String,
    context: String,
    answers: Vec<String>,
    split: Split,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset file not found: {0}")]
    FileNotFound(String),
    #[error("line {line}: {message}")]
    SchemaError { line: usize, message: String },
    #[error("sample size {requested} exceeds dataset size {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("sample size must be positive")]
    EmptySample,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parse one line-delimited JSON dataset file. Malformed lines abort with
/// their 1-based line number; blank lines are skipped.
pub fn load_dataset(path: &Path) -> Result<Vec<DatasetItem>, DatasetError> {
    if !path.exists() {
        return Err(DatasetError::FileNotFound(path.display().to_string()));
    }
    let text = fs::read_to_string(path)?;
    let mut items = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawItem =
            serde_json::from_str(line).map_err(|e| DatasetError::SchemaError {
                line: idx + 1,
                message: e.to_string(),
            })?;
        let gold = AnswerSet::new(raw.answers.iter().map(|a| a.trim().to_string()));
        if gold.is_empty() {
            return Err(DatasetError::SchemaError {
                line: idx + 1,
                message: "answers must be non-empty".to_string(),
            });
        }
        let multi = gold.len() > 1;
        items.push(DatasetItem {
            id: raw.id,
            question: raw.question,
            context: raw.context,
            gold,
            split: raw.split,
            multi,
        });
    }
    Ok(items)
}

/// Serialize items back to the line schema (used by `synth`).
pub fn write_dataset(path: &Path, items: &[DatasetItem]) -> Result<(), DatasetError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut out = String::new();
    for item in items {
        let raw = RawItem {
            id: item.id.clone(),
            question: item.question.clone(),
            context: item.context.clone(),
            answers: item.gold.entities().to_vec(),
            split: item.split,
        };
        out.push_str(&serde_json::to_string(&raw).expect("schema serializes"));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Uniform sample of `n` items without replacement, deterministic for a
/// given seed, preserving the items' original relative order.
pub fn sample_items(
    items: &[DatasetItem],
    n: usize,
    seed: u64,
) -> Result<Vec<DatasetItem>, DatasetError> {
    if n == 0 {
        return Err(DatasetError::EmptySample);
    }
    if n > items.len() {
        return Err(DatasetError::SampleTooLarge {
            requested: n,
            available: items.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index_sample(&mut rng, items.len(), n).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| items[i].clone()).collect())
}
