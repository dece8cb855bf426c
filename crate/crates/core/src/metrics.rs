//! Strict exact match (SEM) and answer-level F1.
//!
//! SEM is 1 only when the normalized prediction and gold answer sets are
//! equal: every gold answer matched and nothing extra. Answer-level F1
//! treats whole answers, not tokens, as the unit of precision and recall.
//! Normalization follows the SQuAD convention: lowercase, strip
//! punctuation, drop articles, collapse whitespace.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::prompt::Method;
use crate::temporal::AnswerSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    EmptyGold,
    EmptyRun,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptyGold => write!(f, "gold answer set is empty"),
            MetricsError::EmptyRun => write!(f, "no items to aggregate"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// SQuAD-style answer normalization.
pub fn normalize_answer(text: &str) -> String {
    let mut cleaned = String::new();
    for ch in text.chars() {
        for lc in ch.to_lowercase() {
            if lc.is_alphanumeric() || lc.is_whitespace() {
                cleaned.push(lc);
            }
        }
    }
    cleaned
        .split_whitespace()
        .filter(|w| !matches!(*w, "a" | "an" | "the"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn normalized_set(answers: &AnswerSet) -> BTreeSet<String> {
    answers
        .entities()
        .iter()
        .map(|e| normalize_answer(e))
        .collect()
}

/// 1 iff the normalized answer sets are equal.
pub fn sem_score(pred: &AnswerSet, gold: &AnswerSet) -> Result<u8, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyGold);
    }
    Ok(u8::from(normalized_set(pred) == normalized_set(gold)))
}

/// Answer-level F1 over normalized answer sets.
pub fn answer_f1(pred: &AnswerSet, gold: &AnswerSet) -> Result<f64, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyGold);
    }
    let pred = normalized_set(pred);
    let gold = normalized_set(gold);
    let matches = pred.intersection(&gold).count() as f64;
    if pred.is_empty() {
        return Ok(0.0);
    }
    let precision = matches / pred.len() as f64;
    let recall = matches / gold.len() as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Per-question scores. `sem == 1` implies `f1 == 1.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuestionScore {
    pub sem: u8,
    pub f1: f64,
}

pub fn score_question(pred: &AnswerSet, gold: &AnswerSet) -> Result<QuestionScore, MetricsError> {
    Ok(QuestionScore {
        sem: sem_score(pred, gold)?,
        f1: answer_f1(pred, gold)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub id: String,
    pub score: QuestionScore,
    pub predicted: AnswerSet,
}

/// Aggregated run results. Percentages are raw arithmetic means times 100;
/// rounding to two decimals happens only at display time.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: Method,
    pub split: String,
    pub n: usize,
    pub sem_pct: f64,
    pub f1_pct: f64,
    pub per_item: Vec<ItemResult>,
}

impl EvalReport {
    pub fn sem_display(&self) -> String {
        alloc::format!("{:.2}", self.sem_pct)
    }

    pub fn f1_display(&self) -> String {
        alloc::format!("{:.2}", self.f1_pct)
    }
}

pub fn aggregate_report(
    per_item: Vec<ItemResult>,
    method: Method,
    split: String,
) -> Result<EvalReport, MetricsError> {
    if per_item.is_empty() {
        return Err(MetricsError::EmptyRun);
    }
    let n = per_item.len();
    let sem_sum: f64 = per_item.iter().map(|i| i.score.sem as f64).sum();
    let f1_sum: f64 = per_item.iter().map(|i| i.score.f1).sum();
    Ok(EvalReport {
        method,
        split,
        n,
        sem_pct: sem_sum / n as f64 * 100.0,
        f1_pct: f1_sum / n as f64 * 100.0,
        per_item,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn answers<const N: usize>(items: [&str; N]) -> AnswerSet {
        AnswerSet::new(items)
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(
            normalize_answer("The May Department Stores Company"),
            "may department stores company"
        );
        assert_eq!(normalize_answer("Canvey Island F.C."), "canvey island fc");
        assert_eq!(
            normalize_answer("  University of  Hamburg "),
            "university of hamburg"
        );
    }

    #[test]
    fn normalization_idempotent() {
        let once = normalize_answer("The A.B. Corp!");
        assert_eq!(normalize_answer(&once), once);
    }

    #[test]
    fn sem_requires_set_equality() {
        let gold = answers(["University of Hamburg"]);
        assert_eq!(sem_score(&gold, &gold).unwrap(), 1);

        let multi_gold = answers([
            "Canvey Island F.C.",
            "Chesham United F.C.",
            "Heybridge Swifts F.C.",
        ]);
        let partial = answers(["Heybridge Swifts F.C."]);
        assert_eq!(sem_score(&partial, &multi_gold).unwrap(), 0);

        // A superset of gold is also wrong.
        let superset = answers(["University of Hamburg", "Extra"]);
        assert_eq!(sem_score(&superset, &gold).unwrap(), 0);
    }

    #[test]
    fn sem_empty_gold_is_error() {
        assert_eq!(
            sem_score(&answers(["x"]), &AnswerSet::empty()),
            Err(MetricsError::EmptyGold)
        );
    }

    #[test]
    fn f1_examples() {
        let pred = answers(["a", "b", "c"]);
        let gold = answers(["a", "b"]);
        let f1 = answer_f1(&pred, &gold).unwrap();
        assert!((f1 - 0.8).abs() < 1e-12);

        assert_eq!(answer_f1(&gold, &gold).unwrap(), 1.0);
        assert_eq!(answer_f1(&answers(["x"]), &gold).unwrap(), 0.0);
        assert_eq!(answer_f1(&AnswerSet::empty(), &gold).unwrap(), 0.0);
    }

    #[test]
    fn sem_one_implies_f1_one() {
        let pred = answers(["The Hamburg University"]);
        let gold = answers(["hamburg university"]);
        let s = score_question(&pred, &gold).unwrap();
        assert_eq!(s.sem, 1);
        assert_eq!(s.f1, 1.0);
    }

    #[test]
    fn aggregate_means() {
        let item = |id: &str, sem: u8, f1: f64| ItemResult {
            id: id.to_string(),
            score: QuestionScore { sem, f1 },
            predicted: AnswerSet::empty(),
        };
        let report = aggregate_report(
            vec![item("a", 1, 1.0), item("b", 0, 0.0)],
            Method::Standard,
            "L2".to_string(),
        )
        .unwrap();
        assert_eq!(report.sem_display(), "50.00");
        assert_eq!(report.f1_display(), "50.00");

        let all_correct = aggregate_report(
            (0..500).map(|i| item(&i.to_string(), 1, 1.0)).collect(),
            Method::ExtractCode,
            "L2".to_string(),
        )
        .unwrap();
        assert_eq!(all_correct.sem_display(), "100.00");
    }

    #[test]
    fn aggregate_matches_hand_computation_on_ten_items() {
        // Hand-computed: sem values sum to 6, f1 values sum to 7.3.
        let sems = [1u8, 0, 1, 1, 0, 1, 0, 1, 1, 0];
        let f1s = [1.0, 0.5, 1.0, 1.0, 0.0, 1.0, 0.8, 1.0, 1.0, 0.0];
        let items: Vec<ItemResult> = sems
            .iter()
            .zip(f1s.iter())
            .enumerate()
            .map(|(i, (&sem, &f1))| ItemResult {
                id: alloc::format!("{i}"),
                score: QuestionScore { sem, f1 },
                predicted: AnswerSet::empty(),
            })
            .collect();
        let report =
            aggregate_report(items, Method::Standard, "easy".to_string()).unwrap();
        assert!((report.sem_pct - 60.0).abs() < 1e-12);
        assert!((report.f1_pct - 73.0).abs() < 1e-9);
    }

    #[test]
    fn empty_run_is_error() {
        assert_eq!(
            aggregate_report(vec![], Method::Standard, "L2".to_string()),
            Err(MetricsError::EmptyRun)
        );
    }
}
