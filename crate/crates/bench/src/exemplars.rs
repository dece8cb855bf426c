//! Built-in one-shot exemplar library, embedded from `data/exemplars.json`.

use std::collections::HashMap;

use serde::Deserialize;

use tqa_core::prompt::{Exemplar, Method};

const BUILTIN_JSON: &str = include_str!("../data/exemplars.json");

#[derive(Debug, Deserialize)]
struct RawExemplar {
    question: String,
    context: String,
    answer: String,
    #[serde(default)]
    reasoning: Option<String>,
    #[serde(default)]
    extraction_block: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawLibrary {
    exemplars: HashMap<String, RawExemplar>,
}

pub struct ExemplarLibrary {
    by_key: HashMap<String, Exemplar>,
}

#[derive(Debug, thiserror::Error)]
#[error("no exemplar for key {0}")]
pub struct MissingExemplar(String);

impl ExemplarLibrary {
    pub fn builtin() -> Self {
        let raw: RawLibrary =
            serde_json::from_str(BUILTIN_JSON).expect("embedded exemplar library is valid json");
        let by_key = raw
            .exemplars
            .into_iter()
            .map(|(k, v)| {
                (
                    k,
                    Exemplar {
                        question: v.question,
                        context: v.context,
                        answer_text: v.answer,
                        reasoning_text: v.reasoning,
                        extraction_block: v.extraction_block,
                    },
                )
            })
            .collect();
        ExemplarLibrary { by_key }
    }

    /// The exemplar key for a method/arity pair. All extraction-style
    /// methods share one exemplar; baselines switch on answer arity.
    fn key(method: &Method, multi: bool) -> String {
        match method {
            Method::ExtractCode | Method::ExtractCodeNoExec => "extraction".to_string(),
            Method::Standard => format!("standard-{}", if multi { "multi" } else { "single" }),
            Method::Cot(_) => format!("cot-{}", if multi { "multi" } else { "single" }),
        }
    }

    pub fn get(&self, method: &Method, multi: bool) -> Result<&Exemplar, MissingExemplar> {
        let key = Self::key(method, multi);
        self.by_key.get(&key).ok_or(MissingExemplar(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tqa_core::extract::parse_extraction_block;
    use tqa_core::prompt::CotOrdering;

    #[test]
    fn builtin_covers_every_method_and_arity() {
        let lib = ExemplarLibrary::builtin();
        for method in Method::ALL {
            for multi in [false, true] {
                let ex = lib.get(&method, multi).unwrap();
                match method {
                    Method::ExtractCode | Method::ExtractCodeNoExec => {
                        assert!(ex.extraction_block.is_some())
                    }
                    Method::Cot(_) => assert!(ex.reasoning_text.is_some()),
                    Method::Standard => {}
                }
            }
        }
    }

    #[test]
    fn extraction_exemplar_block_is_well_formed() {
        let lib = ExemplarLibrary::builtin();
        let ex = lib.get(&Method::ExtractCode, false).unwrap();
        let block = ex.extraction_block.as_deref().unwrap();
        let x = parse_extraction_block(block).unwrap();
        assert_eq!(x.timeline().len(), 3);
        // The exemplar block answers its own exemplar question.
        assert_eq!(x.solve().unwrap().to_canonical_string(), ex.answer_text);
    }

    #[test]
    fn arity_switches_baseline_exemplars() {
        let lib = ExemplarLibrary::builtin();
        let single = lib.get(&Method::Standard, false).unwrap();
        let multi = lib.get(&Method::Standard, true).unwrap();
        assert_ne!(single.answer_text, multi.answer_text);
        assert!(multi.answer_text.contains(','));

        let cot = lib.get(&Method::Cot(CotOrdering::Qcra), false).unwrap();
        assert!(cot.reasoning_text.as_deref().unwrap().starts_with("First,"));
    }
}
