//! Prompt construction for every evaluated method, and answer parsing for
//! the baseline methods.
//!
//! All prompting is one-shot. The extraction prompt follows the fixed
//! instruction/exemplar/test layout ending in the `extracted_info = ` cue;
//! chain-of-thought prompts permute the Question / Context / Reasoning /
//! Answer blocks of a single exemplar.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::temporal::AnswerSet;

/// A one-shot training example. `reasoning_text` is required for CoT
/// prompts, `extraction_block` for extraction-style prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exemplar {
    pub question: String,
    pub context: String,
    pub answer_text: String,
    pub reasoning_text: Option<String>,
    pub extraction_block: Option<String>,
}

/// Order of the Question, Context, Reasoning, and Answer blocks in a CoT
/// prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CotOrdering {
    Qcra,
    Cqra,
    Qcar,
    Cqar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Question,
    Context,
    Reasoning,
    Answer,
}

impl CotOrdering {
    pub const ALL: [CotOrdering; 4] = [
        CotOrdering::Qcra,
        CotOrdering::Cqra,
        CotOrdering::Qcar,
        CotOrdering::Cqar,
    ];

    fn blocks(&self) -> [Block; 4] {
        use Block::*;
        match self {
            CotOrdering::Qcra => [Question, Context, Reasoning, Answer],
            CotOrdering::Cqra => [Context, Question, Reasoning, Answer],
            CotOrdering::Qcar => [Question, Context, Answer, Reasoning],
            CotOrdering::Cqar => [Context, Question, Answer, Reasoning],
        }
    }

    /// True when the reasoning block precedes the answer block.
    pub fn reasoning_first(&self) -> bool {
        matches!(self, CotOrdering::Qcra | CotOrdering::Cqra)
    }

    pub fn label(&self) -> &'static str {
        match self {
            CotOrdering::Qcra => "Q+C+R+A",
            CotOrdering::Cqra => "C+Q+R+A",
            CotOrdering::Qcar => "Q+C+A+R",
            CotOrdering::Cqar => "C+Q+A+R",
        }
    }
}

/// An evaluated method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Standard,
    Cot(CotOrdering),
    ExtractCode,
    ExtractCodeNoExec,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Standard,
        Method::Cot(CotOrdering::Qcra),
        Method::Cot(CotOrdering::Cqra),
        Method::Cot(CotOrdering::Qcar),
        Method::Cot(CotOrdering::Cqar),
        Method::ExtractCode,
        Method::ExtractCodeNoExec,
    ];

    /// CLI / config identifier.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Cot(CotOrdering::Qcra) => "cot-qcra",
            Method::Cot(CotOrdering::Cqra) => "cot-cqra",
            Method::Cot(CotOrdering::Qcar) => "cot-qcar",
            Method::Cot(CotOrdering::Cqar) => "cot-cqar",
            Method::ExtractCode => "extract-code",
            Method::ExtractCodeNoExec => "extract-code-noexec",
        }
    }

    pub fn parse_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.cli_name() == name)
    }

    /// Human-facing row label for report tables.
    pub fn display_label(&self) -> String {
        match self {
            Method::Standard => "Standard".to_string(),
            Method::Cot(o) => format!("CoT ({})", o.label()),
            Method::ExtractCode => "Extraction + Code".to_string(),
            Method::ExtractCodeNoExec => "Extraction + Code (no exec)".to_string(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PromptError {
    MissingExemplarField(&'static str),
    /// Nothing remained of the completion after label and whitespace
    /// stripping.
    EmptyAnswer,
}

impl fmt::Display for PromptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PromptError::MissingExemplarField(name) => {
                write!(f, "exemplar is missing field: {name}")
            }
            PromptError::EmptyAnswer => write!(f, "model answer is empty"),
        }
    }
}

impl core::error::Error for PromptError {}

const EXTRACTION_INSTRUCTION: &str =
    "Extract information from the question and context. Strictly follow the below example.";

fn answer_instruction(multi: bool, cot: bool) -> String {
    let mut s = String::from("Answer the question based on the context.");
    if cot {
        s.push_str(" Reason first and then answer the question.");
    }
    if multi {
        // The source exemplar's spelling of "seperate" is kept verbatim.
        s.push_str(" Only answer the name, and seperate by comma.");
    } else {
        s.push_str(" Only answer the name.");
    }
    s
}

/// Step-1 extraction prompt: instruction, one-shot exemplar, test item,
/// ending with the `extracted_info = ` cue.
pub fn build_extraction_prompt(
    question: &str,
    context: &str,
    ex: &Exemplar,
) -> Result<String, PromptError> {
    let block = ex
        .extraction_block
        .as_deref()
        .ok_or(PromptError::MissingExemplarField("extraction_block"))?;
    Ok(format!(
        "{EXTRACTION_INSTRUCTION}\nQuestion: {}\nContext: {}\n{}\n\nQuestion: {}\nContext: {}\nextracted_info = ",
        ex.question, ex.context, block, question, context
    ))
}

/// One-shot standard prompt, context-then-question order.
pub fn build_standard_prompt(question: &str, context: &str, ex: &Exemplar, multi: bool) -> String {
    let inst = answer_instruction(multi, false);
    format!(
        "Context: {}\nQuestion: {} {}\nAnswer: {}\n\nContext: {}\nQuestion: {} {}\nAnswer:",
        ex.context, ex.question, inst, ex.answer_text, context, question, inst
    )
}

/// One-shot CoT prompt with the exemplar's four blocks in the requested
/// order. The test item carries only its question/context blocks (in the
/// same relative order) and ends with the cue matching the ordering:
/// `Reasoning:` when reasoning precedes the answer, `Answer:` otherwise.
pub fn build_cot_prompt(
    question: &str,
    context: &str,
    ex: &Exemplar,
    ordering: CotOrdering,
    multi: bool,
) -> Result<String, PromptError> {
    let reasoning = ex
        .reasoning_text
        .as_deref()
        .ok_or(PromptError::MissingExemplarField("reasoning_text"))?;
    let inst = answer_instruction(multi, true);

    let exemplar_lines: Vec<String> = ordering
        .blocks()
        .iter()
        .map(|b| match b {
            Block::Question => format!("Question: {} {}", ex.question, inst),
            Block::Context => format!("Context: {}", ex.context),
            Block::Reasoning => format!("Reasoning: {reasoning}"),
            Block::Answer => format!("Answer: {}", ex.answer_text),
        })
        .collect();

    let test_lines: Vec<String> = ordering
        .blocks()
        .iter()
        .filter_map(|b| match b {
            Block::Question => Some(format!("Question: {question} {inst}")),
            Block::Context => Some(format!("Context: {context}")),
            _ => None,
        })
        .collect();

    let cue = if ordering.reasoning_first() {
        "Reasoning:"
    } else {
        "Answer:"
    };
    Ok(format!(
        "{}\n\n{}\n{}",
        exemplar_lines.join("\n"),
        test_lines.join("\n"),
        cue
    ))
}

/// Ablation prompt: the full step-2 program (imports, assignments, solver
/// source, final print) is shown to the model, which must predict the
/// program's output itself instead of an interpreter running it.
pub fn build_no_exec_prompt(
    question: &str,
    context: &str,
    ex: &Exemplar,
    extraction_block: &str,
    solver_source: &str,
) -> String {
    let solver = solver_source.trim_end();
    let mut out = String::new();
    if let Some(block) = ex.extraction_block.as_deref() {
        out.push_str(&format!(
            "Question: {}\nContext: {}\nfrom datetime import datetime\n{}\n\n{}\nprint(solution())\nOutput: {}\n\n",
            ex.question, ex.context, block, solver, ex.answer_text
        ));
    }
    out.push_str(&format!(
        "Question: {question}\nContext: {context}\nfrom datetime import datetime\n{}\n\n{}\nprint(solution())\nOutput:",
        extraction_block.trim_end(),
        solver
    ));
    out
}

/// Extract the answer text from a raw completion according to the method's
/// layout, then split it into an [`AnswerSet`].
///
/// Commas split entities only in multi-answer mode; both "Reasoning:" and
/// "Reason:" are recognized as reasoning labels.
pub fn parse_model_answer(
    text: &str,
    method: &Method,
    multi: bool,
) -> Result<AnswerSet, PromptError> {
    let body: &str = match method {
        Method::Standard | Method::ExtractCode => text,
        Method::ExtractCodeNoExec => {
            let t = text.trim_start();
            t.strip_prefix("Output:").unwrap_or(t)
        }
        Method::Cot(ordering) if ordering.reasoning_first() => match text.rfind("Answer:") {
            Some(pos) => &text[pos + "Answer:".len()..],
            None => text,
        },
        Method::Cot(_) => {
            let after = match text.find("Answer:") {
                Some(pos) => &text[pos + "Answer:".len()..],
                None => text,
            };
            let cut = [after.find("Reasoning:"), after.find("Reason:")]
                .into_iter()
                .flatten()
                .min();
            match cut {
                Some(pos) => &after[..pos],
                None => after,
            }
        }
    };

    let trimmed = body.trim();
    let trimmed = trimmed.strip_suffix('.').unwrap_or(trimmed);
    let parts: Vec<&str> = if multi {
        trimmed.split(',').collect()
    } else {
        vec![trimmed]
    };
    let set = AnswerSet::new(
        parts
            .into_iter()
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(String::from),
    );
    if set.is_empty() {
        Err(PromptError::EmptyAnswer)
    } else {
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn extraction_exemplar() -> Exemplar {
        Exemplar {
            question: "Who was the owner of Westfield Montgomery before Westfield Group?".into(),
            context: "Westfield Montgomery is owned by Westfield Group from Jan, 1971 to Jan, 2014.".into(),
            answer_text: "The May Department Stores Company".into(),
            reasoning_text: None,
            extraction_block: Some(
                "extracted_info = {(datetime(1971, 1, 1), datetime(2014, 1, 1)): \"Westfield Group\"}\nt_relation = \"before\"\nref_obj = \"Westfield Group\"".into(),
            ),
        }
    }

    fn cot_exemplar() -> Exemplar {
        Exemplar {
            question: "Which team did Alain Roche play for in Jan, 1995?".into(),
            context: "Alain Roche plays for Paris Saint-Germain F.C. from Jan, 1992 to Jan, 1998.".into(),
            answer_text: "Paris Saint-Germain F.C.".into(),
            reasoning_text: Some(
                "First, Jan, 1995 is in between Jan, 1992 and Jan, 1998. Second, Alain Roche plays for Paris Saint-Germain F.C. from Jan, 1992 to Jan, 1998.".into(),
            ),
            extraction_block: None,
        }
    }

    #[test]
    fn extraction_prompt_ends_with_cue() {
        let p = build_extraction_prompt("Q?", "C.", &extraction_exemplar()).unwrap();
        assert!(p.ends_with("extracted_info = "));
        assert!(p.starts_with(EXTRACTION_INSTRUCTION));
    }

    #[test]
    fn extraction_prompt_contains_exemplar_block_once() {
        let ex = extraction_exemplar();
        let p = build_extraction_prompt("Q?", "C.", &ex).unwrap();
        let block = ex.extraction_block.as_deref().unwrap();
        assert_eq!(p.matches(block).count(), 1);
        assert_eq!(p.matches(ex.question.as_str()).count(), 1);
    }

    #[test]
    fn extraction_prompt_requires_block() {
        let mut ex = extraction_exemplar();
        ex.extraction_block = None;
        assert_eq!(
            build_extraction_prompt("Q?", "C.", &ex),
            Err(PromptError::MissingExemplarField("extraction_block"))
        );
    }

    #[test]
    fn standard_prompt_instruction_variants() {
        let ex = cot_exemplar();
        let single = build_standard_prompt("Q?", "C.", &ex, false);
        assert!(single.contains("Only answer the name."));
        assert!(!single.contains("seperate by comma"));
        assert!(single.ends_with("Answer:"));

        let multi = build_standard_prompt("Q?", "C.", &ex, true);
        assert!(multi.contains("seperate by comma"));
    }

    #[test]
    fn standard_prompt_exemplar_answer_precedes_test_block() {
        let ex = cot_exemplar();
        let p = build_standard_prompt("Q?", "C.", &ex, false);
        let answer_pos = p.find("Answer: Paris Saint-Germain F.C.").unwrap();
        let test_pos = p.find("Question: Q?").unwrap();
        assert!(answer_pos < test_pos);
    }

    #[test]
    fn cot_orderings_place_labels_in_sequence() {
        let ex = cot_exemplar();
        for ordering in CotOrdering::ALL {
            let p = build_cot_prompt("Q?", "C.", &ex, ordering, false).unwrap();
            let labels: Vec<&str> = ordering
                .label()
                .split('+')
                .map(|b| match b {
                    "Q" => "Question:",
                    "C" => "Context:",
                    "R" => "Reasoning:",
                    "A" => "Answer:",
                    _ => unreachable!(),
                })
                .collect();
            let mut last = 0;
            for label in labels {
                let pos = p[last..].find(label).expect("label present in order") + last;
                last = pos + label.len();
            }
        }
    }

    #[test]
    fn cot_reasoning_verbatim_and_cue_selection() {
        let ex = cot_exemplar();
        let p = build_cot_prompt("Q?", "C.", &ex, CotOrdering::Cqra, false).unwrap();
        assert!(p.contains("First, Jan, 1995 is in between Jan, 1992 and Jan, 1998."));
        assert!(p.ends_with("Reasoning:"));

        let p = build_cot_prompt("Q?", "C.", &ex, CotOrdering::Qcar, false).unwrap();
        assert!(p.ends_with("Answer:"));
        // Exemplar answer precedes exemplar reasoning in A-first orderings.
        assert!(p.find("Answer:").unwrap() < p.find("Reasoning:").unwrap());
    }

    #[test]
    fn cot_prompt_requires_reasoning() {
        let mut ex = cot_exemplar();
        ex.reasoning_text = None;
        assert_eq!(
            build_cot_prompt("Q?", "C.", &ex, CotOrdering::Qcra, false),
            Err(PromptError::MissingExemplarField("reasoning_text"))
        );
    }

    #[test]
    fn no_exec_prompt_layout() {
        let ex = extraction_exemplar();
        let block = "extracted_info = {}\nref_obj = datetime(1995, 1, 1)";
        let solver = "def solution():\n    return answer";
        let p = build_no_exec_prompt("Q?", "C.", &ex, block, solver);
        assert_eq!(p.matches(block).count(), 1);
        assert!(p.ends_with("Output:"));
        let block_pos = p.rfind(block).unwrap();
        let solver_pos = p.rfind(solver).unwrap();
        let cue_pos = p.rfind("Output:").unwrap();
        assert!(block_pos < solver_pos && solver_pos < cue_pos);
    }

    #[test]
    fn parse_answer_multi_comma_split() {
        let ans = parse_model_answer(
            "Answer: Paris Saint-Germain F.C., France national association football team.",
            &Method::Cot(CotOrdering::Qcra),
            true,
        )
        .unwrap();
        assert_eq!(
            ans.entities(),
            [
                "France national association football team",
                "Paris Saint-Germain F.C."
            ]
        );
    }

    #[test]
    fn parse_answer_standard_single() {
        let ans = parse_model_answer("University of Hamburg", &Method::Standard, false).unwrap();
        assert_eq!(ans.entities(), ["University of Hamburg"]);
    }

    #[test]
    fn parse_answer_a_first_truncates_reasoning() {
        let ans = parse_model_answer(
            "Answer: Vrije Universiteit Amsterdam. Reasoning: First, Richard Tol works for Vrije Universiteit Amsterdam.",
            &Method::Cot(CotOrdering::Cqar),
            false,
        )
        .unwrap();
        assert_eq!(ans.entities(), ["Vrije Universiteit Amsterdam"]);

        // GPT-4 style "Reason:" label is also recognized.
        let ans = parse_model_answer(
            "Heybridge Swifts F.C. Reason: Jan, 2001 is in between Jan, 2001 to Jan, 2004.",
            &Method::Cot(CotOrdering::Qcar),
            false,
        )
        .unwrap();
        assert_eq!(ans.entities(), ["Heybridge Swifts F.C"]);
    }

    #[test]
    fn parse_answer_r_first_takes_last_answer_label() {
        let ans = parse_model_answer(
            "Reasoning: the answer is X. Answer: University of Hamburg.",
            &Method::Cot(CotOrdering::Qcra),
            false,
        )
        .unwrap();
        assert_eq!(ans.entities(), ["University of Hamburg"]);
    }

    #[test]
    fn parse_answer_no_comma_split_in_single_mode() {
        let ans = parse_model_answer("Smith, Jones and Co.", &Method::Standard, false).unwrap();
        assert_eq!(ans.entities(), ["Smith, Jones and Co"]);
    }

    #[test]
    fn parse_answer_empty_is_error() {
        assert_eq!(
            parse_model_answer("   .", &Method::Standard, false),
            Err(PromptError::EmptyAnswer)
        );
    }

    #[test]
    fn parse_answer_noexec_strips_output_label() {
        let ans = parse_model_answer(
            "Output: Canvey Island F.C., Chesham United F.C.",
            &Method::ExtractCodeNoExec,
            true,
        )
        .unwrap();
        assert_eq!(ans.len(), 2);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse_name(m.cli_name()), Some(m));
        }
        assert_eq!(Method::parse_name("cot"), None);
        assert_eq!(Method::ExtractCode.display_label(), "Extraction + Code");
    }

    #[test]
    fn prompts_are_injective_in_question_and_context() {
        let ex = cot_exemplar();
        let ex2 = extraction_exemplar();
        let pairs = [("Q1?", "C1."), ("Q1?", "C2."), ("Q2?", "C1.")];
        for (i, a) in pairs.iter().enumerate() {
            for b in pairs.iter().skip(i + 1) {
                assert_ne!(
                    build_standard_prompt(a.0, a.1, &ex, false),
                    build_standard_prompt(b.0, b.1, &ex, false)
                );
                assert_ne!(
                    build_cot_prompt(a.0, a.1, &ex, CotOrdering::Qcra, false),
                    build_cot_prompt(b.0, b.1, &ex, CotOrdering::Qcra, false)
                );
                assert_ne!(
                    build_extraction_prompt(a.0, a.1, &ex2),
                    build_extraction_prompt(b.0, b.1, &ex2)
                );
                assert_ne!(
                    build_no_exec_prompt(a.0, a.1, &ex2, "extracted_info = {}", "def solution():"),
                    build_no_exec_prompt(b.0, b.1, &ex2, "extracted_info = {}", "def solution():")
                );
            }
        }
    }
}
