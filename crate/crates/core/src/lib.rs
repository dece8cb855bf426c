//! Core logic for code-aided temporal question answering.
//!
//! The crate is `no_std` (with `alloc`): everything here is pure data
//! transformation. IO, HTTP, and the benchmark CLI live in `tqa-bench`.
//!
//! Pipeline shape: an LLM emits a structured *extraction block* (an
//! interval-to-entity map plus a temporal relation and reference object),
//! [`extract`] parses it, and [`temporal`] executes the query
//! deterministically. [`prompt`] builds every prompt variant and parses
//! baseline model answers; [`metrics`] scores predictions with strict
//! exact match and answer-level F1.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod extract;
pub mod metrics;
pub mod oracle;
pub mod prompt;
pub mod temporal;
