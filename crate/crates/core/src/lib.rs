//! Query-focused multi-document summarization through sentence compression.
//!
//! The pipeline ranks sentences against a query, compresses them with one of
//! several compressors (rule-based, CRF sequence labeling, or beam search
//! over parse-tree constituents), and assembles a budgeted, chronologically
//! ordered summary. The crate also ships the statistical machinery behind
//! those compressors (a MaxEnt classifier, a linear-chain CRF, a backoff
//! n-gram language model) and the evaluation suite used to score output.

pub mod corpus;
pub mod decoder;
pub mod error;
pub mod eval;
pub mod learners;
pub mod lm;
pub mod pipeline;
pub mod ranking;
pub mod rules;
pub mod scorers;
pub mod tree;

pub use error::{Error, Result};
