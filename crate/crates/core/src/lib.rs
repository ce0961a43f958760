//! IR-filtered string matching for source code plagiarism detection.
//!
//! Java submissions are lexed into token-kind sequences, paired within
//! their sub-dataset, scored with a cheap cosine similarity over token
//! frequencies, and only pairs that survive a threshold are compared with
//! an expensive string matcher. Thresholds can be static, range-based
//! (relative to the spread of IR scores) or pair-count-based (a fixed
//! share of the lowest-scoring pairs is dropped).
//!
//! The [`metrics`] module quantifies what a threshold costs and saves, and
//! [`pipeline::sweep_corpora`] evaluates a whole grid of thresholds.

use std::path::PathBuf;

use thiserror::Error;

pub mod corpus;
pub mod ir_filter;
pub mod lexer;
pub mod matchers;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod thresholds;

pub use corpus::{generate_pairs, load_dataset, ComparisonPair, Corpus, PairId};
pub use ir_filter::{cosine_similarity, score_pairs, term_frequency_vector, SimilarityTable, TermVector};
pub use lexer::{tokenize, Token, TokenKind, TokenSequence};
pub use matchers::{MatchResult, MatcherKind};
pub use thresholds::{apply_filter, FilterOutcome, Mechanism, ScenarioConfig};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Threshold(#[from] thresholds::ThresholdError),
    #[error(transparent)]
    Match(#[from] matchers::MatchError),
    #[error(transparent)]
    Metric(#[from] metrics::MetricError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Problems with the input data rather than with the configuration or
    /// the program itself.
    pub fn is_dataset_error(&self) -> bool {
        matches!(self, Error::Corpus(_))
    }

    pub fn is_usage_error(&self) -> bool {
        matches!(self, Error::Threshold(_) | Error::Match(_))
    }
}
