//! Token-level string matching of comparison pairs.
//!
//! Two matchers are available, both normalized to `[0, 1]`:
//!
//! * Running Karp-Rabin Greedy String Tiling ([`rkrgst_similarity`]),
//!   scored as `2 * coverage / (|a| + |b|)`;
//! * Smith-Waterman local alignment ([`local_alignment_similarity`]),
//!   scored as `score / (match * min(|a|, |b|))`.
//!
//! Tokens are equal iff their kinds are equal.

mod local_alignment;
pub mod oracle;
mod rkrgst;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexer::TokenSequence;

pub use local_alignment::{local_alignment, local_alignment_similarity};
pub use oracle::{gst_oracle, local_alignment_oracle, ALIGNMENT_ORACLE_MAX_LEN, ORACLE_MAX_LEN};
pub use rkrgst::{rkrgst, rkrgst_similarity};

pub const DEFAULT_MML: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("minimum match length must be at least 1")]
    InvalidMml,
    #[error("invalid local alignment scoring {0}; need match > 0, mismatch <= 0, gap <= 0")]
    InvalidScoring(LaScoring),
    #[error("oracle input too large ({len_a} x {len_b} tokens)")]
    TooLargeForOracle { len_a: usize, len_b: usize },
    #[error("cannot parse `{0}`")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatcherKind {
    #[serde(rename = "RKRGST")]
    Rkrgst,
    #[serde(rename = "LA")]
    LocalAlignment,
}

impl MatcherKind {
    pub fn label(self) -> &'static str {
        match self {
            MatcherKind::Rkrgst => "RKRGST",
            MatcherKind::LocalAlignment => "LA",
        }
    }
}

impl fmt::Display for MatcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MatcherKind {
    type Err = MatchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rkrgst" | "gst" => Ok(MatcherKind::Rkrgst),
            "la" | "sw" => Ok(MatcherKind::LocalAlignment),
            _ => Err(MatchError::Syntax(s.to_string())),
        }
    }
}

/// Linear-gap scoring for local alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaScoring {
    #[serde(rename = "match")]
    pub matched: i64,
    pub mismatch: i64,
    pub gap: i64,
}

impl Default for LaScoring {
    fn default() -> Self {
        LaScoring {
            matched: 2,
            mismatch: -1,
            gap: -1,
        }
    }
}

impl LaScoring {
    pub fn is_valid(&self) -> bool {
        self.matched > 0 && self.mismatch <= 0 && self.gap <= 0
    }

    fn validate(self) -> Result<Self, MatchError> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(MatchError::InvalidScoring(self))
        }
    }
}

impl fmt::Display for LaScoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.matched, self.mismatch, self.gap)
    }
}

impl FromStr for LaScoring {
    type Err = MatchError;

    /// `match,mismatch,gap`, e.g. `2,-1,-1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| MatchError::Syntax(s.to_string()))?;
        match parts[..] {
            [matched, mismatch, gap] => LaScoring { matched, mismatch, gap }.validate(),
            _ => Err(MatchError::Syntax(s.to_string())),
        }
    }
}

/// A run of `length` tokens shared by `a[start_a..]` and `b[start_b..]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tile {
    pub start_a: usize,
    pub start_b: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub similarity: f64,
    /// Tokens covered by tiles (RKRGST) or the optimal alignment score (LA).
    pub coverage: u64,
    /// Tiles in marking order; empty for LA.
    pub tiles: Vec<Tile>,
}

/// Dispatches to the configured matcher.
pub fn match_pair(
    kind: MatcherKind,
    a: &TokenSequence,
    b: &TokenSequence,
    mml: usize,
    scoring: LaScoring,
) -> Result<MatchResult, MatchError> {
    match kind {
        MatcherKind::Rkrgst => rkrgst_similarity(a, b, mml),
        MatcherKind::LocalAlignment => local_alignment_similarity(a, b, scoring),
    }
}

pub(crate) fn dice(coverage: usize, len_a: usize, len_b: usize) -> f64 {
    if len_a + len_b == 0 {
        0.0
    } else {
        (2 * coverage) as f64 / (len_a + len_b) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring_parse() {
        assert_eq!("2,-1,-1".parse::<LaScoring>().unwrap(), LaScoring::default());
        assert_eq!(
            "3, 0, -2".parse::<LaScoring>().unwrap(),
            LaScoring {
                matched: 3,
                mismatch: 0,
                gap: -2
            }
        );
        assert!(matches!(
            "0,-1,-1".parse::<LaScoring>(),
            Err(MatchError::InvalidScoring(_))
        ));
        assert!(matches!("2,-1".parse::<LaScoring>(), Err(MatchError::Syntax(_))));
        assert!(matches!("a,b,c".parse::<LaScoring>(), Err(MatchError::Syntax(_))));
    }

    #[test]
    fn matcher_parse() {
        assert_eq!("la".parse::<MatcherKind>().unwrap(), MatcherKind::LocalAlignment);
        assert_eq!("RKRGST".parse::<MatcherKind>().unwrap(), MatcherKind::Rkrgst);
        assert!("lcs".parse::<MatcherKind>().is_err());
    }
}
