//! Term-frequency vector space model with cosine similarity.
//!
//! Terms are single token kinds weighted by raw frequency. The model is a
//! bag of tokens, so it is blind to token order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{ComparisonPair, PairId};
use crate::lexer::{TokenKind, TokenSequence};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermVector {
    counts: BTreeMap<TokenKind, u64>,
    squared_norm: u64,
}

impl TermVector {
    /// Builds a vector from explicit counts; zero entries are dropped.
    pub fn from_counts<I: IntoIterator<Item = (TokenKind, u64)>>(counts: I) -> Self {
        let mut map = BTreeMap::new();
        for (kind, count) in counts {
            if count > 0 {
                *map.entry(kind).or_insert(0) += count;
            }
        }
        let squared_norm = map.values().map(|c| c * c).sum();
        TermVector {
            counts: map,
            squared_norm,
        }
    }

    pub fn counts(&self) -> &BTreeMap<TokenKind, u64> {
        &self.counts
    }

    pub fn get(&self, kind: TokenKind) -> u64 {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn squared_norm(&self) -> u64 {
        self.squared_norm
    }

    pub fn norm(&self) -> f64 {
        (self.squared_norm as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn dot(&self, other: &TermVector) -> u64 {
        // merge over sorted keys; the visiting order is the same either way round
        let mut a = self.counts.iter().peekable();
        let mut b = other.counts.iter().peekable();
        let mut sum = 0u64;
        while let (Some(&(ka, va)), Some(&(kb, vb))) = (a.peek(), b.peek()) {
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += va * vb;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }
}

pub fn term_frequency_vector(seq: &TokenSequence) -> TermVector {
    TermVector::from_counts(seq.tokens.iter().map(|t| (t.kind, 1)))
}

/// Cosine of the angle between two count vectors, in `[0, 1]`.
///
/// A zero vector has similarity 0 with everything.
pub fn cosine_similarity(u: &TermVector, v: &TermVector) -> f64 {
    if u.is_zero() || v.is_zero() {
        return 0.0;
    }
    let dot = u.dot(v) as u128;
    let norms = u.squared_norm as u128 * v.squared_norm as u128;
    // Cauchy-Schwarz equality: parallel vectors
    if dot * dot == norms {
        return 1.0;
    }
    (dot as f64 / (norms as f64).sqrt()).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityEntry {
    pub pair: PairId,
    /// `|p_a|`
    pub size_a: usize,
    /// `|p_b|`
    pub size_b: usize,
    pub sim_ir: f64,
    /// Set only for pairs that went through string matching.
    pub sim_sm: Option<f64>,
}

/// IR similarity of every pair of a dataset, ordered by pair id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimilarityTable {
    entries: Vec<SimilarityEntry>,
}

impl SimilarityTable {
    pub fn from_entries(mut entries: Vec<SimilarityEntry>) -> Self {
        entries.sort_by_key(|e| e.pair);
        SimilarityTable { entries }
    }

    pub fn entries(&self) -> &[SimilarityEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [SimilarityEntry] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pair: PairId) -> Option<&SimilarityEntry> {
        self.entries
            .binary_search_by_key(&pair, |e| e.pair)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn sim_min(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.sim_ir).reduce(f64::min)
    }

    pub fn sim_max(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.sim_ir).reduce(f64::max)
    }
}

/// Scores every pair. Each submission's vector is built once.
pub fn score_pairs(pairs: &[ComparisonPair<'_>]) -> SimilarityTable {
    let mut vectors: BTreeMap<usize, TermVector> = BTreeMap::new();
    for p in pairs {
        vectors.entry(p.id.first).or_insert_with(|| term_frequency_vector(p.a));
        vectors.entry(p.id.second).or_insert_with(|| term_frequency_vector(p.b));
    }
    let entries = pairs
        .par_iter()
        .map(|p| SimilarityEntry {
            pair: p.id,
            size_a: p.a.len(),
            size_b: p.b.len(),
            sim_ir: cosine_similarity(&vectors[&p.id.first], &vectors[&p.id.second]),
            sim_sm: None,
        })
        .collect();
    SimilarityTable::from_entries(entries)
}
