//! Static, range-based and pair-count-based thresholding of IR similarity.
//!
//! Every mechanism takes the same user-facing raw threshold in `[0, 1]`:
//!
//! * static (SM) uses it as the similarity threshold directly;
//! * range-based (RM) maps it onto `[sim_min, sim_max]` of the table,
//!   `t = sim_min + in * (sim_max - sim_min)`;
//! * pair-count-based (PCM) excludes the `floor(in * N)` pairs with the
//!   lowest similarity.
//!
//! SM and RM pass a pair iff `sim_ir >= t`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::PairId;
use crate::ir_filter::SimilarityTable;
use crate::matchers::{LaScoring, MatcherKind, DEFAULT_MML};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("raw threshold {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("similarity range is inverted: min {min} > max {max}")]
    InvertedRange { min: f64, max: f64 },
    #[error("cannot filter an empty similarity table")]
    EmptyTable,
    #[error("cannot parse threshold `{0}`; expected a fraction like 0.3 or a percentage like 30%")]
    Syntax(String),
    #[error("unknown mechanism `{0}`; expected sm, rm or pcm")]
    UnknownMechanism(String),
    #[error("minimum match length must be at least 1")]
    InvalidMml,
    #[error("local alignment scoring needs match > 0, mismatch <= 0 and gap <= 0")]
    InvalidScoring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    #[serde(rename = "SM")]
    Static,
    #[serde(rename = "RM")]
    Range,
    #[serde(rename = "PCM")]
    PairCount,
}

impl Mechanism {
    pub const ALL: [Mechanism; 3] = [Mechanism::Static, Mechanism::Range, Mechanism::PairCount];

    pub fn label(self) -> &'static str {
        match self {
            Mechanism::Static => "SM",
            Mechanism::Range => "RM",
            Mechanism::PairCount => "PCM",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mechanism {
    type Err = ThresholdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sm" | "static" => Ok(Mechanism::Static),
            "rm" | "range" => Ok(Mechanism::Range),
            "pcm" | "pair-count" => Ok(Mechanism::PairCount),
            _ => Err(ThresholdError::UnknownMechanism(s.to_string())),
        }
    }
}

/// One evaluation scenario: how to filter and how to match what survives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub mechanism: Mechanism,
    pub raw_threshold: f64,
    pub matcher: MatcherKind,
    pub mml: usize,
    pub la_scoring: LaScoring,
}

impl ScenarioConfig {
    pub fn new(mechanism: Mechanism, raw_threshold: f64, matcher: MatcherKind) -> Self {
        ScenarioConfig {
            mechanism,
            raw_threshold,
            matcher,
            mml: DEFAULT_MML,
            la_scoring: LaScoring::default(),
        }
    }

    pub fn with_threshold(self, raw_threshold: f64) -> Self {
        ScenarioConfig { raw_threshold, ..self }
    }

    pub fn validate(&self) -> Result<(), ThresholdError> {
        check_raw(self.raw_threshold)?;
        if self.mml == 0 {
            return Err(ThresholdError::InvalidMml);
        }
        if !self.la_scoring.is_valid() {
            return Err(ThresholdError::InvalidScoring);
        }
        Ok(())
    }
}

/// Split of a table into pairs handed to string matching and pairs dropped.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FilterOutcome {
    pub passed: BTreeSet<PairId>,
    pub excluded: BTreeSet<PairId>,
    /// The similarity cut for SM and RM; PCM cuts by count instead.
    pub effective_threshold: Option<f64>,
}

impl FilterOutcome {
    pub fn is_passed(&self, pair: PairId) -> bool {
        self.passed.contains(&pair)
    }
}

fn check_raw(raw: f64) -> Result<(), ThresholdError> {
    if (0.0..=1.0).contains(&raw) {
        Ok(())
    } else {
        Err(ThresholdError::OutOfRange(raw))
    }
}

/// Accepts `0.35`, `35%` or `35 %`. Percentages are divided by 100.
pub fn parse_threshold(text: &str) -> Result<f64, ThresholdError> {
    let trimmed = text.trim();
    let value = match trimmed.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().map(|v| v / 100.0),
        None => trimmed.parse::<f64>(),
    }
    .map_err(|_| ThresholdError::Syntax(text.to_string()))?;
    check_raw(value)?;
    Ok(value)
}

pub fn static_threshold(raw: f64) -> Result<f64, ThresholdError> {
    check_raw(raw)?;
    Ok(raw)
}

pub fn range_threshold(raw: f64, sim_min: f64, sim_max: f64) -> Result<f64, ThresholdError> {
    check_raw(raw)?;
    if sim_min > sim_max {
        return Err(ThresholdError::InvertedRange {
            min: sim_min,
            max: sim_max,
        });
    }
    if !(0.0..=1.0).contains(&sim_min) || !(0.0..=1.0).contains(&sim_max) {
        return Err(ThresholdError::OutOfRange(if sim_min < 0.0 {
            sim_min
        } else {
            sim_max
        }));
    }
    if raw == 1.0 {
        return Ok(sim_max);
    }
    // rounding may step past the upper end of the range
    Ok((sim_min + raw * (sim_max - sim_min)).clamp(sim_min, sim_max))
}

/// Number of pairs PCM excludes: `floor(raw * total_pairs)`.
///
/// Products that land within rounding noise of an integer count as that
/// integer, so `0.3 * 10` excludes three pairs even though `0.3` is not
/// representable.
pub fn pair_count_cut(raw: f64, total_pairs: usize) -> Result<usize, ThresholdError> {
    check_raw(raw)?;
    let product = raw * total_pairs as f64;
    let nearest = product.round();
    let k = if (product - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        product.floor()
    };
    Ok((k as usize).min(total_pairs))
}

pub fn effective_threshold(
    mechanism: Mechanism,
    raw: f64,
    table: &SimilarityTable,
) -> Result<Option<f64>, ThresholdError> {
    match mechanism {
        Mechanism::Static => static_threshold(raw).map(Some),
        Mechanism::Range => {
            let (min, max) = table.sim_min().zip(table.sim_max()).ok_or(ThresholdError::EmptyTable)?;
            range_threshold(raw, min, max).map(Some)
        }
        Mechanism::PairCount => {
            check_raw(raw)?;
            Ok(None)
        }
    }
}

pub fn filter_table(table: &SimilarityTable, mechanism: Mechanism, raw: f64) -> Result<FilterOutcome, ThresholdError> {
    if table.is_empty() {
        return Err(ThresholdError::EmptyTable);
    }
    let mut outcome = FilterOutcome {
        effective_threshold: effective_threshold(mechanism, raw, table)?,
        ..FilterOutcome::default()
    };
    match outcome.effective_threshold {
        Some(t) => {
            for e in table.entries() {
                if e.sim_ir >= t {
                    outcome.passed.insert(e.pair);
                } else {
                    outcome.excluded.insert(e.pair);
                }
            }
        }
        None => {
            let k = pair_count_cut(raw, table.len())?;
            let mut order: Vec<_> = table.entries().iter().map(|e| (e.sim_ir, e.pair)).collect();
            order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            outcome.excluded.extend(order[..k].iter().map(|&(_, p)| p));
            outcome.passed.extend(order[k..].iter().map(|&(_, p)| p));
        }
    }
    Ok(outcome)
}

pub fn apply_filter(table: &SimilarityTable, config: &ScenarioConfig) -> Result<FilterOutcome, ThresholdError> {
    filter_table(table, config.mechanism, config.raw_threshold)
}
