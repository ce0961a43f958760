//! Efficiency and effectiveness metrics of a filtering scenario.
//!
//! * NEP: number of excluded pairs, also as a fraction of all pairs.
//! * ANP: asymptotic number of processes. Each pair costs `|p_a| + |p_b|`
//!   for IR scoring plus `max(|p_a|, |p_b|)^3` if it is string-matched.
//!   The baseline matches every pair without any IR step.
//! * RANP: `100 * (baseline - filtered) / baseline`; negative when the IR
//!   overhead outweighs the exclusions.
//! * DEP: over the excluded pairs, sum of IR ranks minus sum of
//!   string-matching ranks (rank 1 = most similar). Normalized by the
//!   largest value any exclusion set can reach, `floor(N/2) * ceil(N/2)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::PairId;
use crate::ir_filter::{SimilarityEntry, SimilarityTable};
use crate::matchers::MatcherKind;
use crate::thresholds::{FilterOutcome, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("baseline ANP is zero; RANP is undefined")]
    ZeroBaseline,
    #[error("pair {0} has no string-matching similarity; run a full comparison pass first")]
    MissingSimilarity(PairId),
    #[error("pair {0} is not in the rank table")]
    UnknownPair(PairId),
    #[error("series lengths differ ({0} vs {1}) or are shorter than 2")]
    LengthMismatch(usize, usize),
    #[error("a series has zero variance")]
    ZeroVariance,
}

/// Cost of IR scoring one pair.
pub fn ir_cost(size_a: usize, size_b: usize) -> u64 {
    (size_a + size_b) as u64
}

/// Cost of string-matching one pair.
pub fn matching_cost(size_a: usize, size_b: usize) -> u64 {
    (size_a.max(size_b) as u64).pow(3)
}

/// `(raw, normalized)` excluded-pair count.
pub fn nep(outcome: &FilterOutcome, total_pairs: usize) -> (usize, f64) {
    let raw = outcome.excluded.len();
    let norm = if total_pairs == 0 {
        0.0
    } else {
        raw as f64 / total_pairs as f64
    };
    (raw, norm)
}

/// ANP with a similarity threshold: pairs with `sim_ir >= t` are matched.
pub fn anp_filtered(entries: &[SimilarityEntry], t: f64) -> u64 {
    entries
        .iter()
        .map(|e| {
            ir_cost(e.size_a, e.size_b)
                + if e.sim_ir >= t {
                    matching_cost(e.size_a, e.size_b)
                } else {
                    0
                }
        })
        .sum()
}

/// ANP where the matched pairs are given explicitly (needed for PCM).
pub fn anp_filtered_passed(entries: &[SimilarityEntry], passed: &BTreeSet<PairId>) -> u64 {
    entries
        .iter()
        .map(|e| {
            ir_cost(e.size_a, e.size_b)
                + if passed.contains(&e.pair) {
                    matching_cost(e.size_a, e.size_b)
                } else {
                    0
                }
        })
        .sum()
}

/// ANP of matching every pair with no filtering.
pub fn anp_baseline(entries: &[SimilarityEntry]) -> u64 {
    entries.iter().map(|e| matching_cost(e.size_a, e.size_b)).sum()
}

pub fn ranp_pct(baseline: u64, filtered: u64) -> Result<f64, MetricError> {
    if baseline == 0 {
        return Err(MetricError::ZeroBaseline);
    }
    Ok(100.0 * (baseline as f64 - filtered as f64) / baseline as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Perspective {
    Ir,
    StringMatching,
}

/// Descending ranks starting at 1. Among equal similarities the larger
/// pair id ranks first, so the ranking is the exact reverse of the order
/// in which PCM drops pairs.
pub fn rank_pairs(table: &SimilarityTable, perspective: Perspective) -> Result<BTreeMap<PairId, usize>, MetricError> {
    let mut scored = table
        .entries()
        .iter()
        .map(|e| match perspective {
            Perspective::Ir => Ok((e.sim_ir, e.pair)),
            Perspective::StringMatching => e
                .sim_sm
                .map(|s| (s, e.pair))
                .ok_or(MetricError::MissingSimilarity(e.pair)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.cmp(&x.1)));
    Ok(scored
        .into_iter()
        .enumerate()
        .map(|(i, (_, pair))| (pair, i + 1))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub rank_ir: BTreeMap<PairId, usize>,
    pub rank_sm: BTreeMap<PairId, usize>,
}

impl RankTable {
    /// Both perspectives; every entry must carry `sim_sm`.
    pub fn from_table(table: &SimilarityTable) -> Result<Self, MetricError> {
        Ok(RankTable {
            rank_ir: rank_pairs(table, Perspective::Ir)?,
            rank_sm: rank_pairs(table, Perspective::StringMatching)?,
        })
    }

    pub fn len(&self) -> usize {
        self.rank_ir.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_ir.is_empty()
    }
}

/// Largest DEP over all exclusion sets of a table with `total_pairs` pairs.
pub fn dep_worst_case(total_pairs: usize) -> u64 {
    ((total_pairs / 2) * total_pairs.div_ceil(2)) as u64
}

/// `(raw, normalized)` dissonance of the excluded pairs.
pub fn dep(excluded: &BTreeSet<PairId>, ranks: &RankTable, total_pairs: usize) -> Result<(i64, f64), MetricError> {
    let mut raw = 0i64;
    for pair in excluded {
        let ir = ranks.rank_ir.get(pair).ok_or(MetricError::UnknownPair(*pair))?;
        let sm = ranks.rank_sm.get(pair).ok_or(MetricError::UnknownPair(*pair))?;
        raw += *ir as i64 - *sm as i64;
    }
    let worst = dep_worst_case(total_pairs);
    let norm = if worst == 0 { 0.0 } else { raw as f64 / worst as f64 };
    Ok((raw, norm))
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(MetricError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Metrics of one (dataset, scenario) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub dataset: String,
    pub scenario: ScenarioConfig,
    pub effective_threshold: Option<f64>,
    pub total_pairs: usize,
    pub nep_raw: usize,
    pub nep_norm: f64,
    pub anp_baseline: u64,
    pub anp_filtered: u64,
    pub ranp_pct: f64,
    /// Present when string-matching similarity is known for every pair.
    pub dep_raw: Option<i64>,
    pub dep_norm: Option<f64>,
    pub pearson_r: Option<f64>,
}

impl ScenarioReport {
    pub fn matcher(&self) -> MatcherKind {
        self.scenario.matcher
    }
}

/// Evaluates a filter outcome against its table.
///
/// `full` is the same table with `sim_sm` filled for every pair; without
/// it DEP and the correlation are left empty.
pub fn evaluate(
    dataset: &str,
    scenario: &ScenarioConfig,
    table: &SimilarityTable,
    outcome: &FilterOutcome,
    full: Option<(&SimilarityTable, &RankTable)>,
) -> Result<ScenarioReport, MetricError> {
    let total = table.len();
    let (nep_raw, nep_norm) = nep(outcome, total);
    let baseline = anp_baseline(table.entries());
    let filtered = match outcome.effective_threshold {
        Some(t) => anp_filtered(table.entries(), t),
        None => anp_filtered_passed(table.entries(), &outcome.passed),
    };
    let (dep_raw, dep_norm, pearson_r) = match full {
        Some((full_table, ranks)) => {
            let (raw, norm) = dep(&outcome.excluded, ranks, total)?;
            (Some(raw), Some(norm), correlation(full_table))
        }
        None => (None, None, None),
    };
    Ok(ScenarioReport {
        dataset: dataset.to_string(),
        scenario: *scenario,
        effective_threshold: outcome.effective_threshold,
        total_pairs: total,
        nep_raw,
        nep_norm,
        anp_baseline: baseline,
        anp_filtered: filtered,
        ranp_pct: ranp_pct(baseline, filtered)?,
        dep_raw,
        dep_norm,
        pearson_r,
    })
}

/// Pearson correlation of IR and string-matching similarity over the
/// pairs that carry both; `None` when undefined.
pub fn correlation(table: &SimilarityTable) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = table
        .entries()
        .iter()
        .filter_map(|e| e.sim_sm.map(|s| (e.sim_ir, s)))
        .unzip();
    pearson(&xs, &ys).ok()
}
