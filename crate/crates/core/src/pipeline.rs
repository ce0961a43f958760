//! The four detection phases and the threshold sweep built on top of them.
//!
//! 1. lex submissions ([`crate::lexer`]),
//! 2. pair them up within each sub-dataset ([`crate::corpus`]),
//! 3. score pairs with cosine similarity and filter ([`crate::ir_filter`],
//!    [`crate::thresholds`]),
//! 4. string-match the survivors ([`crate::matchers`]).

use std::cmp::Ordering;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{discover_datasets, generate_pairs, ComparisonPair, Corpus, DatasetStats, LoadOptions, PairId};
use crate::ir_filter::{score_pairs, SimilarityTable};
use crate::matchers::{match_pair, LaScoring, MatcherKind, DEFAULT_MML};
use crate::metrics::{evaluate, RankTable, ScenarioReport};
use crate::thresholds::{apply_filter, FilterOutcome, Mechanism, ScenarioConfig};
use crate::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset_root: PathBuf,
    pub scenario: ScenarioConfig,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
    pub fail_on_lex_error: bool,
    /// Also string-match excluded pairs so DEP and correlation can be reported.
    pub full_pass: bool,
}

impl RunConfig {
    pub fn new(dataset_root: impl Into<PathBuf>, scenario: ScenarioConfig) -> Self {
        RunConfig {
            dataset_root: dataset_root.into(),
            scenario,
            output: None,
            format: ReportFormat::Json,
            fail_on_lex_error: false,
            full_pass: false,
        }
    }

    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            fail_on_lex_error: self.fail_on_lex_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub a: String,
    pub b: String,
    pub sim_ir: f64,
    pub passed: bool,
    pub sim_sm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDetection {
    pub stats: DatasetStats,
    pub metrics: ScenarioReport,
    /// Sorted by `sim_sm` then `sim_ir`, both descending; unmatched pairs last.
    pub rows: Vec<PairRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub schema_version: u32,
    pub scenario: ScenarioConfig,
    pub datasets: Vec<DatasetDetection>,
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// String-matches the given pairs in parallel; output order follows input.
fn match_pairs(pairs: &[ComparisonPair<'_>], scenario: &ScenarioConfig) -> Result<Vec<(PairId, f64)>, Error> {
    pairs
        .par_iter()
        .map(|p| {
            match_pair(scenario.matcher, p.a, p.b, scenario.mml, scenario.la_scoring)
                .map(|r| (p.id, r.similarity))
                .map_err(Error::from)
        })
        .collect()
}

fn with_similarity(table: &SimilarityTable, matched: &[(PairId, f64)]) -> SimilarityTable {
    let mut out = table.clone();
    for e in out.entries_mut() {
        e.sim_sm = None;
    }
    for &(pair, sim) in matched {
        let entries = out.entries_mut();
        if let Ok(i) = entries.binary_search_by_key(&pair, |e| e.pair) {
            entries[i].sim_sm = Some(sim);
        }
    }
    out
}

/// IR table of a corpus together with its pairs.
pub fn score_corpus(corpus: &Corpus) -> Result<(Vec<ComparisonPair<'_>>, SimilarityTable), Error> {
    let pairs = generate_pairs(corpus)?;
    let table = score_pairs(&pairs);
    Ok((pairs, table))
}

/// Runs the detection phases on one corpus.
pub fn detect_corpus(corpus: &Corpus, scenario: &ScenarioConfig, full_pass: bool) -> Result<DatasetDetection, Error> {
    scenario.validate()?;
    let (pairs, table) = score_corpus(corpus)?;
    let outcome = apply_filter(&table, scenario)?;
    let passed_pairs: Vec<_> = pairs.iter().copied().filter(|p| outcome.is_passed(p.id)).collect();
    let matched = match_pairs(&passed_pairs, scenario)?;
    let filtered = with_similarity(&table, &matched);

    let metrics = if full_pass {
        let full = with_similarity(&table, &match_pairs(&pairs, scenario)?);
        let ranks = RankTable::from_table(&full)?;
        evaluate(&corpus.dataset_id, scenario, &table, &outcome, Some((&full, &ranks)))?
    } else {
        evaluate(&corpus.dataset_id, scenario, &table, &outcome, None)?
    };

    Ok(DatasetDetection {
        stats: corpus.stats(),
        metrics,
        rows: pair_rows(corpus, &filtered, &outcome),
    })
}

fn pair_rows(corpus: &Corpus, table: &SimilarityTable, outcome: &FilterOutcome) -> Vec<PairRow> {
    let mut ordered: Vec<_> = table.entries().iter().collect();
    ordered.sort_by(|x, y| {
        let sm = match (x.sim_sm, y.sim_sm) {
            (Some(a), Some(b)) => b.total_cmp(&a),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        sm.then(y.sim_ir.total_cmp(&x.sim_ir)).then(x.pair.cmp(&y.pair))
    });
    ordered
        .into_iter()
        .map(|e| {
            let (a, b) = corpus.pair_names(e.pair);
            PairRow {
                a: a.to_string(),
                b: b.to_string(),
                sim_ir: round6(e.sim_ir),
                passed: outcome.is_passed(e.pair),
                sim_sm: e.sim_sm.map(round6),
            }
        })
        .collect()
}

pub fn run_detect(config: &RunConfig) -> Result<DetectionReport, Error> {
    config.scenario.validate()?;
    let corpora = discover_datasets(&config.dataset_root, &config.load_options())?;
    detect_corpora(&corpora, &config.scenario, config.full_pass)
}

pub fn detect_corpora(
    corpora: &[Corpus],
    scenario: &ScenarioConfig,
    full_pass: bool,
) -> Result<DetectionReport, Error> {
    let datasets = corpora
        .iter()
        .map(|c| detect_corpus(c, scenario, full_pass))
        .collect::<Result<_, _>>()?;
    Ok(DetectionReport {
        schema_version: REPORT_SCHEMA_VERSION,
        scenario: *scenario,
        datasets,
    })
}

/// Everything of a scenario except the raw threshold, plus the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub matcher: MatcherKind,
    pub mml: usize,
    pub la_scoring: LaScoring,
    pub mechanisms: Vec<Mechanism>,
    pub thresholds: Vec<f64>,
}

impl SweepConfig {
    pub fn new(matcher: MatcherKind) -> Self {
        SweepConfig {
            matcher,
            mml: DEFAULT_MML,
            la_scoring: LaScoring::default(),
            mechanisms: Mechanism::ALL.to_vec(),
            thresholds: default_thresholds(),
        }
    }

    pub fn scenario(&self, mechanism: Mechanism, raw: f64) -> ScenarioConfig {
        ScenarioConfig {
            mechanism,
            raw_threshold: raw,
            matcher: self.matcher,
            mml: self.mml,
            la_scoring: self.la_scoring,
        }
    }
}

/// `0.0, 0.1, ..., 1.0`.
pub fn default_thresholds() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Average of the normalized metrics over sub-datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub scenario: ScenarioConfig,
    pub datasets: usize,
    pub effective_threshold: Option<f64>,
    pub nep_norm: f64,
    pub ranp_pct: f64,
    pub dep_norm: Option<f64>,
    pub pearson_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    /// Sub-dataset id, `mean` (average of per-dataset values) or `pooled`.
    pub dataset: String,
    pub matcher: MatcherKind,
    pub pairs: usize,
    pub pearson_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<ScenarioReport>,
    /// Only filled when more than one sub-dataset was swept.
    pub means: Vec<MeanRow>,
    pub correlations: Vec<CorrelationRow>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn mean_all(values: Vec<Option<f64>>) -> Option<f64> {
    values
        .into_iter()
        .collect::<Option<Vec<f64>>>()
        .and_then(|v| mean(v.into_iter()))
}

/// Sweeps every mechanism over the threshold grid on every corpus.
///
/// IR scoring and the full string-matching pass run once per corpus and
/// are shared by all scenarios.
pub fn sweep_corpora(corpora: &[Corpus], config: &SweepConfig) -> Result<SweepReport, Error> {
    let mut rows = Vec::new();
    let mut correlations = Vec::new();
    let mut pooled = (Vec::new(), Vec::new());
    let probe = config.scenario(Mechanism::Static, 0.0);
    probe.validate()?;

    for corpus in corpora {
        let (pairs, table) = score_corpus(corpus)?;
        let full = with_similarity(&table, &match_pairs(&pairs, &probe)?);
        let ranks = RankTable::from_table(&full)?;
        for (ir, sm) in full.entries().iter().filter_map(|e| Some((e.sim_ir, e.sim_sm?))) {
            pooled.0.push(ir);
            pooled.1.push(sm);
        }
        correlations.push(CorrelationRow {
            dataset: corpus.dataset_id.clone(),
            matcher: config.matcher,
            pairs: full.len(),
            pearson_r: crate::metrics::correlation(&full),
        });
        for &mechanism in &config.mechanisms {
            for &raw in &config.thresholds {
                let scenario = config.scenario(mechanism, raw);
                scenario.validate()?;
                let outcome = apply_filter(&table, &scenario)?;
                rows.push(evaluate(
                    &corpus.dataset_id,
                    &scenario,
                    &table,
                    &outcome,
                    Some((&full, &ranks)),
                )?);
            }
        }
    }

    let mut means = Vec::new();
    if corpora.len() > 1 {
        for &mechanism in &config.mechanisms {
            for &raw in &config.thresholds {
                let group: Vec<&ScenarioReport> = rows
                    .iter()
                    .filter(|r| r.scenario.mechanism == mechanism && r.scenario.raw_threshold == raw)
                    .collect();
                means.push(MeanRow {
                    scenario: config.scenario(mechanism, raw),
                    datasets: group.len(),
                    effective_threshold: mean_all(group.iter().map(|r| r.effective_threshold).collect()),
                    nep_norm: mean(group.iter().map(|r| r.nep_norm)).unwrap_or(0.0),
                    ranp_pct: mean(group.iter().map(|r| r.ranp_pct)).unwrap_or(0.0),
                    dep_norm: mean_all(group.iter().map(|r| r.dep_norm).collect()),
                    pearson_r: mean_all(group.iter().map(|r| r.pearson_r).collect()),
                });
            }
        }
        correlations.push(CorrelationRow {
            dataset: "mean".to_string(),
            matcher: config.matcher,
            pairs: correlations.iter().map(|c| c.pairs).sum(),
            pearson_r: mean_all(correlations.iter().map(|c| c.pearson_r).collect()),
        });
        correlations.push(CorrelationRow {
            dataset: "pooled".to_string(),
            matcher: config.matcher,
            pairs: pooled.0.len(),
            pearson_r: crate::metrics::pearson(&pooled.0, &pooled.1).ok(),
        });
    }

    Ok(SweepReport {
        rows,
        means,
        correlations,
    })
}

/// Sweeps every sub-dataset under `root`.
pub fn run_sweep(root: &std::path::Path, config: &SweepConfig, options: &LoadOptions) -> Result<SweepReport, Error> {
    let corpora = discover_datasets(root, options)?;
    sweep_corpora(&corpora, config)
}
