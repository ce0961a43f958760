//! Dataset ingestion and combinatoric pair formation.
//!
//! A dataset root is laid out as `<root>/<subdataset>/<submission>.java`.
//! Every sub-dataset is compared only against itself.

mod synth;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use crate::lexer::{self, LexError, TokenSequence};

pub use synth::{
    generate_variants, seed_programs, synthesize, token_edit_distance, write_corpora, AttackLevel, SeedProgram,
    SynthConfig,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no readable .java submissions under {0}")]
    EmptyDataset(PathBuf),
    #[error("{0} is not a directory")]
    NotADirectory(PathBuf),
    #[error("dataset `{dataset}` has {found} submission(s); at least 2 are needed to form pairs")]
    TooFewSubmissions { dataset: String, found: usize },
    #[error("duplicate submission id `{0}`")]
    DuplicateSubmission(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to lex {path}: {source}")]
    Lex {
        path: PathBuf,
        #[source]
        source: LexError,
    },
    #[error("cannot derive variants from an empty seed sequence")]
    EmptySeed,
    #[error("attack level {0} is outside 1..=6")]
    InvalidLevel(u8),
    #[error("variant count must be positive")]
    ZeroCount,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Abort on the first file that fails to lex instead of skipping it.
    pub fail_on_lex_error: bool,
}

/// Submissions of one (sub-)dataset, sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub dataset_id: String,
    submissions: Vec<TokenSequence>,
}

impl Corpus {
    pub fn new(dataset_id: impl Into<String>, mut submissions: Vec<TokenSequence>) -> Result<Self, CorpusError> {
        submissions.sort_by(|a, b| a.submission_id.cmp(&b.submission_id));
        if let Some(w) = submissions
            .windows(2)
            .find(|w| w[0].submission_id == w[1].submission_id)
        {
            return Err(CorpusError::DuplicateSubmission(w[0].submission_id.clone()));
        }
        Ok(Corpus {
            dataset_id: dataset_id.into(),
            submissions,
        })
    }

    pub fn submissions(&self) -> &[TokenSequence] {
        &self.submissions
    }

    pub fn len(&self) -> usize {
        self.submissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.submissions.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        let n = self.submissions.len();
        n * n.saturating_sub(1) / 2
    }

    /// Submission ids of both members of a pair.
    pub fn pair_names(&self, id: PairId) -> (&str, &str) {
        (
            &self.submissions[id.first].submission_id,
            &self.submissions[id.second].submission_id,
        )
    }

    pub fn stats(&self) -> DatasetStats {
        let sizes: Vec<usize> = self.submissions.iter().map(TokenSequence::len).collect();
        let total: usize = sizes.iter().sum();
        DatasetStats {
            dataset_id: self.dataset_id.clone(),
            submissions: sizes.len(),
            min_tokens: sizes.iter().copied().min().unwrap_or(0),
            max_tokens: sizes.iter().copied().max().unwrap_or(0),
            avg_tokens: if sizes.is_empty() {
                0.0
            } else {
                total as f64 / sizes.len() as f64
            },
            pairs: self.pair_count(),
        }
    }
}

/// Identity of an unordered comparison pair.
///
/// Both fields index into [`Corpus::submissions`]; because submissions are
/// sorted by id, `first < second` is the lexicographic order of the ids and
/// the derived `Ord` is the pair-id order used for every tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairId {
    pub first: usize,
    pub second: usize,
}

impl PairId {
    pub fn new(first: usize, second: usize) -> Self {
        assert!(first < second, "pair ids are ordered and never self-pairs");
        PairId { first, second }
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ComparisonPair<'c> {
    pub id: PairId,
    pub a: &'c TokenSequence,
    pub b: &'c TokenSequence,
}

/// Row of the per-dataset statistics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub dataset_id: String,
    pub submissions: usize,
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub avg_tokens: f64,
    pub pairs: usize,
}

impl DatasetStats {
    pub const CSV_HEADER: &'static str = "dataset,submissions,min_tokens,max_tokens,avg_tokens,pairs";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.2},{}",
            self.dataset_id, self.submissions, self.min_tokens, self.max_tokens, self.avg_tokens, self.pairs
        )
    }
}

/// All `n(n-1)/2` pairs in lexicographic id order.
pub fn generate_pairs(corpus: &Corpus) -> Result<Vec<ComparisonPair<'_>>, CorpusError> {
    let subs = corpus.submissions();
    if subs.len() < 2 {
        return Err(CorpusError::TooFewSubmissions {
            dataset: corpus.dataset_id.clone(),
            found: subs.len(),
        });
    }
    let mut pairs = Vec::with_capacity(corpus.pair_count());
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            pairs.push(ComparisonPair {
                id: PairId::new(i, j),
                a: &subs[i],
                b: &subs[j],
            });
        }
    }
    Ok(pairs)
}

fn is_java(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "java")
}

fn relative_id(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn java_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = WalkDir::new(dir)
        .follow_links(true)
        .into_iter()
        .filter_map(|entry| match entry {
            Ok(e) => Some(e),
            Err(err) => {
                warn!("skipping unreadable entry: {err}");
                None
            }
        })
        .filter(|e| e.file_type().is_file() && is_java(e.path()))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    files
}

/// Loads every `.java` file below `dir` (recursively) as one dataset.
///
/// The dataset id is the directory name; submission ids are `/`-separated
/// paths relative to `dir`. Unreadable files are skipped with a warning,
/// as are files that fail to lex unless `fail_on_lex_error` is set.
pub fn load_dataset(dir: &Path, options: &LoadOptions) -> Result<Corpus, CorpusError> {
    if !dir.is_dir() {
        return Err(CorpusError::NotADirectory(dir.to_path_buf()));
    }
    let files = java_files(dir);
    let lexed: Vec<Result<Option<TokenSequence>, CorpusError>> = files
        .par_iter()
        .map(|path| {
            let id = relative_id(dir, path);
            let text = match fs::read(path) {
                Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
                Err(source) => {
                    warn!("skipping {}: {source}", path.display());
                    return Ok(None);
                }
            };
            match lexer::tokenize_named(&id, &text) {
                Ok(seq) => Ok(Some(seq)),
                Err(source) if options.fail_on_lex_error => Err(CorpusError::Lex {
                    path: path.clone(),
                    source,
                }),
                Err(err) => {
                    warn!("skipping {}: {err}", path.display());
                    Ok(None)
                }
            }
        })
        .collect();
    let mut submissions = Vec::with_capacity(lexed.len());
    for item in lexed {
        if let Some(seq) = item? {
            submissions.push(seq);
        }
    }
    if submissions.is_empty() {
        return Err(CorpusError::EmptyDataset(dir.to_path_buf()));
    }
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    Corpus::new(name, submissions)
}

/// Splits a dataset root into sub-datasets.
///
/// Each immediate subdirectory holding at least one `.java` file becomes a
/// sub-dataset. When there is none, the root itself is the only dataset.
/// Loose files next to sub-dataset directories are ignored.
pub fn discover_datasets(root: &Path, options: &LoadOptions) -> Result<Vec<Corpus>, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::NotADirectory(root.to_path_buf()));
    }
    let entries = fs::read_dir(root).map_err(|source| CorpusError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let mut subdirs = BTreeMap::new();
    let mut loose = 0usize;
    for entry in entries.flatten() {
        let path = entry.path();
        if path.is_dir() {
            if !java_files(&path).is_empty() {
                subdirs.insert(entry.file_name(), path);
            }
        } else if is_java(&path) {
            loose += 1;
        }
    }
    if subdirs.is_empty() {
        return Ok(vec![load_dataset(root, options)?]);
    }
    if loose > 0 {
        warn!("ignoring {loose} file(s) directly under {}", root.display());
    }
    subdirs.values().map(|dir| load_dataset(dir, options)).collect()
}
