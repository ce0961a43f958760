//! Seeded generator of plagiarized variants.
//!
//! Attack levels climb a ladder from cosmetic edits to heavy rewrites:
//!
//! | level | edits applied |
//! |-------|---------------|
//! | 1 | comment/whitespace only, invisible after lexing |
//! | 2 | literal swaps |
//! | 3 | + reordering of adjacent simple statements |
//! | 4 | + dead statement insertion |
//! | 5 | + small deletions |
//! | 6 | + span rewrites until at least 30% of the tokens are edited |
//!
//! All edits work on token kinds. Sequences can be turned back into Java
//! text with [`crate::lexer::render_kinds`].

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Corpus, CorpusError};
use crate::lexer::{self, render_kinds, TokenKind, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttackLevel(u8);

impl AttackLevel {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 6;

    pub fn new(level: u8) -> Result<Self, CorpusError> {
        if (Self::MIN..=Self::MAX).contains(&level) {
            Ok(AttackLevel(level))
        } else {
            Err(CorpusError::InvalidLevel(level))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Number of light edit operations relative to the seed length.
    fn operation_rate(self) -> f64 {
        match self.0 {
            1 => 0.0,
            2 => 0.02,
            3 => 0.03,
            4 => 0.05,
            _ => 0.07,
        }
    }

    fn operators(self) -> &'static [Operator] {
        use Operator::*;
        match self.0 {
            1 => &[],
            2 => &[SwapLiteral],
            3 => &[SwapLiteral, ReorderStatements],
            4 => &[SwapLiteral, ReorderStatements, InsertDeadCode],
            _ => &[SwapLiteral, ReorderStatements, InsertDeadCode, DeleteTokens],
        }
    }
}

/// Minimum fraction of tokens a level-6 variant differs from its seed by.
const HEAVY_EDIT_FRACTION: f64 = 0.3;

#[derive(Debug, Clone, Copy)]
enum Operator {
    SwapLiteral,
    ReorderStatements,
    InsertDeadCode,
    DeleteTokens,
}

const LITERALS: [TokenKind; 6] = [
    TokenKind::IntLit,
    TokenKind::FloatLit,
    TokenKind::StringLit,
    TokenKind::CharLit,
    TokenKind::BoolLit,
    TokenKind::NullLit,
];

const DEAD_CODE: &[&[TokenKind]] = {
    use TokenKind::*;
    &[
        &[KwInt, Ident, Assign, IntLit, Semi],
        &[KwBoolean, Ident, Assign, BoolLit, Semi],
        &[Ident, Assign, Ident, Semi],
        &[KwIf, LParen, BoolLit, RParen, LBrace, Ident, Inc, Semi, RBrace],
        &[Ident, Ident, Assign, StringLit, Semi],
    ]
};

fn apply(op: Operator, kinds: &mut Vec<TokenKind>, rng: &mut ChaCha8Rng) -> bool {
    match op {
        Operator::SwapLiteral => swap_literal(kinds, rng),
        Operator::ReorderStatements => reorder_statements(kinds, rng),
        Operator::InsertDeadCode => {
            insert_dead_code(kinds, rng);
            true
        }
        Operator::DeleteTokens => delete_tokens(kinds, rng),
    }
}

fn swap_literal(kinds: &mut [TokenKind], rng: &mut ChaCha8Rng) -> bool {
    let positions: Vec<usize> = (0..kinds.len()).filter(|&i| kinds[i].is_literal()).collect();
    let Some(&pos) = positions.choose(rng) else {
        return false;
    };
    let current = kinds[pos];
    let others: Vec<TokenKind> = LITERALS.iter().copied().filter(|&k| k != current).collect();
    kinds[pos] = *others.choose(rng).expect("at least one other literal kind");
    true
}

/// Simple statements: `;`-terminated runs with balanced parentheses that
/// start right after a statement boundary and contain no braces.
fn simple_statements(kinds: &[TokenKind]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut clean = true;
    let mut depth = 0i32;
    for (i, &k) in kinds.iter().enumerate() {
        match k {
            TokenKind::LParen => depth += 1,
            TokenKind::RParen => depth -= 1,
            _ => {}
        }
        match k {
            TokenKind::Semi => {
                if clean && depth == 0 {
                    out.push((start, i + 1));
                }
                start = i + 1;
                clean = true;
                depth = 0;
            }
            TokenKind::LBrace | TokenKind::RBrace => {
                start = i + 1;
                clean = true;
                depth = 0;
            }
            _ => {}
        }
        if depth < 0 {
            clean = false;
        }
    }
    out
}

fn reorder_statements(kinds: &mut Vec<TokenKind>, rng: &mut ChaCha8Rng) -> bool {
    let stmts = simple_statements(kinds);
    let adjacent: Vec<usize> = (0..stmts.len().saturating_sub(1))
        .filter(|&i| {
            stmts[i].1 == stmts[i + 1].0 && kinds[stmts[i].0..stmts[i].1] != kinds[stmts[i + 1].0..stmts[i + 1].1]
        })
        .collect();
    let Some(&i) = adjacent.choose(rng) else {
        return false;
    };
    let (s1, e1) = stmts[i];
    let (_, e2) = stmts[i + 1];
    let mut swapped: Vec<TokenKind> = kinds[e1..e2].to_vec();
    swapped.extend_from_slice(&kinds[s1..e1]);
    kinds.splice(s1..e2, swapped);
    true
}

fn insert_dead_code(kinds: &mut Vec<TokenKind>, rng: &mut ChaCha8Rng) {
    let boundaries: Vec<usize> = (0..kinds.len())
        .filter(|&i| matches!(kinds[i], TokenKind::Semi | TokenKind::LBrace))
        .map(|i| i + 1)
        .collect();
    let at = boundaries.choose(rng).copied().unwrap_or(0);
    let snippet = DEAD_CODE.choose(rng).expect("non-empty template list");
    kinds.splice(at..at, snippet.iter().copied());
}

fn delete_tokens(kinds: &mut Vec<TokenKind>, rng: &mut ChaCha8Rng) -> bool {
    if kinds.len() < 2 {
        return false;
    }
    let len = rng.gen_range(1..=3).min(kinds.len() - 1);
    let at = rng.gen_range(0..=kinds.len() - len);
    kinds.drain(at..at + len);
    true
}

fn rewrite_span(kinds: &mut [TokenKind], rng: &mut ChaCha8Rng) -> usize {
    if kinds.is_empty() {
        return 0;
    }
    let len = rng.gen_range(3..=8).min(kinds.len());
    let at = rng.gen_range(0..=kinds.len() - len);
    for k in &mut kinds[at..at + len] {
        *k = *TokenKind::ALL.choose(rng).expect("non-empty vocabulary");
    }
    len
}

fn make_variant(seed: &[TokenKind], level: AttackLevel, rng: &mut ChaCha8Rng) -> Vec<TokenKind> {
    let mut kinds = seed.to_vec();
    let ops = level.operators();
    if !ops.is_empty() {
        let count = (level.operation_rate() * seed.len() as f64).ceil().max(1.0) as usize;
        for _ in 0..count {
            let op = *ops.choose(rng).expect("non-empty operator set");
            if !apply(op, &mut kinds, rng) {
                insert_dead_code(&mut kinds, rng);
            }
        }
    }
    if level.get() == AttackLevel::MAX {
        let target = (HEAVY_EDIT_FRACTION * seed.len() as f64).ceil() as usize;
        while token_edit_distance(seed, &kinds) < target {
            let mut budget = target.saturating_sub(token_edit_distance(seed, &kinds)).max(1);
            while budget > 0 {
                let edited = rewrite_span(&mut kinds, rng);
                if edited == 0 {
                    kinds.push(TokenKind::Ident);
                    break;
                }
                budget = budget.saturating_sub(edited);
            }
        }
    }
    kinds
}

fn stem(id: &str) -> &str {
    id.strip_suffix(".java").unwrap_or(id)
}

/// Derives `count` plagiarized copies of `seed` at the given attack level.
///
/// Output is a pure function of the arguments. Variant ids are
/// `<seed stem>_L<level>_<k>.java`.
pub fn generate_variants(
    seed: &TokenSequence,
    level: u8,
    count: usize,
    rng_seed: u64,
) -> Result<Vec<TokenSequence>, CorpusError> {
    if seed.is_empty() {
        return Err(CorpusError::EmptySeed);
    }
    let level = AttackLevel::new(level)?;
    if count == 0 {
        return Err(CorpusError::ZeroCount);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ (u64::from(level.get()) << 56));
    let kinds = seed.kinds();
    let base = stem(&seed.submission_id);
    Ok((0..count)
        .map(|k| {
            let variant = make_variant(&kinds, level, &mut rng);
            TokenSequence::from_kinds(format!("{base}_L{}_{k}.java", level.get()), &variant)
        })
        .collect())
}

/// Levenshtein distance over token kinds.
pub fn token_edit_distance(a: &[TokenKind], b: &[TokenKind]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &y) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(x != y);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Built-in introductory programming exercises used as originals.
#[derive(Debug, Clone, Copy)]
pub struct SeedProgram {
    pub name: &'static str,
    pub source: &'static str,
}

impl SeedProgram {
    pub fn tokens(&self) -> TokenSequence {
        lexer::tokenize_named(&format!("{}.java", self.name), self.source).expect("bundled seed programs lex cleanly")
    }
}

pub fn seed_programs() -> &'static [SeedProgram] {
    const SEEDS: &[SeedProgram] = &[
        SeedProgram {
            name: "BankAccount",
            source: include_str!("seeds/BankAccount.java"),
        },
        SeedProgram {
            name: "BubbleSort",
            source: include_str!("seeds/BubbleSort.java"),
        },
        SeedProgram {
            name: "Factorial",
            source: include_str!("seeds/Factorial.java"),
        },
        SeedProgram {
            name: "GradeCalculator",
            source: include_str!("seeds/GradeCalculator.java"),
        },
        SeedProgram {
            name: "MatrixMultiply",
            source: include_str!("seeds/MatrixMultiply.java"),
        },
        SeedProgram {
            name: "Palindrome",
            source: include_str!("seeds/Palindrome.java"),
        },
        SeedProgram {
            name: "PrimeSieve",
            source: include_str!("seeds/PrimeSieve.java"),
        },
    ];
    SEEDS
}

/// Shape of a synthetic dataset root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthConfig {
    /// Number of sub-datasets (`P1`, `P2`, ...).
    pub subdatasets: usize,
    /// How many of the bundled seed programs each sub-dataset uses.
    pub programs: usize,
    pub levels: Vec<u8>,
    pub variants_per_level: usize,
    pub rng_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            subdatasets: 3,
            programs: seed_programs().len(),
            levels: (AttackLevel::MIN..=AttackLevel::MAX).collect(),
            variants_per_level: 1,
            rng_seed: 42,
        }
    }
}

/// Builds sub-datasets, each holding the originals plus their variants.
pub fn synthesize(config: &SynthConfig) -> Result<Vec<Corpus>, CorpusError> {
    let seeds: Vec<TokenSequence> = seed_programs()
        .iter()
        .take(config.programs.max(1))
        .map(SeedProgram::tokens)
        .collect();
    (0..config.subdatasets.max(1))
        .map(|d| {
            let mut submissions = seeds.clone();
            for (p, seed) in seeds.iter().enumerate() {
                let stream = config
                    .rng_seed
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(((d as u64) << 20) | p as u64);
                for &level in &config.levels {
                    submissions.extend(generate_variants(seed, level, config.variants_per_level, stream)?);
                }
            }
            Corpus::new(format!("P{}", d + 1), submissions)
        })
        .collect()
}

/// Writes corpora as `<dir>/<dataset>/<submission>` Java files.
pub fn write_corpora(corpora: &[Corpus], dir: &Path) -> io::Result<()> {
    for corpus in corpora {
        let sub = dir.join(&corpus.dataset_id);
        fs::create_dir_all(&sub)?;
        for seq in corpus.submissions() {
            let path = sub.join(&seq.submission_id);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, render_kinds(&seq.kinds()))?;
        }
    }
    Ok(())
}
