use super::{LaScoring, MatchError, MatchResult};
use crate::lexer::{TokenKind, TokenSequence};

/// Smith-Waterman with a linear gap penalty; returns the best cell.
pub fn local_alignment(a: &[TokenKind], b: &[TokenKind], scoring: LaScoring) -> Result<i64, MatchError> {
    let scoring = scoring.validate()?;
    let mut prev = vec![0i64; b.len() + 1];
    let mut cur = vec![0i64; b.len() + 1];
    let mut best = 0;
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            let s = if x == y { scoring.matched } else { scoring.mismatch };
            let h = (prev[j] + s)
                .max(prev[j + 1] + scoring.gap)
                .max(cur[j] + scoring.gap)
                .max(0);
            cur[j + 1] = h;
            best = best.max(h);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(best)
}

pub(crate) fn normalize(score: i64, len_a: usize, len_b: usize, scoring: LaScoring) -> f64 {
    let shorter = len_a.min(len_b);
    if shorter == 0 {
        return 0.0;
    }
    (score as f64 / (scoring.matched as f64 * shorter as f64)).clamp(0.0, 1.0)
}

/// Local alignment similarity, `score / (match * min(|a|, |b|))`.
pub fn local_alignment_similarity(
    a: &TokenSequence,
    b: &TokenSequence,
    scoring: LaScoring,
) -> Result<MatchResult, MatchError> {
    let (ka, kb) = (a.kinds(), b.kinds());
    let score = local_alignment(&ka, &kb, scoring)?;
    Ok(MatchResult {
        similarity: normalize(score, ka.len(), kb.len(), scoring),
        coverage: score as u64,
        tiles: Vec::new(),
    })
}
