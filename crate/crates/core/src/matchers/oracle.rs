//! Slow reference implementations used to cross-check the matchers.
//!
//! Neither function shares code with the production paths: the tiling
//! oracle scans every start pair directly and the alignment oracle walks
//! every alignment path instead of filling a DP table.

use super::local_alignment::normalize;
use super::{dice, LaScoring, MatchError, MatchResult, Tile};
use crate::lexer::TokenKind;

pub const ORACLE_MAX_LEN: usize = 64;

fn guard(a: &[TokenKind], b: &[TokenKind], limit: usize) -> Result<(), MatchError> {
    if a.len() > limit || b.len() > limit {
        Err(MatchError::TooLargeForOracle {
            len_a: a.len(),
            len_b: b.len(),
        })
    } else {
        Ok(())
    }
}

/// Plain greedy string tiling: one exhaustive maximal-match scan per tile.
///
/// Uses the same orientation convention as [`super::rkrgst`]: the scan
/// runs over the lexicographically smaller sequence first.
pub fn gst_oracle(a: &[TokenKind], b: &[TokenKind], mml: usize) -> Result<MatchResult, MatchError> {
    if mml == 0 {
        return Err(MatchError::InvalidMml);
    }
    guard(a, b, ORACLE_MAX_LEN)?;
    if a > b {
        let mut r = gst_oracle(b, a, mml)?;
        for t in &mut r.tiles {
            std::mem::swap(&mut t.start_a, &mut t.start_b);
        }
        return Ok(r);
    }
    let mut marked_a = vec![false; a.len()];
    let mut marked_b = vec![false; b.len()];
    let mut tiles = Vec::new();
    loop {
        let mut best: Option<Tile> = None;
        for i in 0..a.len() {
            for j in 0..b.len() {
                let mut k = 0;
                while i + k < a.len() && j + k < b.len() && !marked_a[i + k] && !marked_b[j + k] && a[i + k] == b[j + k]
                {
                    k += 1;
                }
                if k >= mml && best.is_none_or(|t| k > t.length) {
                    best = Some(Tile {
                        start_a: i,
                        start_b: j,
                        length: k,
                    });
                }
            }
        }
        let Some(tile) = best else {
            break;
        };
        for k in 0..tile.length {
            marked_a[tile.start_a + k] = true;
            marked_b[tile.start_b + k] = true;
        }
        tiles.push(tile);
    }
    let coverage: usize = tiles.iter().map(|t| t.length).sum();
    Ok(MatchResult {
        similarity: dice(coverage, a.len(), b.len()),
        coverage: coverage as u64,
        tiles,
    })
}

/// Largest inputs the alignment enumeration accepts.
pub const ALIGNMENT_ORACLE_MAX_LEN: usize = 8;

/// Best local alignment score found by enumerating every alignment path
/// from every start cell. Exponential; meant for inputs of a few tokens.
pub fn local_alignment_oracle(a: &[TokenKind], b: &[TokenKind], scoring: LaScoring) -> Result<MatchResult, MatchError> {
    if !scoring.is_valid() {
        return Err(MatchError::InvalidScoring(scoring));
    }
    guard(a, b, ALIGNMENT_ORACLE_MAX_LEN)?;

    fn walk(a: &[TokenKind], b: &[TokenKind], i: usize, j: usize, score: i64, s: LaScoring, best: &mut i64) {
        *best = (*best).max(score);
        if i < a.len() && j < b.len() {
            let step = if a[i] == b[j] { s.matched } else { s.mismatch };
            walk(a, b, i + 1, j + 1, score + step, s, best);
        }
        if i < a.len() {
            walk(a, b, i + 1, j, score + s.gap, s, best);
        }
        if j < b.len() {
            walk(a, b, i, j + 1, score + s.gap, s, best);
        }
    }

    let mut best = 0i64;
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            walk(a, b, i, j, 0, scoring, &mut best);
        }
    }
    Ok(MatchResult {
        similarity: normalize(best, a.len(), b.len(), scoring),
        coverage: best as u64,
        tiles: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    #[test]
    fn gst_oracle_basics() {
        let a = [Ident, Semi, Plus, Minus];
        assert_eq!(gst_oracle(&a, &a, 2).unwrap().similarity, 1.0);
        assert_eq!(gst_oracle(&a, &a, 5).unwrap().similarity, 0.0);
        let r = gst_oracle(&a, &[Ident, Semi, Plus, KwIf], 3).unwrap();
        assert_eq!((r.coverage, r.similarity), (3, 0.75));
    }

    #[test]
    fn gst_oracle_guard() {
        let long = vec![Ident; ORACLE_MAX_LEN + 1];
        assert!(matches!(
            gst_oracle(&long, &[Ident], 1),
            Err(MatchError::TooLargeForOracle { .. })
        ));
    }

    #[test]
    fn alignment_oracle_gapped() {
        let r =
            local_alignment_oracle(&[Ident, Semi, Minus, Plus], &[Ident, Semi, Plus], LaScoring::default()).unwrap();
        assert_eq!(r.coverage, 5);
    }
}
