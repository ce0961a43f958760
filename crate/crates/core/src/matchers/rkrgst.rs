use super::{dice, MatchError, MatchResult, Tile};
use crate::lexer::{TokenKind, TokenSequence};

const BASE: u64 = 0x100_0000_01b3;

fn code(kind: TokenKind) -> u64 {
    kind as u64 + 1
}

/// Unmarked maximal runs `[start, end)` of at least `min_len` tokens.
fn unmarked_runs(marked: &[bool], min_len: usize) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &m) in marked.iter().chain(std::iter::once(&true)).enumerate() {
        match (m, start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                if i - s >= min_len {
                    runs.push((s, i));
                }
                start = None;
            }
            _ => {}
        }
    }
    runs
}

/// Karp-Rabin fingerprints of every unmarked window of length `len`.
fn windows(seq: &[TokenKind], marked: &[bool], len: usize, mut visit: impl FnMut(usize, u64) -> bool) {
    let high = BASE.wrapping_pow(len as u32 - 1);
    for (start, end) in unmarked_runs(marked, len) {
        let mut hash = seq[start..start + len]
            .iter()
            .fold(0u64, |h, &k| h.wrapping_mul(BASE).wrapping_add(code(k)));
        let mut i = start;
        loop {
            if !visit(i, hash) {
                return;
            }
            if i + len >= end {
                break;
            }
            hash = hash
                .wrapping_sub(code(seq[i]).wrapping_mul(high))
                .wrapping_mul(BASE)
                .wrapping_add(code(seq[i + len]));
            i += 1;
        }
    }
}

struct Tiling<'s> {
    a: &'s [TokenKind],
    b: &'s [TokenKind],
    marked_a: Vec<bool>,
    marked_b: Vec<bool>,
}

impl Tiling<'_> {
    /// Starts `(i, j)` of unmarked common windows of length `len`, ordered
    /// by `i` then `j`. With `first_only`, stops at the first hit.
    fn scan(&self, len: usize, first_only: bool) -> Vec<(usize, usize)> {
        let mut table: Vec<(u64, usize)> = Vec::new();
        windows(self.b, &self.marked_b, len, |j, h| {
            table.push((h, j));
            true
        });
        let mut hits = Vec::new();
        if table.is_empty() {
            return hits;
        }
        table.sort_unstable();
        windows(self.a, &self.marked_a, len, |i, h| {
            let from = table.partition_point(|&(t, _)| t < h);
            for &(_, j) in table[from..].iter().take_while(|&&(t, _)| t == h) {
                // fingerprints can collide
                if self.a[i..i + len] == self.b[j..j + len] {
                    hits.push((i, j));
                    if first_only {
                        return false;
                    }
                }
            }
            true
        });
        hits
    }

    fn longest_run(marked: &[bool]) -> usize {
        unmarked_runs(marked, 1).iter().map(|(s, e)| e - s).max().unwrap_or(0)
    }

    fn is_free(&self, i: usize, j: usize, len: usize) -> bool {
        !self.marked_a[i..i + len].iter().any(|&m| m) && !self.marked_b[j..j + len].iter().any(|&m| m)
    }

    /// Longest unmarked common substring length in `[mml, upper]`, by
    /// bisection on window length (a common window of length `n` implies
    /// one of every shorter length).
    fn max_match(&self, mml: usize, upper: usize) -> Option<usize> {
        if upper < mml || self.scan(mml, true).is_empty() {
            return None;
        }
        let (mut lo, mut hi) = (mml, upper);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.scan(mid, true).is_empty() {
                hi = mid - 1;
            } else {
                lo = mid;
            }
        }
        Some(lo)
    }

    fn run(mut self, mml: usize) -> Vec<Tile> {
        let mut tiles = Vec::new();
        let mut upper = self.a.len().min(self.b.len());
        loop {
            upper = upper
                .min(Self::longest_run(&self.marked_a))
                .min(Self::longest_run(&self.marked_b));
            let Some(len) = self.max_match(mml, upper) else {
                break;
            };
            // Every hit at the maximal length is a maximal match. Marking
            // them in (start_a, start_b) order, skipping occluded ones, is
            // the same as re-running the greedy search after each tile.
            for (i, j) in self.scan(len, false) {
                if self.is_free(i, j, len) {
                    self.marked_a[i..i + len].fill(true);
                    self.marked_b[j..j + len].fill(true);
                    tiles.push(Tile {
                        start_a: i,
                        start_b: j,
                        length: len,
                    });
                }
            }
            upper = len;
        }
        tiles
    }
}

/// Greedy string tiling over token kinds, accelerated with Karp-Rabin
/// fingerprints.
///
/// Repeatedly marks the longest unmarked common substring of at least
/// `mml` tokens. Equal-length candidates are taken in order of smallest
/// start, then smallest partner start, in the lexicographically smaller of
/// the two sequences; this keeps the result independent of argument order.
/// Tiles are reported in the caller's orientation.
pub fn rkrgst(a: &[TokenKind], b: &[TokenKind], mml: usize) -> Result<MatchResult, MatchError> {
    if mml == 0 {
        return Err(MatchError::InvalidMml);
    }
    let swap = a > b;
    let (x, y) = if swap { (b, a) } else { (a, b) };
    let mut tiles = Tiling {
        a: x,
        b: y,
        marked_a: vec![false; x.len()],
        marked_b: vec![false; y.len()],
    }
    .run(mml);
    if swap {
        for t in &mut tiles {
            std::mem::swap(&mut t.start_a, &mut t.start_b);
        }
    }
    let coverage: usize = tiles.iter().map(|t| t.length).sum();
    Ok(MatchResult {
        similarity: dice(coverage, a.len(), b.len()),
        coverage: coverage as u64,
        tiles,
    })
}

pub fn rkrgst_similarity(a: &TokenSequence, b: &TokenSequence, mml: usize) -> Result<MatchResult, MatchError> {
    rkrgst(&a.kinds(), &b.kinds(), mml)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    const X: TokenKind = Ident;
    const Y: TokenKind = Semi;
    const Z: TokenKind = Plus;
    const W: TokenKind = Minus;
    const Q: TokenKind = KwIf;

    #[test]
    fn identical_sequences_form_one_tile() {
        let a = [X, Y, Z, W, X, Y, Z, Q, Y, X];
        let r = rkrgst(&a, &a, 3).unwrap();
        assert_eq!(r.similarity, 1.0);
        assert_eq!(
            r.tiles,
            vec![Tile {
                start_a: 0,
                start_b: 0,
                length: 10
            }]
        );
    }

    #[test]
    fn disjoint_kinds() {
        let r = rkrgst(&[X, Y, X], &[Z, W, Z], 1).unwrap();
        assert_eq!((r.similarity, r.coverage), (0.0, 0));
        assert!(r.tiles.is_empty());
    }

    #[test]
    fn shared_prefix() {
        let r = rkrgst(&[X, Y, Z, W], &[X, Y, Z, Q], 3).unwrap();
        assert_eq!(r.coverage, 3);
        assert_eq!(r.similarity, 0.75);
    }

    #[test]
    fn empty_and_short_inputs() {
        assert_eq!(rkrgst(&[], &[], 1).unwrap().similarity, 0.0);
        assert_eq!(rkrgst(&[X], &[], 1).unwrap().similarity, 0.0);
        assert_eq!(rkrgst(&[X, Y], &[X, Y], 3).unwrap().similarity, 0.0);
        assert_eq!(rkrgst(&[X], &[X], 0), Err(MatchError::InvalidMml));
    }

    #[test]
    fn transposed_blocks_are_both_found() {
        let a = [X, Y, Z, Q, W, W, Q];
        let b = [Q, W, W, Q, X, Y, Z];
        let r = rkrgst(&a, &b, 3).unwrap();
        assert_eq!(r.coverage, 7);
        assert_eq!(
            r.tiles,
            vec![
                Tile {
                    start_a: 3,
                    start_b: 0,
                    length: 4
                },
                Tile {
                    start_a: 0,
                    start_b: 4,
                    length: 3
                },
            ]
        );
    }

    #[test]
    fn equal_length_ties_prefer_small_starts() {
        let r = rkrgst(&[X, Y, X, Y], &[X, Y], 2).unwrap();
        assert_eq!(
            r.tiles,
            vec![Tile {
                start_a: 0,
                start_b: 0,
                length: 2
            }]
        );
    }

    #[test]
    fn runs() {
        assert_eq!(unmarked_runs(&[false, false, true, false], 1), vec![(0, 2), (3, 4)]);
        assert_eq!(unmarked_runs(&[false, false, true, false], 2), vec![(0, 2)]);
        assert!(unmarked_runs(&[], 1).is_empty());
    }
}
