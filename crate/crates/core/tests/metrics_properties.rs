use std::collections::BTreeSet;

use proptest::prelude::*;
use tileguard_core::ir_filter::SimilarityEntry;
use tileguard_core::metrics::{anp_baseline, anp_filtered, dep, dep_worst_case, evaluate, pearson, RankTable};
use tileguard_core::pipeline::default_thresholds;
use tileguard_core::thresholds::filter_table;
use tileguard_core::{MatcherKind, Mechanism, PairId, ScenarioConfig, SimilarityTable};

fn entries(rows: &[(usize, usize, f64, f64)]) -> SimilarityTable {
    SimilarityTable::from_entries(
        rows.iter()
            .enumerate()
            .map(|(i, &(size_a, size_b, sim_ir, sm))| SimilarityEntry {
                pair: PairId::new(i, rows.len() + i),
                size_a,
                size_b,
                sim_ir,
                sim_sm: Some(sm),
            })
            .collect(),
    )
}

fn rows() -> impl Strategy<Value = Vec<(usize, usize, f64, f64)>> {
    let sim = prop_oneof![0.0f64..=1.0, (0u8..=3).prop_map(|k| f64::from(k) / 3.0)];
    prop::collection::vec((1usize..200, 1usize..200, sim.clone(), sim), 1..30)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// IR rank of pair `i` is `i + 1`; SM rank is `perm[i] + 1`.
fn ranked(perm: &[usize]) -> (SimilarityTable, RankTable) {
    let n = perm.len() as f64;
    let rows: Vec<_> = perm
        .iter()
        .enumerate()
        .map(|(i, &p)| (1, 1, 1.0 - i as f64 / n, 1.0 - p as f64 / n))
        .collect();
    let t = entries(&rows);
    let r = RankTable::from_table(&t).unwrap();
    (t, r)
}

#[test]
fn dep_bounds_by_enumeration() {
    for total in 1..=6usize {
        let mut best = vec![i64::MIN; total + 1];
        for perm in permutations(total) {
            let (t, ranks) = ranked(&perm);
            for mask in 0u32..(1 << total) {
                let excluded: BTreeSet<PairId> = (0..total)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| t.entries()[i].pair)
                    .collect();
                let n = excluded.len() as i64;
                let bound = n * (total as i64 - n);
                let (raw, _) = dep(&excluded, &ranks, total).unwrap();
                assert!(-bound <= raw && raw <= bound, "N={total} perm={perm:?} mask={mask:b}");
                best[n as usize] = best[n as usize].max(raw);
            }
        }
        for (n, &b) in best.iter().enumerate() {
            assert_eq!(b, (n * (total - n)) as i64, "N={total} n={n}");
        }
    }
}

#[test]
fn dep_worst_case_normalizes_to_one() {
    for total in 2..=12usize {
        let n = total / 2;
        // bottom n IR ranks are the top n SM ranks
        let perm: Vec<usize> = (0..total).map(|i| (i + n) % total).collect();
        let (t, ranks) = ranked(&perm);
        let excluded: BTreeSet<PairId> = t.entries()[total - n..].iter().map(|e| e.pair).collect();
        let (raw, norm) = dep(&excluded, &ranks, total).unwrap();
        assert_eq!(raw as u64, dep_worst_case(total));
        assert_eq!(norm, 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn anp_decomposition(rs in rows()) {
        let t = entries(&rs);
        let overhead: u64 = rs.iter().map(|&(a, b, _, _)| (a + b) as u64).sum();
        prop_assert_eq!(anp_filtered(t.entries(), 0.0) - anp_baseline(t.entries()), overhead);
    }

    #[test]
    fn ranp_never_drops_as_threshold_rises(rs in rows()) {
        let t = entries(&rs);
        let ranks = RankTable::from_table(&t).unwrap();
        for mechanism in [Mechanism::Static, Mechanism::Range, Mechanism::PairCount] {
            let mut previous = f64::NEG_INFINITY;
            for raw in default_thresholds() {
                let scenario = ScenarioConfig::new(mechanism, raw, MatcherKind::Rkrgst);
                let outcome = filter_table(&t, mechanism, raw).unwrap();
                let report = evaluate("d", &scenario, &t, &outcome, Some((&t, &ranks))).unwrap();
                prop_assert!(report.ranp_pct >= previous);
                previous = report.ranp_pct;
                // exclusions of the lowest IR pairs never have negative dissonance
                prop_assert!(report.dep_raw.unwrap() >= 0);
                let n = outcome.excluded.len();
                let total = t.len();
                let rank_sum: usize = outcome.excluded.iter().map(|p| ranks.rank_ir[p]).sum();
                prop_assert_eq!(rank_sum, (total - n + 1..=total).sum::<usize>());
            }
        }
    }

    #[test]
    fn pearson_affine_invariant(
        xy in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 3..40),
        scale in 0.01f64..100.0,
        shift in -100.0f64..100.0,
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let spread = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assume!(spread(&xs) > 1e-3 && spread(&ys) > 1e-3);
        let r = pearson(&xs, &ys).unwrap();
        let moved: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
        prop_assert!((pearson(&moved, &ys).unwrap() - r).abs() <= 1e-9);
        let moved_y: Vec<f64> = ys.iter().map(|y| scale * y + shift).collect();
        prop_assert!((pearson(&xs, &moved_y).unwrap() - r).abs() <= 1e-9);
        prop_assert!((-1.0..=1.0).contains(&r));
    }
}

#[test]
fn pearson_reference_value() {
    let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
    assert!((r - 0.8).abs() < 1e-9);
}
