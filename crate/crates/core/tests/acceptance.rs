//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tileguard_core::corpus::{generate_variants, seed_programs, synthesize, write_corpora, LoadOptions, SynthConfig};
use tileguard_core::ir_filter::SimilarityEntry;
use tileguard_core::lexer::token_vocabulary;
use tileguard_core::matchers::{
    gst_oracle, local_alignment_oracle, local_alignment_similarity, rkrgst_similarity, LaScoring,
};
use tileguard_core::metrics::{dep, dep_worst_case, evaluate, RankTable};
use tileguard_core::pipeline::{detect_corpus, run_sweep, score_corpus, sweep_corpora, SweepConfig};
use tileguard_core::report::sweep_csv;
use tileguard_core::thresholds::{filter_table, pair_count_cut, range_threshold};
use tileguard_core::{
    cosine_similarity, term_frequency_vector, Corpus, MatcherKind, Mechanism, PairId, ScenarioConfig, SimilarityTable,
    TermVector, TokenKind, TokenSequence,
};

type Outcome = Result<String, String>;

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_table(rng: &mut ChaCha8Rng) -> SimilarityTable {
    let n = rng.gen_range(1..=45);
    let coarse = rng.gen_bool(0.5);
    SimilarityTable::from_entries(
        (0..n)
            .map(|i| SimilarityEntry {
                pair: PairId::new(i, n + i),
                size_a: rng.gen_range(1..300),
                size_b: rng.gen_range(1..300),
                sim_ir: if coarse {
                    f64::from(rng.gen_range(0u8..=5)) / 5.0
                } else {
                    rng.gen()
                },
                sim_sm: Some(rng.gen()),
            })
            .collect(),
    )
}

fn small_sequence(rng: &mut ChaCha8Rng, alphabet: &[TokenKind], max: usize) -> Vec<TokenKind> {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

fn grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

fn worked_examples() -> Outcome {
    let rm = range_threshold(0.5, 0.3, 0.8).map_err(|e| e.to_string())?;
    check((rm - 0.55).abs() <= 1e-12, || format!("range threshold {rm}"))?;
    let k = pair_count_cut(0.5, 30).map_err(|e| e.to_string())?;
    check(k == 15, || format!("pair count cut {k}"))?;
    Ok(format!("range={rm} cut={k}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let alphabet = [TokenKind::Ident, TokenKind::Semi, TokenKind::Plus, TokenKind::LParen];
    let gst_cases = 2000;
    for case in 0..gst_cases {
        let a = TokenSequence::from_kinds("a", &small_sequence(&mut rng, &alphabet, 12));
        let b = TokenSequence::from_kinds("b", &small_sequence(&mut rng, &alphabet, 12));
        let mml = rng.gen_range(1..=3);
        let fast = rkrgst_similarity(&a, &b, mml).map_err(|e| e.to_string())?;
        let slow = gst_oracle(&a.kinds(), &b.kinds(), mml).map_err(|e| e.to_string())?;
        check(fast == slow, || {
            format!(
                "case {case}: {:?} vs {:?} on {:?} / {:?}",
                fast,
                slow,
                a.kinds(),
                b.kinds()
            )
        })?;
    }
    let la_cases = 500;
    for case in 0..la_cases {
        let a = TokenSequence::from_kinds("a", &small_sequence(&mut rng, &alphabet, 8));
        let b = TokenSequence::from_kinds("b", &small_sequence(&mut rng, &alphabet, 8));
        let scoring = LaScoring {
            matched: rng.gen_range(1..=4),
            mismatch: rng.gen_range(-3..=0),
            gap: rng.gen_range(-3..=0),
        };
        let dp = local_alignment_similarity(&a, &b, scoring).map_err(|e| e.to_string())?;
        let brute = local_alignment_oracle(&a.kinds(), &b.kinds(), scoring).map_err(|e| e.to_string())?;
        check(dp == brute, || format!("LA case {case}: {dp:?} vs {brute:?}"))?;
    }
    Ok(format!("{gst_cases} tiling cases, {la_cases} alignment cases"))
}

fn pcm_linearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tables: Vec<SimilarityTable> = (0..200).map(|_| random_table(&mut rng)).collect();
    let corpora = synthesize(&SynthConfig::default()).map_err(|e| e.to_string())?;
    for c in &corpora {
        tables.push(score_corpus(c).map_err(|e| e.to_string())?.1);
    }
    for (i, t) in tables.iter().enumerate() {
        let n = t.len();
        for k in 0..=10usize {
            let outcome = filter_table(t, Mechanism::PairCount, k as f64 / 10.0).map_err(|e| e.to_string())?;
            check(outcome.excluded.len() == k * n / 10, || {
                format!("table {i} (N={n}) at {k}/10: excluded {}", outcome.excluded.len())
            })?;
        }
    }
    Ok(format!("{} tables x 11 thresholds", tables.len()))
}

fn monotone_filtering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tables = 250;
    for i in 0..tables {
        let t = random_table(&mut rng);
        let mut thresholds = grid();
        thresholds.extend((0..10).map(|_| rng.gen::<f64>()));
        thresholds.sort_by(f64::total_cmp);
        for mechanism in Mechanism::ALL {
            let outcomes = thresholds
                .iter()
                .map(|&raw| filter_table(&t, mechanism, raw))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            for (w, raws) in outcomes.windows(2).zip(thresholds.windows(2)) {
                check(w[1].passed.is_subset(&w[0].passed), || {
                    format!(
                        "table {i} {mechanism:?}: passed({}) not within passed({})",
                        raws[1], raws[0]
                    )
                })?;
            }
        }
    }
    Ok(format!("{tables} tables x 3 mechanisms x 21 thresholds"))
}

fn ranp_sign() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tables: Vec<SimilarityTable> = (0..200).map(|_| random_table(&mut rng)).collect();
    for c in synthesize(&SynthConfig::default()).map_err(|e| e.to_string())? {
        tables.push(score_corpus(&c).map_err(|e| e.to_string())?.1);
    }
    for (i, t) in tables.iter().enumerate() {
        let overhead: f64 = t.entries().iter().map(|e| (e.size_a + e.size_b) as f64).sum();
        let baseline: f64 = t
            .entries()
            .iter()
            .map(|e| (e.size_a.max(e.size_b) as f64).powi(3))
            .sum();
        let run = |mechanism, raw| -> Result<f64, String> {
            let scenario = ScenarioConfig::new(mechanism, raw, MatcherKind::Rkrgst);
            let outcome = filter_table(t, mechanism, raw).map_err(|e| e.to_string())?;
            let report = evaluate("t", &scenario, t, &outcome, None).map_err(|e| e.to_string())?;
            Ok(report.ranp_pct)
        };
        let none = run(Mechanism::Static, 0.0)?;
        let expected_none = -100.0 * overhead / baseline;
        check((none - expected_none).abs() <= 1e-9, || {
            format!("table {i}: no exclusion {none} vs {expected_none}")
        })?;
        let all = run(Mechanism::PairCount, 1.0)?;
        let expected_all = 100.0 * (1.0 - overhead / baseline);
        check((all - expected_all).abs() <= 1e-9, || {
            format!("table {i}: full exclusion {all} vs {expected_all}")
        })?;
        check(none < 0.0, || format!("table {i}: RANP without exclusion is {none}"))?;
    }
    Ok(format!("{} tables", tables.len()))
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

/// IR rank of pair `i` is `i + 1`; its string-matching rank is `perm[i] + 1`.
fn ranked(perm: &[usize]) -> Result<(SimilarityTable, RankTable), String> {
    let n = perm.len() as f64;
    let t = SimilarityTable::from_entries(
        perm.iter()
            .enumerate()
            .map(|(i, &p)| SimilarityEntry {
                pair: PairId::new(i, perm.len() + i),
                size_a: 1,
                size_b: 1,
                sim_ir: 1.0 - i as f64 / n,
                sim_sm: Some(1.0 - p as f64 / n),
            })
            .collect(),
    );
    let r = RankTable::from_table(&t).map_err(|e| e.to_string())?;
    Ok((t, r))
}

fn dep_bounds() -> Outcome {
    let mut checked = 0usize;
    for total in 1..=6usize {
        for perm in permutations(total) {
            let (t, ranks) = ranked(&perm)?;
            for mask in 0u32..(1 << total) {
                let excluded: BTreeSet<PairId> = (0..total)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| t.entries()[i].pair)
                    .collect();
                let n = excluded.len();
                let bound = (n * (total - n)) as i64;
                let (raw, _) = dep(&excluded, &ranks, total).map_err(|e| e.to_string())?;
                check(-bound <= raw && raw <= bound, || {
                    format!("N={total} perm={perm:?} mask={mask:b}: {raw}")
                })?;
                // bottom-n IR ranks that hold the top-n string-matching ranks
                let bottom_is_top =
                    (0..total).all(|i| (mask & (1 << i) != 0) == (i >= total - n) && (i < total - n || perm[i] < n));
                if bottom_is_top {
                    check(raw == bound, || {
                        format!("N={total} perm={perm:?}: extreme set gives {raw}, bound {bound}")
                    })?;
                }
                checked += 1;
            }
        }
        let n = total / 2;
        let perm: Vec<usize> = (0..total).map(|i| (i + n) % total).collect();
        let (t, ranks) = ranked(&perm)?;
        let excluded: BTreeSet<PairId> = t.entries()[total - n..].iter().map(|e| e.pair).collect();
        let (raw, norm) = dep(&excluded, &ranks, total).map_err(|e| e.to_string())?;
        check(raw as u64 == dep_worst_case(total), || {
            format!("N={total}: worst case raw {raw}")
        })?;
        if total >= 2 {
            check(norm == 1.0, || format!("N={total}: worst case normalized {norm}"))?;
        }
    }
    Ok(format!("{checked} exclusion sets"))
}

fn clustered_corpus() -> Result<Corpus, String> {
    let original = seed_programs()[0].tokens();
    let mut subs = vec![original.clone()];
    for level in 1..=4u8 {
        subs.extend(generate_variants(&original, level, 3, 7).map_err(|e| e.to_string())?);
    }
    Corpus::new("clustered", subs).map_err(|e| e.to_string())
}

fn clustered_static_threshold() -> Outcome {
    let corpus = clustered_corpus()?;
    let (_, table) = score_corpus(&corpus).map_err(|e| e.to_string())?;
    let min = table.sim_min().unwrap_or(0.0);
    check(min > 0.5, || format!("corpus is not clustered: sim_min {min}"))?;
    let excluded = |mechanism, raw| -> Result<usize, String> {
        Ok(filter_table(&table, mechanism, raw)
            .map_err(|e| e.to_string())?
            .excluded
            .len())
    };
    for k in 0..=5 {
        let raw = k as f64 / 10.0;
        let n = excluded(Mechanism::Static, raw)?;
        check(n == 0, || format!("static {raw} excluded {n}"))?;
    }
    let rm = excluded(Mechanism::Range, 0.3)?;
    let pcm = excluded(Mechanism::PairCount, 0.3)?;
    check(rm > 0 && pcm > 0, || {
        format!("range excluded {rm}, pair count excluded {pcm}")
    })?;
    Ok(format!(
        "N={} sim_min={min:.3} rm(0.3)={rm} pcm(0.3)={pcm}",
        table.len()
    ))
}

fn correlation_direction() -> Outcome {
    let config = SynthConfig {
        subdatasets: 1,
        programs: 3,
        levels: (1..=6).collect(),
        variants_per_level: 1,
        rng_seed: 42,
    };
    let corpus = synthesize(&config).map_err(|e| e.to_string())?.remove(0);
    check(corpus.len() >= 20, || format!("only {} submissions", corpus.len()))?;
    let scenario = ScenarioConfig::new(Mechanism::Static, 0.0, MatcherKind::Rkrgst);
    let detection = detect_corpus(&corpus, &scenario, true).map_err(|e| e.to_string())?;
    let r = detection.metrics.pearson_r.ok_or("correlation undefined")?;
    check(r >= 0.5, || format!("pearson {r}"))?;
    Ok(format!("{} submissions, pearson={r:.4}", corpus.len()))
}

fn random_vector(rng: &mut ChaCha8Rng) -> TermVector {
    let vocab = token_vocabulary();
    let entries = rng.gen_range(0..25);
    TermVector::from_counts((0..entries).map(|_| (*vocab.choose(rng).unwrap(), rng.gen_range(0..60))))
}

fn cosine_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = 1000;
    for case in 0..cases {
        let (u, v) = (random_vector(&mut rng), random_vector(&mut rng));
        let s = cosine_similarity(&u, &v);
        check(s.to_bits() == cosine_similarity(&v, &u).to_bits(), || {
            format!("case {case}: asymmetric")
        })?;
        check((0.0..=1.0).contains(&s), || format!("case {case}: {s} out of range"))?;
        let k = rng.gen_range(2..500);
        let scaled = TermVector::from_counts(u.counts().iter().map(|(&kind, &c)| (kind, c * k)));
        let s2 = cosine_similarity(&scaled, &v);
        check((s - s2).abs() <= 1e-9, || {
            format!("case {case}: scaling by {k} moved {s} to {s2}")
        })?;

        let kinds = small_sequence(&mut rng, &token_vocabulary()[..20], 120);
        let mut shuffled = kinds.clone();
        shuffled.shuffle(&mut rng);
        let a = term_frequency_vector(&TokenSequence::from_kinds("a", &kinds));
        let b = term_frequency_vector(&TokenSequence::from_kinds("a", &shuffled));
        check(a == b, || format!("case {case}: shuffling changed the vector"))?;
        let (sa, sb) = (cosine_similarity(&a, &v), cosine_similarity(&b, &v));
        check((sa - sb).abs() <= 1e-9, || {
            format!("case {case}: shuffling changed {sa} to {sb}")
        })?;
    }
    Ok(format!("{cases} cases"))
}

fn sweep_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpora = synthesize(&SynthConfig::default()).map_err(|e| e.to_string())?;
    write_corpora(&corpora, dir.path()).map_err(|e| e.to_string())?;
    let config = SweepConfig::new(MatcherKind::Rkrgst);
    let options = LoadOptions::default();
    let pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())
    };
    let first = pool(1)?
        .install(|| run_sweep(dir.path(), &config, &options))
        .map_err(|e| e.to_string())?;
    let second = pool(4)?
        .install(|| run_sweep(dir.path(), &config, &options))
        .map_err(|e| e.to_string())?;
    let (a, b) = (sweep_csv(&first), sweep_csv(&second));
    check(a == b, || "sweep CSVs differ".to_string())?;
    let in_memory = sweep_csv(&sweep_corpora(&corpora, &config).map_err(|e| e.to_string())?);
    check(a == in_memory, || {
        "sweep over written files differs from in-memory corpora".to_string()
    })?;
    Ok(format!("{} bytes, {} rows", a.len(), a.lines().count() - 1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked threshold examples", Duration::from_millis(1), worked_examples),
        (
            "matcher oracle equivalence",
            Duration::from_secs(60),
            oracle_equivalence,
        ),
        ("pair-count linearity", Duration::from_secs(1), pcm_linearity),
        ("monotone filtering", Duration::from_secs(10), monotone_filtering),
        ("RANP sign behavior", Duration::from_secs(1), ranp_sign),
        ("DEP bounds and worst case", Duration::from_secs(5), dep_bounds),
        (
            "static threshold on clustered corpus",
            Duration::from_secs(30),
            clustered_static_threshold,
        ),
        (
            "IR and tiling correlation",
            Duration::from_secs(120),
            correlation_direction,
        ),
        ("cosine properties", Duration::from_secs(5), cosine_properties),
        ("sweep determinism", Duration::from_secs(120), sweep_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= *budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({why}; {elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
