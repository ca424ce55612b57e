//! End-to-end acceptance checks, one test per criterion.
//!
//! Run with `cargo test -p occufit-core --test acceptance -- --nocapture`
//! to see one PASS line per criterion; any failure fails the test.

mod common;

use std::fs;
use std::fs::File;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use occufit_core::webcount::{
    analyze_web, build_web_dataset, emit_web_report, generate_sentences, load_pairs_csv,
    FixtureClient, HitCache, NumberLexicon, RateLimiter, RetryPolicy, StateLexeme, WebRunConfig,
};
use occufit_core::{
    analyze, be_pmf, be_pmf_vector, classify, count_be, count_fd, count_mb, emit_report, fit,
    load_dataset, mb_pmf, mb_pmf_vector, sample_mb_process, sample_pmf, total_variation, verdict,
    AnalysisOptions, CountVector, OccupancyConfig, ReportFormat, StatsKind, Thresholds, Winner,
};

use common::repo_path;

fn state(n: u32, total: u32) -> OccupancyConfig {
    OccupancyConfig::new(n, total).unwrap()
}

#[test]
fn worked_probabilities() {
    let round4 = |x: f64| (x * 1e4).round() / 1e4;
    for (ns, expected) in [(vec![0u32, 11], 0.0005), (vec![1, 10], 0.0054), (vec![5, 6], 0.2256)] {
        for n in ns {
            let got = mb_pmf(state(n, 11), 0.5);
            assert_eq!(round4(got), expected, "mb_pmf(n={n}, N=11, p1=0.5) = {got}");
        }
    }
    for n in 0..=11 {
        let got: f64 = be_pmf(state(n, 11), 0.5);
        assert!((got - 1.0 / 12.0).abs() < 1e-12, "be_pmf(n={n}) = {got}");
    }
    println!("PASS worked probabilities: binomial 0.0005/0.0054/0.2256 at 4 dp, linear 1/12");
}

#[test]
fn counting_identities() {
    assert_eq!(count_mb(2, 2).unwrap(), 4u32.into());
    assert_eq!(count_be(2, 2).unwrap(), 3u32.into());
    assert_eq!(count_fd(2, 2).unwrap(), 1u32.into());
    for n in 1..=100u64 {
        assert_eq!(count_be(n, 2).unwrap(), (n + 1).into(), "count_be({n}, 2)");
    }
    println!("PASS counting identities: 4/3/1 for two entities, N+1 two-state arrangements");
}

#[test]
fn normalization_sweep() {
    let start = Instant::now();
    for total in 1..=100u32 {
        for step in 0..=100u32 {
            let p1 = f64::from(step) / 100.0;
            let mb: f64 = mb_pmf_vector(total, p1).iter().sum();
            let be: f64 = be_pmf_vector(total, p1).iter().sum();
            assert!((mb - 1.0).abs() < 1e-12, "mb sum N={total} p1={p1}: {mb}");
            assert!((be - 1.0).abs() < 1e-12, "be sum N={total} p1={p1}: {be}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "sweep took {elapsed:?}");
    println!("PASS normalization sweep: N <= 100 x 101 p1 values within 1e-12 in {elapsed:?}");
}

#[test]
fn parameter_recovery() {
    let start = Instant::now();
    let mut cases = 0;
    for kind in [StatsKind::MB, StatsKind::BE] {
        for total in [7u32, 8, 9, 11] {
            for step in 0..=10u32 {
                let p1 = f64::from(step) / 10.0;
                let counts = occufit_core::synthetic::model_counts(kind, total, p1, 1000.0);
                let cv = CountVector::from_counts(total, &counts).unwrap();
                let result = fit(&cv, kind);
                let got = result.params.p1();
                assert!(
                    (got - p1).abs() < 1e-4,
                    "{kind:?} N={total}: fitted {got} for true p1 {p1}"
                );
                let r2 = result.r_squared.expect("exact model data has a defined fit quality");
                assert!((r2 - 1.0).abs() < 1e-9, "{kind:?} N={total} p1={p1}: r2 = {r2}");
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "recovery took {elapsed:?}");
    println!("PASS parameter recovery: {cases} noiseless fits within 1e-4, r2 = 1, in {elapsed:?}");
}

#[test]
fn optimizer_matches_exhaustive_grid() {
    let mut rng = StdRng::seed_from_u64(0x0CC);
    for case in 0..50 {
        let total = rng.random_range(5..=12u32);
        let counts: Vec<f64> = (0..=total).map(|_| f64::from(rng.random_range(0..100u32))).collect();
        let cv = match CountVector::from_counts(total, &counts) {
            Ok(cv) => cv,
            Err(_) => continue,
        };
        let fitted = fit(&cv, StatsKind::MB).params.p1();

        let freqs: Vec<f64> = {
            let sum: f64 = counts.iter().sum();
            counts.iter().map(|c| c / sum).collect()
        };
        let rss_at = |p1: f64| -> f64 {
            mb_pmf_vector(total, p1)
                .iter()
                .zip(&freqs)
                .map(|(m, f)| (f - m) * (f - m))
                .sum()
        };
        let mut best = (f64::INFINITY, 0.0);
        for step in 0..=10_000u32 {
            let p1 = f64::from(step) / 1e4;
            let rss = rss_at(p1);
            if rss < best.0 {
                best = (rss, p1);
            }
        }
        assert!(
            (fitted - best.1).abs() <= 1e-4,
            "case {case} N={total}: optimizer {fitted} vs grid {}",
            best.1
        );
    }
    println!("PASS optimizer oracle: binomial fit matches 1e-4 grid search on 50 random vectors");
}

#[test]
fn model_selection_power() {
    let start = Instant::now();
    let trials = 200;
    let draws = 10_000;
    let total = 11;
    let mut report = Vec::new();
    for (direction, (kind, p1, expect)) in [
        (StatsKind::BE, 0.4, Winner::BE),
        (StatsKind::MB, 0.55, Winner::MB),
    ]
    .into_iter()
    .enumerate()
    {
        let pmf: Vec<f64> = match kind {
            StatsKind::MB => mb_pmf_vector(total, p1),
            StatsKind::BE => be_pmf_vector(total, p1),
        };
        let mut correct = 0;
        for trial in 0..trials {
            let seed = 1_000 * direction as u64 + trial;
            let hist = sample_pmf(&pmf, draws, seed).unwrap();
            let cv: CountVector = hist.to_count_vector().unwrap();
            let comparison = occufit_core::compare(
                &fit(&cv, StatsKind::MB),
                &fit(&cv, StatsKind::BE),
                Thresholds::default(),
            )
            .unwrap();
            if comparison.winner == expect {
                correct += 1;
            }
        }
        assert!(
            correct * 100 >= trials * 95,
            "{kind:?} p1={p1}: only {correct}/{trials} classified correctly"
        );
        report.push(format!("{kind:?} {correct}/{trials}"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "power study took {elapsed:?}");
    println!(
        "PASS model selection power: {} correct winners in {elapsed:?}",
        report.join(", ")
    );
}

#[test]
fn monte_carlo_convergence() {
    let start = Instant::now();
    let hist = sample_mb_process(11, 0.5, 1_000_000, 7);
    let vs_mb: f64 = total_variation(&hist, &mb_pmf_vector(11, 0.5)).unwrap();
    let vs_be: f64 = total_variation(&hist, &be_pmf_vector(11, 0.5)).unwrap();
    assert!(vs_mb < 0.005, "distance to the binomial pmf: {vs_mb}");
    assert!(vs_be > 0.1, "distance to the linear pmf: {vs_be}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "sampling took {elapsed:?}");
    println!(
        "PASS Monte Carlo convergence: TV {vs_mb:.5} to its own pmf, {vs_be:.3} to the other, in {elapsed:?}"
    );
}

#[test]
fn report_fidelity() {
    let records = load_dataset(repo_path("data/synthetic_counts.csv")).unwrap();
    let run = analyze(&records, &AnalysisOptions::default()).unwrap();
    assert!(run.failures.is_empty());
    let report = emit_report(&run.rows, ReportFormat::Tsv);
    let golden = fs::read_to_string(repo_path("crates/core/tests/golden/synthetic_report.tsv")).unwrap();
    assert_eq!(report, golden, "report drifted from the committed golden");

    let verdicts: Vec<String> = run.rows.iter().map(|r| r.comparison.verdict()).collect();
    for needed in ["MB strong", "BE strong", "MB positive", "BE positive", "MB weak", "BE weak"] {
        assert!(verdicts.iter().any(|v| v == needed), "missing verdict {needed:?}");
    }
    let thresholds = Thresholds::default();
    let label = |delta: f64| {
        let (winner, strength) = classify(delta, thresholds);
        verdict(winner, strength)
    };
    assert_eq!(label(19.31), "BE strong");
    assert_eq!(label(-9.54), "MB strong");
    println!("PASS report fidelity: golden TSV byte-identical, delta values map to expected labels");
}

#[test]
fn webcount_fixture_run() {
    let cats = StateLexeme::new("cat", "cats").unwrap();
    let dogs = StateLexeme::new("dog", "dogs").unwrap();
    let restricted = NumberLexicon::new(
        [(1u32, vec!["one".into()]), (3, vec!["three".into()])].into(),
    )
    .unwrap();
    let set = generate_sentences(3, 4, &cats, &dogs, &restricted).unwrap();
    assert_eq!(set.sentences(), ["three cats and one dog", "one dog and three cats"]);

    let pairs = load_pairs_csv(File::open(repo_path("data/web_pairs.csv")).unwrap()).unwrap();
    let config = WebRunConfig::new(vec![6, 7, 8, 9]);
    let mut client = FixtureClient::from_path(repo_path("data/web_fixture.json")).unwrap();
    let mut cache = HitCache::in_memory();
    let mut limiter = RateLimiter::unlimited();
    let records = build_web_dataset(
        &pairs,
        &config,
        &mut client,
        &mut cache,
        &mut limiter,
        RetryPolicy::immediate(),
    )
    .unwrap();
    let grid = analyze_web(&records, &pairs, &config).unwrap();
    let report = emit_web_report(&grid);
    let golden = fs::read_to_string(repo_path("crates/core/tests/golden/web_report.tsv")).unwrap();
    assert_eq!(report, golden, "web report drifted from the committed golden");
    let trends: Vec<String> = grid.trends.iter().map(|t| t.to_string()).collect();
    assert!(trends.iter().any(|t| t == "Mixed"), "no Mixed column in {trends:?}");
    assert!(trends.iter().any(|t| t == "MB only"), "no MB only column in {trends:?}");
    println!("PASS webcount fixture run: quoted sentence pair reproduced, golden grid byte-identical");
}
