//! Command-line front end for two-state occupancy analysis.

mod live;

use std::fs::{self, File};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use occufit_core::dataset::{
    analyze, analyze_record, load_dataset, record_by_id, AnalysisOptions,
};
use occufit_core::estimation::FitOptions;
use occufit_core::montecarlo::{sample_mb_process, sample_pmf};
use occufit_core::occupancy::{be_pmf_vector, StatsKind};
use occufit_core::report::{emit_plotdata, emit_report, ReportFormat};
use occufit_core::selection::Thresholds;
use occufit_core::webcount::{analyze_web, build_web_dataset, emit_web_report};
use occufit_core::{fit_with, CountVector};

#[derive(Parser)]
#[command(name = "occufit", version, about = "Fit and compare occupancy statistics on count data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one or both statistics families to each record of a dataset.
    Fit {
        /// Dataset file (.csv or .json).
        #[arg(long)]
        input: PathBuf,
        /// Which family to fit.
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Occupancy window `lo..hi`, both ends included.
        #[arg(long, value_parser = parse_mask)]
        mask: Option<(u32, u32)>,
        /// Compare raw counts against the scaled model instead of frequencies.
        #[arg(long)]
        raw_counts: bool,
        /// Renormalize the model over the included indices before comparing.
        #[arg(long)]
        renormalize_mask: bool,
    },
    /// Fit both families to every record and write a comparison report.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        /// Delta-BIC magnitude below which evidence is only weak.
        #[arg(long = "t-weak", default_value_t = 2.0)]
        t_weak: f64,
        /// Delta-BIC magnitude above which evidence is strong.
        #[arg(long = "t-strong", default_value_t = 6.0)]
        t_strong: f64,
    },
    /// Draw occupancy samples from one family and write the histogram.
    Simulate {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Number of entities.
        #[arg(long)]
        n: u32,
        /// State-1 probability parameter.
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        draws: u64,
        #[arg(long)]
        seed: u64,
        /// Histogram CSV (`n,count`).
        #[arg(long)]
        output: PathBuf,
    },
    /// Write per-index plot data (empirical and fitted curves) for one record.
    Plotdata {
        #[arg(long)]
        input: PathBuf,
        /// Record id within the dataset.
        #[arg(long)]
        id: u32,
        #[arg(long)]
        output: PathBuf,
    },
    /// Build a hit-count dataset for state pairs and report the fitted grid.
    Webcount {
        /// Pair table CSV (state1_singular,state1_plural,state2_singular,state2_plural).
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 15)]
        n_max: u32,
        /// Smallest occupancy count queried per N.
        #[arg(long, default_value_t = 3)]
        k_min: u32,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Sentence-to-hits JSON map; required in fixture mode.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Maximum live requests per second.
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long)]
        output: PathBuf,
        /// JSON-lines lookup cache, reused across runs.
        #[arg(long, default_value = "webcount_cache.jsonl")]
        cache: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Mb,
    Be,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mb,
    Be,
}

impl From<KindArg> for StatsKind {
    fn from(kind: KindArg) -> StatsKind {
        match kind {
            KindArg::Mb => StatsKind::MB,
            KindArg::Be => StatsKind::BE,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Json,
    Markdown,
}

impl From<FormatArg> for ReportFormat {
    fn from(format: FormatArg) -> ReportFormat {
        match format {
            FormatArg::Tsv => ReportFormat::Tsv,
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Live,
    Fixture,
}

fn parse_mask(text: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got {text:?}"))?;
    let lo: u32 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi = hi.trim().strip_prefix('=').unwrap_or(hi.trim());
    let hi: u32 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn data(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Fit {
            input,
            model,
            mask,
            raw_counts,
            renormalize_mask,
        } => run_fit(input, model, mask, raw_counts, renormalize_mask),
        Command::Analyze {
            input,
            output,
            format,
            t_weak,
            t_strong,
        } => run_analyze(input, output, format, t_weak, t_strong),
        Command::Simulate {
            kind,
            n,
            p1,
            draws,
            seed,
            output,
        } => run_simulate(kind, n, p1, draws, seed, output),
        Command::Plotdata { input, id, output } => run_plotdata(input, id, output),
        Command::Webcount {
            pairs,
            n_min,
            n_max,
            k_min,
            mode,
            fixture,
            rate,
            output,
            cache,
        } => run_webcount(pairs, n_min, n_max, k_min, mode, fixture, rate, output, cache),
    }
}

fn run_fit(
    input: PathBuf,
    model: ModelArg,
    mask: Option<(u32, u32)>,
    raw_counts: bool,
    renormalize_mask: bool,
) -> Result<(), Failure> {
    let records = load_dataset(&input).map_err(data)?;
    let options = FitOptions {
        raw_counts,
        renormalize_mask,
    };
    let kinds: &[StatsKind] = match model {
        ModelArg::Mb => &[StatsKind::MB],
        ModelArg::Be => &[StatsKind::BE],
        ModelArg::Both => &[StatsKind::MB, StatsKind::BE],
    };
    println!("id\tmodel\tp1\tr_squared\trss\tpoints");
    for record in &records {
        let counts: CountVector = match mask {
            Some((lo, hi)) => record
                .counts
                .masked(lo, hi)
                .map_err(|e| data(format!("record {}: {e}", record.spec.id)))?,
            None => record.counts.clone(),
        };
        for &kind in kinds {
            let fit = fit_with(&counts, kind, options);
            let r2 = fit
                .r_squared
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| "NA".to_string());
            println!(
                "{}\t{}\t{:.4}\t{}\t{:.6e}\t{}",
                record.spec.id,
                kind,
                fit.params.p1(),
                r2,
                fit.rss,
                fit.n_points,
            );
        }
    }
    Ok(())
}

fn run_analyze(
    input: PathBuf,
    output: PathBuf,
    format: FormatArg,
    t_weak: f64,
    t_strong: f64,
) -> Result<(), Failure> {
    if !(t_weak.is_finite() && t_strong.is_finite() && 0.0 <= t_weak && t_weak <= t_strong) {
        return Err(usage(format!(
            "thresholds need 0 <= t-weak <= t-strong, got {t_weak} and {t_strong}"
        )));
    }
    let records = load_dataset(&input).map_err(data)?;
    let options = AnalysisOptions {
        thresholds: Thresholds {
            weak: t_weak,
            strong: t_strong,
        },
        ..AnalysisOptions::default()
    };
    let run = analyze(&records, &options).map_err(data)?;
    for failure in &run.failures {
        eprintln!("warning: skipped record {}: {}", failure.id, failure.error);
    }
    if run.rows.is_empty() {
        return Err(data("no records could be analyzed"));
    }
    fs::write(&output, emit_report(&run.rows, format.into())).map_err(data)?;
    println!(
        "analyzed {} record(s) ({} skipped), wrote {}",
        run.rows.len(),
        run.failures.len(),
        output.display()
    );
    Ok(())
}

fn run_simulate(
    kind: KindArg,
    n: u32,
    p1: f64,
    draws: u64,
    seed: u64,
    output: PathBuf,
) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p1) {
        return Err(usage(format!("--p1 must lie in [0, 1], got {p1}")));
    }
    let histogram = match StatsKind::from(kind) {
        StatsKind::MB => sample_mb_process(n, p1, draws, seed),
        StatsKind::BE => sample_pmf(&be_pmf_vector(n, p1), draws, seed).map_err(data)?,
    };
    let mut text = String::from("n,count\n");
    for (index, count) in histogram.counts().iter().enumerate() {
        text.push_str(&format!("{index},{count}\n"));
    }
    fs::write(&output, text).map_err(data)?;
    Ok(())
}

fn run_plotdata(input: PathBuf, id: u32, output: PathBuf) -> Result<(), Failure> {
    let records = load_dataset(&input).map_err(data)?;
    let record = record_by_id(&records, id).map_err(data)?;
    let row = analyze_record(record, &AnalysisOptions::default()).map_err(data)?;
    fs::write(&output, emit_plotdata(&row)).map_err(data)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_webcount(
    pairs_path: PathBuf,
    n_min: u32,
    n_max: u32,
    k_min: u32,
    mode: ModeArg,
    fixture: Option<PathBuf>,
    rate: f64,
    output: PathBuf,
    cache_path: PathBuf,
) -> Result<(), Failure> {
    use occufit_core::webcount::{
        FixtureClient, HitCache, HitCountClient, RateLimiter, RetryPolicy, WebRunConfig,
    };
    if n_min == 0 || n_min > n_max {
        return Err(usage(format!("need 1 <= n-min <= n-max, got {n_min}..{n_max}")));
    }
    if n_max > 16 {
        return Err(usage("the built-in number lexicon stops at 16; use --n-max 16 or lower"));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(usage(format!("--rate must be positive, got {rate}")));
    }
    let mut client: Box<dyn HitCountClient> = match mode {
        ModeArg::Fixture => {
            let path = fixture.ok_or_else(|| usage("--fixture is required in fixture mode"))?;
            Box::new(FixtureClient::from_path(&path).map_err(data)?)
        }
        ModeArg::Live => Box::new(live::HttpSearchClient::from_env().map_err(data)?),
    };
    let mut limiter = match mode {
        ModeArg::Live => RateLimiter::per_second(rate),
        ModeArg::Fixture => RateLimiter::unlimited(),
    };
    let pairs_file = File::open(&pairs_path).map_err(data)?;
    let pairs = occufit_core::webcount::load_pairs_csv(pairs_file).map_err(data)?;
    let mut config = WebRunConfig::new((n_min..=n_max).collect());
    config.k_min = k_min;
    let mut cache = HitCache::open(&cache_path).map_err(data)?;
    let records = build_web_dataset(
        &pairs,
        &config,
        client.as_mut(),
        &mut cache,
        &mut limiter,
        RetryPolicy::default(),
    )
    .map_err(data)?;
    for warning in records.iter().flat_map(|r| r.warnings.iter()) {
        eprintln!("warning: {warning}");
    }
    let incomplete = records.iter().filter(|r| r.incomplete).count();
    if incomplete > 0 {
        eprintln!("warning: {incomplete} cell(s) lost lookups and are marked * in the report");
    }
    let grid = analyze_web(&records, &pairs, &config).map_err(data)?;
    fs::write(&output, emit_web_report(&grid)).map_err(data)?;
    println!(
        "fitted {} pair(s) over N={n_min}..{n_max}, wrote {}",
        pairs.len(),
        output.display()
    );
    Ok(())
}
