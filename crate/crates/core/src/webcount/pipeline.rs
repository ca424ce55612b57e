//! From state-pair lexemes to a fitted hit-count grid and its report.
//!
//! For every pair and every entity count N, the pipeline builds the
//! sentences for each occupancy split k, sums their web hit counts into a
//! count vector over `k_min..=N`, fits both statistics families, and lays
//! the comparisons out as a grid: one row per N, one column per pair, plus
//! a closing row that labels the trend of each column.

use std::collections::BTreeMap;
use std::io::Read;

use crate::dataset::ConceptSpec;
use crate::estimation::{fit_with, CountVector, FitError, FitOptions};
use crate::occupancy::StatsKind;
use crate::selection::{compare, Thresholds, Winner};

use super::client::{fetch_counts, HitCache, HitCountClient, RateLimiter, RetryPolicy};
use super::sentences::{generate_sentences, NumberLexicon, StateLexeme};
use super::WebError;

/// One pair of states under a common concept, e.g. cat/dog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebPair {
    pub state1: StateLexeme,
    pub state2: StateLexeme,
}

impl WebPair {
    pub fn label(&self) -> String {
        format!("{}/{}", self.state1.singular(), self.state2.singular())
    }
}

const PAIRS_HEADER: [&str; 4] = [
    "state1_singular",
    "state1_plural",
    "state2_singular",
    "state2_plural",
];

/// Reads the pair table: a CSV with columns
/// `state1_singular,state1_plural,state2_singular,state2_plural`.
pub fn load_pairs_csv<R: Read>(reader: R) -> Result<Vec<WebPair>, WebError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    for (i, name) in PAIRS_HEADER.iter().enumerate() {
        if header.get(i) != Some(*name) {
            return Err(WebError::Pairs(format!(
                "header column {} must be {name:?}, got {:?}",
                i + 1,
                header.get(i).unwrap_or("")
            )));
        }
    }
    let mut pairs = Vec::new();
    for (index, row) in rdr.records().enumerate() {
        let row = row?;
        if row.len() < 4 {
            return Err(WebError::Pairs(format!(
                "pair {} has {} fields, expected 4",
                index + 1,
                row.len()
            )));
        }
        let state1 = StateLexeme::new(&row[0], &row[1])?;
        let state2 = StateLexeme::new(&row[2], &row[3])?;
        if state1 == state2 {
            return Err(WebError::Pairs(format!(
                "pair {} repeats the same state twice",
                index + 1
            )));
        }
        pairs.push(WebPair { state1, state2 });
    }
    if pairs.is_empty() {
        return Err(WebError::Pairs("no pairs defined".into()));
    }
    Ok(pairs)
}

/// Default significance floor: a cell's best fit only counts toward the
/// column trend when its r-squared reaches this.
pub const R2_SIGNIFICANCE: f64 = 0.65;

/// Settings for one web-count run.
#[derive(Clone, Debug)]
pub struct WebRunConfig {
    /// Entity counts, one grid row each, in the order given.
    pub n_values: Vec<u32>,
    /// Smallest occupancy count queried; indices below stay masked out.
    pub k_min: u32,
    pub lexicon: NumberLexicon,
    pub thresholds: Thresholds<f64>,
    /// Minimum best-fit r-squared for a cell to count toward the trend.
    pub r2_significance: f64,
    /// Fit options for every cell. The default renormalizes the model over
    /// the queried k range: frequencies taken over a truncated window can
    /// only be compared against the model restricted to that window.
    pub fit: FitOptions,
}

impl WebRunConfig {
    pub fn new(n_values: Vec<u32>) -> Self {
        WebRunConfig {
            n_values,
            k_min: 3,
            lexicon: NumberLexicon::standard(),
            thresholds: Thresholds::default(),
            r2_significance: R2_SIGNIFICANCE,
            fit: FitOptions {
                raw_counts: false,
                renormalize_mask: true,
            },
        }
    }
}

/// Aggregated hits and fetch diagnostics for one (pair, N) cell.
#[derive(Clone, Debug)]
pub struct WebRecord {
    /// Column: index into the pair list the record was built from.
    pub pair_index: usize,
    pub spec: ConceptSpec,
    /// Total hits per occupancy count k (k entities in state 1).
    pub hits: BTreeMap<u32, u64>,
    pub incomplete: bool,
    pub warnings: Vec<String>,
}

impl WebRecord {
    /// The hits as a count vector masked to the queried k range.
    pub fn count_vector(&self) -> Result<CountVector<f64>, FitError> {
        CountVector::new(
            self.spec.total,
            self.hits.iter().map(|(&k, &h)| (k, h as f64)).collect(),
        )
    }
}

/// Collects hit counts for every pair and every N in the config.
///
/// Lookups go through the cache first, so a warm cache rebuilds the records
/// without any client traffic.
pub fn build_web_dataset(
    pairs: &[WebPair],
    config: &WebRunConfig,
    client: &mut dyn HitCountClient,
    cache: &mut HitCache,
    limiter: &mut RateLimiter,
    retry: RetryPolicy,
) -> Result<Vec<WebRecord>, WebError> {
    let mut records = Vec::new();
    let mut id = 0;
    for (pair_index, pair) in pairs.iter().enumerate() {
        for &total in &config.n_values {
            id += 1;
            let spec = ConceptSpec::new(
                id,
                total,
                pair.label(),
                pair.state1.singular(),
                pair.state2.singular(),
            )
            .map_err(|e| WebError::Pairs(e.to_string()))?;
            let mut record = WebRecord {
                pair_index,
                spec,
                hits: BTreeMap::new(),
                incomplete: false,
                warnings: Vec::new(),
            };
            for k in config.k_min..=total {
                let set = generate_sentences(k, total, &pair.state1, &pair.state2, &config.lexicon)?;
                let outcome = fetch_counts(&set, client, cache, limiter, retry)?;
                record.hits.insert(k, outcome.total_hits);
                record.incomplete |= outcome.incomplete;
                record.warnings.extend(
                    outcome
                        .warnings
                        .into_iter()
                        .map(|w| format!("{} N={total} k={k}: {w}", pair.label())),
                );
            }
            records.push(record);
        }
    }
    Ok(records)
}

/// One cell of the result grid.
#[derive(Clone, Debug, PartialEq)]
pub enum WebCell {
    /// The cell could not be fitted; the reason is kept for diagnostics.
    Missing(String),
    Done {
        delta_bic: f64,
        /// r-squared of the winning fit, when defined.
        r_squared: Option<f64>,
        winner: Winner,
        /// True when some hit counts were lost to lookup failures.
        incomplete: bool,
    },
}

impl WebCell {
    fn significant(&self, floor: f64) -> bool {
        matches!(self, WebCell::Done { r_squared: Some(r2), .. } if *r2 >= floor)
    }
}

/// Column-level behaviour across N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrendLabel {
    MbOnly,
    BeOnly,
    Mixed,
    Inconclusive,
}

impl std::fmt::Display for TrendLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrendLabel::MbOnly => "MB only",
            TrendLabel::BeOnly => "BE only",
            TrendLabel::Mixed => "Mixed",
            TrendLabel::Inconclusive => "Inconclusive",
        })
    }
}

/// Fitted comparisons for every (N, pair) cell plus per-pair trends.
#[derive(Clone, Debug, PartialEq)]
pub struct WebGrid {
    pub pair_labels: Vec<String>,
    pub n_values: Vec<u32>,
    /// `cells[row][column]`: row follows `n_values`, column `pair_labels`.
    pub cells: Vec<Vec<WebCell>>,
    pub trends: Vec<TrendLabel>,
    pub r2_significance: f64,
}

/// Fits every record and assembles the grid, trend row included.
pub fn analyze_web(
    records: &[WebRecord],
    pairs: &[WebPair],
    config: &WebRunConfig,
) -> Result<WebGrid, WebError> {
    let mut cells = Vec::with_capacity(config.n_values.len());
    for &total in &config.n_values {
        let mut row = Vec::with_capacity(pairs.len());
        for pair_index in 0..pairs.len() {
            let record = records
                .iter()
                .find(|r| r.pair_index == pair_index && r.spec.total == total);
            row.push(match record {
                None => WebCell::Missing("not collected".into()),
                Some(record) => fit_cell(record, config),
            });
        }
        cells.push(row);
    }
    let mut trends = Vec::with_capacity(pairs.len());
    for pair_index in 0..pairs.len() {
        let column: Vec<WebCell> = cells.iter().map(|row| row[pair_index].clone()).collect();
        trends.push(classify_trends(&column, config.r2_significance)?);
    }
    Ok(WebGrid {
        pair_labels: pairs.iter().map(WebPair::label).collect(),
        n_values: config.n_values.clone(),
        cells,
        trends,
        r2_significance: config.r2_significance,
    })
}

fn fit_cell(record: &WebRecord, config: &WebRunConfig) -> WebCell {
    let counts = match record.count_vector() {
        Ok(counts) => counts,
        Err(err) => return WebCell::Missing(err.to_string()),
    };
    let fit_mb = fit_with(&counts, StatsKind::MB, config.fit);
    let fit_be = fit_with(&counts, StatsKind::BE, config.fit);
    let comparison =
        compare(&fit_mb, &fit_be, config.thresholds).expect("both fits share one count vector");
    WebCell::Done {
        delta_bic: comparison.delta_bic,
        r_squared: comparison.r_squared_winner,
        winner: comparison.winner,
        incomplete: record.incomplete,
    }
}

/// Labels one column: `MB only` when every significant cell favors MB,
/// `BE only` symmetrically, `Inconclusive` when no cell is significant,
/// `Mixed` otherwise. Cells whose best fit stays under the significance
/// floor are ignored.
pub fn classify_trends(cells: &[WebCell], r2_significance: f64) -> Result<TrendLabel, WebError> {
    if cells.len() < 2 {
        return Err(WebError::TooFewRows(cells.len()));
    }
    let mut saw_mb = false;
    let mut saw_be = false;
    for cell in cells {
        if !cell.significant(r2_significance) {
            continue;
        }
        if let WebCell::Done { winner, .. } = cell {
            match winner {
                Winner::MB => saw_mb = true,
                Winner::BE => saw_be = true,
                // a significant exact tie backs neither side alone
                Winner::Tie => {
                    saw_mb = true;
                    saw_be = true;
                }
            }
        }
    }
    Ok(match (saw_mb, saw_be) {
        (true, false) => TrendLabel::MbOnly,
        (false, true) => TrendLabel::BeOnly,
        (true, true) => TrendLabel::Mixed,
        (false, false) => TrendLabel::Inconclusive,
    })
}

/// Renders the grid as a TSV table: `N` plus one column per pair, one row
/// per entity count, and a final `Type` row with the trend labels.
///
/// Each fitted cell shows `delta_BIC` to one decimal and the best fit's
/// r-squared to two, as `delta,r2`. An insignificant or undefined r-squared
/// shows as `-`; a cell built from incomplete hit counts gets a `*` suffix;
/// an unfittable cell shows `n/a`.
pub fn emit_web_report(grid: &WebGrid) -> String {
    let mut out = String::from("N");
    for label in &grid.pair_labels {
        out.push('\t');
        out.push_str(label);
    }
    out.push('\n');
    for (row, &total) in grid.n_values.iter().enumerate() {
        out.push_str(&total.to_string());
        for cell in &grid.cells[row] {
            out.push('\t');
            out.push_str(&render_cell(cell, grid.r2_significance));
        }
        out.push('\n');
    }
    out.push_str("Type");
    for trend in &grid.trends {
        out.push('\t');
        out.push_str(&trend.to_string());
    }
    out.push('\n');
    out
}

fn render_cell(cell: &WebCell, r2_significance: f64) -> String {
    match cell {
        WebCell::Missing(_) => "n/a".to_string(),
        WebCell::Done {
            delta_bic,
            r_squared,
            incomplete,
            ..
        } => {
            let delta = fixed1(*delta_bic);
            let r2 = match r_squared {
                Some(r2) if *r2 >= r2_significance => format!("{r2:.2}"),
                _ => "-".to_string(),
            };
            let mark = if *incomplete { "*" } else { "" };
            format!("{delta},{r2}{mark}")
        }
    }
}

fn fixed1(value: f64) -> String {
    let text = format!("{value:.1}");
    if text == "-0.0" {
        "0.0".to_string()
    } else {
        text
    }
}
