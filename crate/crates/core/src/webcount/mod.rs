//! Web hit-count pipeline: sentence generation for occupancy states,
//! pluggable hit-count clients with caching, rate limiting and retry, and
//! grid-style analysis of the resulting counts across entity totals.

mod client;
mod pipeline;
mod sentences;

use thiserror::Error;

pub use client::{
    fetch_counts, ClientError, CountCacheEntry, CountSource, FetchOutcome, FixtureClient,
    HitCache, HitCountClient, RateLimiter, RetryPolicy,
};
pub use pipeline::{
    analyze_web, build_web_dataset, classify_trends, emit_web_report, load_pairs_csv, TrendLabel,
    WebCell, WebGrid, WebPair, WebRecord, WebRunConfig, R2_SIGNIFICANCE,
};
pub use sentences::{
    generate_sentences, NumberLexicon, SentenceError, SentenceSet, StateLexeme,
};

#[derive(Debug, Error)]
pub enum WebError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
    #[error("cache line {line}: {message}")]
    CacheLine { line: usize, message: String },
    #[error("pairs table: {0}")]
    Pairs(String),
    #[error("trend classification needs at least 2 rows, got {0}")]
    TooFewRows(usize),
}
