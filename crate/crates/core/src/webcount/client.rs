//! Hit-count clients, the persistent lookup cache, rate limiting and retry.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::thread;
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sentences::SentenceSet;
use super::WebError;

/// Where a hit count came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    Live,
    Fixture,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ClientError {
    #[error("no fixture entry for {0:?}")]
    FixtureMiss(String),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("api error: {0}")]
    Api(String),
}

/// Source of exact-phrase web hit counts.
pub trait HitCountClient {
    fn hit_count(&mut self, sentence: &str) -> Result<u64, ClientError>;
    fn source(&self) -> CountSource;
}

/// Client backed by a fixed sentence-to-hits map, for tests and offline runs.
pub struct FixtureClient {
    hits: HashMap<String, u64>,
}

impl FixtureClient {
    pub fn new(hits: impl IntoIterator<Item = (String, u64)>) -> Self {
        FixtureClient {
            hits: hits
                .into_iter()
                .map(|(sentence, count)| (sentence.to_lowercase(), count))
                .collect(),
        }
    }

    /// Loads a JSON object mapping sentences to hit counts.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, WebError> {
        let file = File::open(path)?;
        let hits: HashMap<String, u64> = serde_json::from_reader(BufReader::new(file))?;
        Ok(Self::new(hits))
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

impl HitCountClient for FixtureClient {
    fn hit_count(&mut self, sentence: &str) -> Result<u64, ClientError> {
        self.hits
            .get(sentence)
            .copied()
            .ok_or_else(|| ClientError::FixtureMiss(sentence.to_string()))
    }

    fn source(&self) -> CountSource {
        CountSource::Fixture
    }
}

/// One cached lookup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountCacheEntry {
    pub sentence: String,
    pub hits: u64,
    pub retrieved_at: DateTime<Utc>,
    pub source: CountSource,
}

/// Sentence-to-hits cache. The on-disk form is JSON lines, append-only;
/// on load the newest entry for a sentence wins.
#[derive(Debug)]
pub struct HitCache {
    entries: HashMap<String, CountCacheEntry>,
    sink: Option<File>,
}

impl HitCache {
    /// Cache with no backing file; entries live for the process only.
    pub fn in_memory() -> Self {
        HitCache {
            entries: HashMap::new(),
            sink: None,
        }
    }

    /// Opens (or creates) a JSON-lines cache file and keeps it for appends.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, WebError> {
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let mut entries = HashMap::new();
        for (index, line) in BufReader::new(&file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CountCacheEntry =
                serde_json::from_str(&line).map_err(|e| WebError::CacheLine {
                    line: index + 1,
                    message: e.to_string(),
                })?;
            entries.insert(entry.sentence.clone(), entry);
        }
        Ok(HitCache {
            entries,
            sink: Some(file),
        })
    }

    pub fn get(&self, sentence: &str) -> Option<&CountCacheEntry> {
        self.entries.get(sentence)
    }

    pub fn put(&mut self, entry: CountCacheEntry) -> Result<(), WebError> {
        if let Some(file) = self.sink.as_mut() {
            let mut line = serde_json::to_string(&entry)?;
            line.push('\n');
            file.write_all(line.as_bytes())?;
        }
        self.entries.insert(entry.sentence.clone(), entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Enforces a minimum spacing between consecutive requests.
pub struct RateLimiter {
    min_interval: Duration,
    last: Option<Instant>,
}

impl RateLimiter {
    /// Limits to at most `rate` requests per second.
    pub fn per_second(rate: f64) -> Self {
        assert!(rate > 0.0, "request rate must be positive");
        RateLimiter {
            min_interval: Duration::from_secs_f64(1.0 / rate),
            last: None,
        }
    }

    pub fn unlimited() -> Self {
        RateLimiter {
            min_interval: Duration::ZERO,
            last: None,
        }
    }

    /// Blocks until the next request is allowed to go out.
    pub fn wait(&mut self) {
        if let Some(last) = self.last {
            let elapsed = last.elapsed();
            if elapsed < self.min_interval {
                thread::sleep(self.min_interval - elapsed);
            }
        }
        self.last = Some(Instant::now());
    }
}

/// Retry schedule for transient lookup failures: `attempts` tries in total,
/// sleeping `base_delay`, then twice that, and so on between them.
#[derive(Clone, Copy, Debug)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    /// Same schedule without the waiting, for tests.
    pub fn immediate() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::ZERO,
        }
    }

    fn delay(&self, completed_attempts: u32) -> Duration {
        self.base_delay * 2u32.saturating_pow(completed_attempts.saturating_sub(1))
    }
}

/// Total hits for one sentence set, with per-sentence diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FetchOutcome {
    pub total_hits: u64,
    /// Sentences that contributed zero through a miss or a failed lookup.
    pub warnings: Vec<String>,
    /// True when a lookup kept failing after retries, so the total is a
    /// lower bound on what the source would report.
    pub incomplete: bool,
}

/// Resolves every sentence in the set to a hit count and sums them.
///
/// Cached sentences are reused without touching the client. Fresh lookups
/// go out sequentially under the rate limiter; transient failures are
/// retried per the policy, and a sentence that still fails contributes zero
/// and marks the outcome incomplete. A fixture miss is not retried: it
/// contributes zero with a warning only.
pub fn fetch_counts(
    set: &SentenceSet,
    client: &mut dyn HitCountClient,
    cache: &mut HitCache,
    limiter: &mut RateLimiter,
    retry: RetryPolicy,
) -> Result<FetchOutcome, WebError> {
    let mut outcome = FetchOutcome::default();
    for sentence in set.sentences() {
        if let Some(entry) = cache.get(sentence) {
            outcome.total_hits += entry.hits;
            continue;
        }
        match lookup(sentence, client, limiter, retry) {
            Ok(hits) => {
                outcome.total_hits += hits;
                cache.put(CountCacheEntry {
                    sentence: sentence.clone(),
                    hits,
                    retrieved_at: Utc::now(),
                    source: client.source(),
                })?;
            }
            Err(ClientError::FixtureMiss(_)) => {
                outcome
                    .warnings
                    .push(format!("no fixture entry for {sentence:?}; counted as 0"));
            }
            Err(err) => {
                outcome
                    .warnings
                    .push(format!("lookup failed for {sentence:?}: {err}; counted as 0"));
                outcome.incomplete = true;
            }
        }
    }
    Ok(outcome)
}

fn lookup(
    sentence: &str,
    client: &mut dyn HitCountClient,
    limiter: &mut RateLimiter,
    retry: RetryPolicy,
) -> Result<u64, ClientError> {
    let mut attempt = 0;
    loop {
        limiter.wait();
        attempt += 1;
        match client.hit_count(sentence) {
            Ok(hits) => return Ok(hits),
            Err(err @ ClientError::FixtureMiss(_)) => return Err(err),
            Err(err) => {
                if attempt >= retry.attempts {
                    return Err(err);
                }
                thread::sleep(retry.delay(attempt));
            }
        }
    }
}
