//! Seeded Monte Carlo sampling of occupancy processes and discrete
//! distributions, with total-variation distance for convergence checks.
//!
//! All samplers are deterministic for a given seed; independent seeds give
//! independent streams, so callers can parallelize across seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::estimation::{CountVector, FitError};
use crate::real::Real;

const NORMALIZATION_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("probabilities must sum to 1, got {sum}")]
    NotNormalized { sum: f64 },
    #[error("negative probability at index {0}")]
    NegativeProbability(usize),
    #[error("histogram has {hist} bins, distribution has {pmf}")]
    LengthMismatch { hist: usize, pmf: usize },
    #[error("histogram holds no draws")]
    NoDraws,
}

/// Histogram of occupancy draws: `counts[n]` trials landed `n` of `total`
/// entities in state 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleHistogram {
    total: u32,
    draws: u64,
    counts: Vec<u64>,
}

impl SampleHistogram {
    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Per-bin draw counts over `n = 0..=total`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Empirical frequencies.
    pub fn frequencies<T: Real>(&self) -> Result<Vec<T>, SampleError> {
        if self.draws == 0 {
            return Err(SampleError::NoDraws);
        }
        let draws = T::of_u64(self.draws);
        Ok(self.counts.iter().map(|&c| T::of_u64(c) / draws).collect())
    }

    /// The histogram as a full-range count vector, ready for fitting.
    pub fn to_count_vector<T: Real>(&self) -> Result<CountVector<T>, FitError> {
        let counts: Vec<T> = self.counts.iter().map(|&c| T::of_u64(c)).collect();
        CountVector::from_counts(self.total, &counts)
    }
}

/// Sample the independent-placement process: per trial, each of `total`
/// entities lands in state 1 with probability `p1`; the trial records how
/// many did.
pub fn sample_mb_process<T: Real>(total: u32, p1: T, draws: u64, seed: u64) -> SampleHistogram {
    let p = p1.to_f64().expect("p1 converts to f64");
    assert!((0.0..=1.0).contains(&p), "p1 = {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; total as usize + 1];
    for _ in 0..draws {
        let mut in_state1 = 0usize;
        for _ in 0..total {
            if rng.random::<f64>() < p {
                in_state1 += 1;
            }
        }
        counts[in_state1] += 1;
    }
    SampleHistogram {
        total,
        draws,
        counts,
    }
}

/// Sample an arbitrary distribution over `0..pmf.len()` by inverse-CDF
/// lookup. Probabilities must be non-negative and sum to 1 within `1e-9`.
pub fn sample_pmf<T: Real>(pmf: &[T], draws: u64, seed: u64) -> Result<SampleHistogram, SampleError> {
    let cdf = build_cdf(pmf)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; pmf.len()];
    let last = pmf.len() - 1;
    for _ in 0..draws {
        let u = rng.random::<f64>();
        let bin = cdf.partition_point(|&c| c <= u).min(last);
        counts[bin] += 1;
    }
    Ok(SampleHistogram {
        total: last as u32,
        draws,
        counts,
    })
}

/// Total-variation distance between the histogram's empirical frequencies
/// and a reference distribution on the same support: half the L1 distance.
pub fn total_variation<T: Real>(hist: &SampleHistogram, pmf: &[T]) -> Result<T, SampleError> {
    if hist.counts.len() != pmf.len() {
        return Err(SampleError::LengthMismatch {
            hist: hist.counts.len(),
            pmf: pmf.len(),
        });
    }
    let freqs = hist.frequencies::<T>()?;
    let l1: T = freqs
        .iter()
        .zip(pmf)
        .map(|(&f, &p)| (f - p).abs())
        .sum();
    Ok(l1 / T::of(2.0))
}

fn build_cdf<T: Real>(pmf: &[T]) -> Result<Vec<f64>, SampleError> {
    let mut acc = 0.0f64;
    let mut cdf = Vec::with_capacity(pmf.len());
    for (i, &p) in pmf.iter().enumerate() {
        let p = p.to_f64().expect("probability converts to f64");
        if p < 0.0 {
            return Err(SampleError::NegativeProbability(i));
        }
        acc += p;
        cdf.push(acc);
    }
    if (acc - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(SampleError::NotNormalized { sum: acc });
    }
    Ok(cdf)
}
