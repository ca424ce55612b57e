//! Observed count vectors and least-squares estimation of the state-1
//! probability for either statistics family.
//!
//! Fits compare relative frequencies against the model pmf on the included
//! indices. Excluded indices (the mask) simply drop out of the residual;
//! the model values are not renormalized over the mask unless requested via
//! [`FitOptions::renormalize_mask`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::occupancy::{be_pmf_vector, mb_pmf_vector, ModelParams, StatsKind};
use crate::optimize::minimize_unit_interval;
use crate::real::Real;

/// Residuals below this floor count as an exact fit; model selection also
/// floors residuals here so a perfect fit cannot send the BIC to -inf.
pub(crate) const RSS_FLOOR: f64 = 1e-12;

const GRID_STEPS: u32 = 1000;
const REFINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FitError {
    #[error("count vector needs at least 2 occupancy indices, got {0}")]
    TooFewIndices(usize),
    #[error("counts must sum to a positive value")]
    ZeroTotalCount,
    #[error("count at index {index} must be finite and non-negative")]
    InvalidCount { index: u32 },
    #[error("occupancy index {index} exceeds total {total}")]
    IndexOutOfRange { index: u32, total: u32 },
    #[error("data and model lengths differ ({data} vs {model})")]
    LengthMismatch { data: usize, model: usize },
    #[error("data vector has negligible variance; r-squared is undefined")]
    DegenerateVariance,
}

/// Observed counts over a subset of the occupancy indices `0..=total`.
///
/// Indices absent from the map are masked out of fitting entirely.
/// Construction enforces: every index in range, every count finite and
/// non-negative, at least two included indices, positive total count.
#[derive(Clone, Debug, PartialEq)]
pub struct CountVector<T> {
    total: u32,
    counts: BTreeMap<u32, T>,
}

impl<T: Real> CountVector<T> {
    pub fn new(total: u32, counts: BTreeMap<u32, T>) -> Result<Self, FitError> {
        for (&index, &count) in &counts {
            if index > total {
                return Err(FitError::IndexOutOfRange { index, total });
            }
            if !count.is_finite() || count < T::zero() {
                return Err(FitError::InvalidCount { index });
            }
        }
        if counts.len() < 2 {
            return Err(FitError::TooFewIndices(counts.len()));
        }
        let sum: T = counts.values().copied().sum();
        if !(sum > T::zero()) {
            return Err(FitError::ZeroTotalCount);
        }
        Ok(Self { total, counts })
    }

    /// Full-range vector with an observation at every index `0..=total`.
    pub fn from_counts(total: u32, counts: &[T]) -> Result<Self, FitError> {
        if counts.len() != total as usize + 1 {
            return Err(FitError::LengthMismatch {
                data: counts.len(),
                model: total as usize + 1,
            });
        }
        Self::new(total, (0..).zip(counts.iter().copied()).collect())
    }

    /// Restriction to the included indices within `lo..=hi`.
    pub fn masked(&self, lo: u32, hi: u32) -> Result<Self, FitError> {
        let kept = self
            .counts
            .iter()
            .filter(|&(&n, _)| n >= lo && n <= hi)
            .map(|(&n, &c)| (n, c))
            .collect();
        Self::new(self.total, kept)
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    /// Included indices in ascending order.
    pub fn indices(&self) -> Vec<u32> {
        self.counts.keys().copied().collect()
    }

    pub fn count(&self, n: u32) -> Option<T> {
        self.counts.get(&n).copied()
    }

    /// `(index, count)` pairs in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.counts.iter().map(|(&n, &c)| (n, c))
    }

    /// Number of included indices.
    pub fn n_included(&self) -> usize {
        self.counts.len()
    }

    pub fn is_full_range(&self) -> bool {
        self.counts.len() == self.total as usize + 1
    }

    /// Sum of the included counts.
    pub fn sum(&self) -> T {
        self.counts.values().copied().sum()
    }

    /// Relative frequencies over the included indices, in index order; they
    /// sum to one by construction.
    pub fn to_frequencies(&self) -> Vec<T> {
        let sum = self.sum();
        self.counts.values().map(|&c| c / sum).collect()
    }
}

/// Fitting options.
///
/// With `raw_counts` the observed counts are compared against the model pmf
/// scaled by the total included count instead of comparing relative
/// frequencies against the bare pmf. The fitted probability is identical
/// either way; only the residual scale changes. `renormalize_mask` divides
/// the model values by their sum over the included indices before
/// comparing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FitOptions {
    pub raw_counts: bool,
    pub renormalize_mask: bool,
}

/// Outcome of a least-squares fit of one statistics family.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<T> {
    pub params: ModelParams<T>,
    /// Residual sum of squares at the optimum.
    pub rss: T,
    /// Coefficient of determination. Can be negative (fit worse than the
    /// mean); `None` when the data variance is negligible and the residual
    /// is not, in which case comparisons fall back to the residual.
    pub r_squared: Option<T>,
    /// Number of fitted points.
    pub n_points: usize,
    /// Included occupancy indices the fit used.
    pub indices: Vec<u32>,
}

/// Least-squares fit with default options (frequencies, no mask
/// renormalization).
pub fn fit<T: Real>(cv: &CountVector<T>, kind: StatsKind) -> FitResult<T> {
    fit_with(cv, kind, FitOptions::default())
}

/// Least-squares fit of `kind` to the count vector.
///
/// The linear family admits a closed-form optimum (clamped to `[0, 1]`);
/// the binomial family, and any renormalized-mask fit, go through a coarse
/// grid scan with golden-section refinement.
pub fn fit_with<T: Real>(cv: &CountVector<T>, kind: StatsKind, options: FitOptions) -> FitResult<T> {
    let indices = cv.indices();
    let total = cv.total();
    let (data, scale): (Vec<T>, T) = if options.raw_counts {
        (cv.iter().map(|(_, c)| c).collect(), cv.sum())
    } else {
        (cv.to_frequencies(), T::one())
    };

    let objective = |p1: T| {
        let model = model_values(kind, total, p1, &indices, options.renormalize_mask, scale);
        rss(&data, &model)
    };

    let p1 = match (kind, options.renormalize_mask) {
        (StatsKind::BE, false) => be_closed_form(&data, total, &indices, scale),
        _ => minimize_unit_interval(&objective, GRID_STEPS, T::of(REFINE_TOL)).0,
    };

    let model = model_values(kind, total, p1, &indices, options.renormalize_mask, scale);
    let rss_value = rss(&data, &model);
    let r_squared = match r_squared(&data, &model) {
        Ok(v) => Some(v),
        Err(FitError::DegenerateVariance) => {
            if rss_value < T::of(RSS_FLOOR) {
                Some(T::one())
            } else {
                None
            }
        }
        Err(other) => unreachable!("data and model lengths match by construction: {other}"),
    };

    FitResult {
        params: ModelParams::new(kind, p1).expect("fitted probability is clamped to [0, 1]"),
        rss: rss_value,
        r_squared,
        n_points: indices.len(),
        indices,
    }
}

/// `1 - SS_res / SS_tot` of `model` against `data`. Unclamped below, so a
/// fit worse than the data mean goes negative.
///
/// Data whose total variance is at or below [`RSS_FLOOR`] is rejected as
/// degenerate rather than dividing rounding dust by rounding dust.
pub fn r_squared<T: Real>(data: &[T], model: &[T]) -> Result<T, FitError> {
    if data.len() != model.len() {
        return Err(FitError::LengthMismatch {
            data: data.len(),
            model: model.len(),
        });
    }
    if data.len() < 2 {
        return Err(FitError::TooFewIndices(data.len()));
    }
    let mean = data.iter().copied().sum::<T>() / T::of_usize(data.len());
    let ss_tot: T = data.iter().map(|&d| (d - mean) * (d - mean)).sum();
    if !(ss_tot > T::of(RSS_FLOOR)) {
        return Err(FitError::DegenerateVariance);
    }
    Ok(T::one() - rss(data, model) / ss_tot)
}

/// Model pmf values at the included indices, optionally renormalized over
/// the mask, then scaled.
fn model_values<T: Real>(
    kind: StatsKind,
    total: u32,
    p1: T,
    indices: &[u32],
    renormalize: bool,
    scale: T,
) -> Vec<T> {
    let full = match kind {
        StatsKind::MB => mb_pmf_vector(total, p1),
        StatsKind::BE => be_pmf_vector(total, p1),
    };
    let mut values: Vec<T> = indices.iter().map(|&n| full[n as usize]).collect();
    if renormalize {
        let mask_sum: T = values.iter().copied().sum();
        if mask_sum > T::zero() {
            for v in &mut values {
                *v = *v / mask_sum;
            }
        }
    }
    if scale != T::one() {
        for v in &mut values {
            *v = *v * scale;
        }
    }
    values
}

fn rss<T: Real>(data: &[T], model: &[T]) -> T {
    data.iter()
        .zip(model)
        .map(|(&d, &m)| (d - m) * (d - m))
        .sum()
}

/// The linear pmf is affine in `p1` at every index, so the unrenormalized
/// least-squares optimum is a one-variable linear regression, clamped to
/// the valid range.
fn be_closed_form<T: Real>(data: &[T], total: u32, indices: &[u32], scale: T) -> T {
    let total_f = T::of_u32(total);
    let pairs = total_f * (total_f + T::one()) / T::of(2.0);
    let mut num = T::zero();
    let mut den = T::zero();
    for (&n, &d) in indices.iter().zip(data) {
        let nf = T::of_u32(n);
        let intercept = scale * (total_f - nf) / pairs;
        let slope = scale * (T::of(2.0) * nf - total_f) / pairs;
        num = num + slope * (d - intercept);
        den = den + slope * slope;
    }
    if den > T::zero() {
        (num / den).max(T::zero()).min(T::one())
    } else {
        T::of(0.5)
    }
}
