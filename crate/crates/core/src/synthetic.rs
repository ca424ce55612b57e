//! Synthetic count vectors drawn from known model parameters.
//!
//! Useful for regression datasets and for checking that the fitting and
//! selection pipeline recovers the generating family. `model_counts` is
//! noiseless (the pmf scaled by a total observation count); `blended_counts`
//! mixes the two families so a dataset can exercise the weaker verdict
//! bands.

use crate::dataset::{ConceptSpec, DatasetRecord};
use crate::estimation::CountVector;
use crate::occupancy::{be_pmf_vector, mb_pmf_vector, StatsKind};

/// The pmf of `kind` at `p1`, scaled so the counts sum to `scale`.
pub fn model_counts(kind: StatsKind, total: u32, p1: f64, scale: f64) -> Vec<f64> {
    let pmf = match kind {
        StatsKind::MB => mb_pmf_vector(total, p1),
        StatsKind::BE => be_pmf_vector(total, p1),
    };
    pmf.into_iter().map(|p| p * scale).collect()
}

/// Pointwise mix of an MB pmf at `p_mb` and a BE pmf at `p_be`, with
/// `be_weight` in `[0, 1]` giving the BE share, scaled to sum to `scale`.
pub fn blended_counts(total: u32, p_mb: f64, p_be: f64, be_weight: f64, scale: f64) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&be_weight), "be_weight must be in [0, 1]");
    let mb = mb_pmf_vector(total, p_mb);
    let be = be_pmf_vector(total, p_be);
    mb.into_iter()
        .zip(be)
        .map(|(m, b)| ((1.0 - be_weight) * m + be_weight * b) * scale)
        .collect()
}

pub fn model_record(spec: ConceptSpec, kind: StatsKind, p1: f64, scale: f64) -> DatasetRecord {
    let counts = model_counts(kind, spec.total, p1, scale);
    DatasetRecord {
        counts: CountVector::from_counts(spec.total, &counts).expect("scaled pmf is a valid count vector"),
        spec,
    }
}

pub fn blended_record(
    spec: ConceptSpec,
    p_mb: f64,
    p_be: f64,
    be_weight: f64,
    scale: f64,
) -> DatasetRecord {
    let counts = blended_counts(spec.total, p_mb, p_be, be_weight, scale);
    DatasetRecord {
        counts: CountVector::from_counts(spec.total, &counts).expect("blended pmf is a valid count vector"),
        spec,
    }
}
