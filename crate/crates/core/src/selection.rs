//! BIC computation and pairwise comparison of the two family fits.
//!
//! Both families carry a single free parameter, so the complexity terms
//! cancel in the difference and the comparison reduces to the residual
//! ratio. The sign convention makes a positive delta favor the linear
//! family.

use thiserror::Error;

use crate::estimation::{FitResult, RSS_FLOOR};
use crate::occupancy::StatsKind;
use crate::real::Real;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SelectionError {
    #[error("fits were computed over different masks")]
    MaskMismatch,
    #[error("expected a {expected} fit, got {got}")]
    KindMismatch { expected: StatsKind, got: StatsKind },
}

/// Evidence-strength thresholds on `|delta_bic|`: below `weak` the
/// difference is weak, above `strong` it is strong, positive in between.
/// Callers overriding the defaults keep `weak <= strong`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds<T> {
    pub weak: T,
    pub strong: T,
}

impl<T: Real> Default for Thresholds<T> {
    fn default() -> Self {
        Self {
            weak: T::of(2.0),
            strong: T::of(6.0),
        }
    }
}

/// Which family a comparison favors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    MB,
    BE,
    Tie,
}

/// Evidence strength band for `|delta_bic|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strength {
    Weak,
    Positive,
    Strong,
}

/// Outcome of comparing the two family fits on one count vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelComparison<T> {
    /// `bic_mb - bic_be`; positive favors the linear family.
    pub delta_bic: T,
    pub winner: Winner,
    pub strength: Strength,
    /// R-squared of the winning fit (the larger of the two on a tie).
    pub r_squared_winner: Option<T>,
}

impl<T: Real> ModelComparison<T> {
    /// Report vocabulary: winner plus strength band ("BE strong",
    /// "MB weak", ...); an exact tie is "tie".
    pub fn verdict(&self) -> String {
        verdict(self.winner, self.strength)
    }
}

/// Verdict label for a winner/strength pair.
pub fn verdict(winner: Winner, strength: Strength) -> String {
    let band = match strength {
        Strength::Weak => "weak",
        Strength::Positive => "positive",
        Strength::Strong => "strong",
    };
    match winner {
        Winner::MB => format!("MB {band}"),
        Winner::BE => format!("BE {band}"),
        Winner::Tie => "tie".to_string(),
    }
}

/// Gaussian-residual BIC `m ln(rss/m) + k ln m` with `k = 1` free
/// parameter. The residual is floored at `1e-12` so exact fits stay finite.
pub fn bic<T: Real>(fit: &FitResult<T>) -> T {
    bic_from(fit.rss, fit.n_points)
}

/// BIC from raw parts; `n_points` must be at least 2.
pub fn bic_from<T: Real>(rss: T, n_points: usize) -> T {
    debug_assert!(n_points >= 2, "BIC needs at least 2 points");
    let m = T::of_usize(n_points);
    let floored = rss.max(T::of(RSS_FLOOR));
    m * (floored / m).ln() + m.ln()
}

/// Winner and strength band as a pure function of the delta and the
/// thresholds: the sign picks the winner (an exact zero ties), the
/// magnitude grades the evidence.
pub fn classify<T: Real>(delta_bic: T, thresholds: Thresholds<T>) -> (Winner, Strength) {
    let winner = if delta_bic > T::zero() {
        Winner::BE
    } else if delta_bic < T::zero() {
        Winner::MB
    } else {
        Winner::Tie
    };
    let magnitude = delta_bic.abs();
    let strength = if magnitude < thresholds.weak {
        Strength::Weak
    } else if magnitude <= thresholds.strong {
        Strength::Positive
    } else {
        Strength::Strong
    };
    (winner, strength)
}

/// Compare the binomial (`fit_mb`) and linear (`fit_be`) fits of one count
/// vector. The winner comes from the sign of the delta alone (an exact
/// zero ties); `thresholds` only grade the strength of the evidence.
pub fn compare<T: Real>(
    fit_mb: &FitResult<T>,
    fit_be: &FitResult<T>,
    thresholds: Thresholds<T>,
) -> Result<ModelComparison<T>, SelectionError> {
    if fit_mb.params.kind() != StatsKind::MB {
        return Err(SelectionError::KindMismatch {
            expected: StatsKind::MB,
            got: fit_mb.params.kind(),
        });
    }
    if fit_be.params.kind() != StatsKind::BE {
        return Err(SelectionError::KindMismatch {
            expected: StatsKind::BE,
            got: fit_be.params.kind(),
        });
    }
    if fit_mb.indices != fit_be.indices {
        return Err(SelectionError::MaskMismatch);
    }

    let delta_bic = bic(fit_mb) - bic(fit_be);
    let (winner, strength) = classify(delta_bic, thresholds);
    let r_squared_winner = match winner {
        Winner::MB => fit_mb.r_squared,
        Winner::BE => fit_be.r_squared,
        Winner::Tie => match (fit_mb.r_squared, fit_be.r_squared) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        },
    };

    Ok(ModelComparison {
        delta_bic,
        winner,
        strength,
        r_squared_winner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{fit, CountVector};
    use crate::occupancy::{be_pmf_vector, mb_pmf_vector, ModelParams};

    fn fit_result(kind: StatsKind, rss: f64, n_points: usize) -> FitResult<f64> {
        FitResult {
            params: ModelParams::new(kind, 0.5).unwrap(),
            rss,
            r_squared: Some(0.9),
            n_points,
            indices: (0..n_points as u32).collect(),
        }
    }

    fn compare_rss(rss_mb: f64, rss_be: f64) -> ModelComparison<f64> {
        compare(
            &fit_result(StatsKind::MB, rss_mb, 12),
            &fit_result(StatsKind::BE, rss_be, 12),
            Thresholds::default(),
        )
        .unwrap()
    }

    #[test]
    fn bic_worked_value() {
        // rss equal to the point count cancels the log ratio
        let result = fit_result(StatsKind::MB, 12.0, 12);
        assert!((bic(&result) - 12.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn residual_ratio_of_e_gives_delta_equal_to_point_count() {
        // complexity terms cancel; 12 * ln(e) = 12
        let delta = compare_rss(12.0 * core::f64::consts::E, 12.0).delta_bic;
        assert!((delta - 12.0).abs() < 1e-9);
    }

    #[test]
    fn zero_residual_is_floored() {
        let exact = fit_result(StatsKind::BE, 0.0, 12);
        assert!(bic(&exact).is_finite());
        assert_eq!(bic(&exact), bic_from(RSS_FLOOR / 10.0, 12));
    }

    #[test]
    fn winner_follows_the_sign() {
        assert_eq!(compare_rss(2.0, 1.0).winner, Winner::BE);
        assert_eq!(compare_rss(1.0, 2.0).winner, Winner::MB);
        assert_eq!(compare_rss(1.5, 1.5).winner, Winner::Tie);
        assert_eq!(compare_rss(1.5, 1.5).verdict(), "tie");
    }

    #[test]
    fn strength_bands_and_verdicts() {
        for (delta, expected) in [
            (19.31, "BE strong"),
            (2.97, "BE positive"),
            (6.0, "BE positive"),
            (6.01, "BE strong"),
            (1.99, "BE weak"),
            (2.0, "BE positive"),
            (-9.54, "MB strong"),
            (-0.37, "MB weak"),
            (-4.0, "MB positive"),
            (0.0, "tie"),
        ] {
            let (winner, strength) = classify(delta, Thresholds::default());
            assert_eq!(verdict(winner, strength), expected, "delta = {delta}");
        }
    }

    #[test]
    fn comparison_delta_matches_the_residual_ratio() {
        // rss_mb / rss_be = exp(delta / m) with m = 12
        for delta in [19.31f64, 2.97, -9.54, -0.37] {
            let comparison = compare_rss(12.0 * (delta / 12.0).exp(), 12.0);
            assert!((comparison.delta_bic - delta).abs() < 1e-9);
        }
    }

    #[test]
    fn custom_thresholds_shift_the_bands() {
        let loose = Thresholds {
            weak: 10.0,
            strong: 30.0,
        };
        let (rss_mb, rss_be) = (12.0 * (19.31f64 / 12.0).exp(), 12.0);
        let comparison = compare(
            &fit_result(StatsKind::MB, rss_mb, 12),
            &fit_result(StatsKind::BE, rss_be, 12),
            loose,
        )
        .unwrap();
        assert_eq!(comparison.verdict(), "BE positive");
    }

    #[test]
    fn antisymmetric_under_residual_swap() {
        for (a, b) in [(0.8, 0.2), (3.0, 5.5), (1.0, 1.0)] {
            let forward = compare_rss(a, b);
            let swapped = compare_rss(b, a);
            assert!((forward.delta_bic + swapped.delta_bic).abs() < 1e-12);
            assert_eq!(forward.strength, swapped.strength);
            let mirrored = match forward.winner {
                Winner::MB => Winner::BE,
                Winner::BE => Winner::MB,
                Winner::Tie => Winner::Tie,
            };
            assert_eq!(swapped.winner, mirrored);
        }
    }

    #[test]
    fn winner_r_squared_tracks_the_winning_fit() {
        let mut mb = fit_result(StatsKind::MB, 1.0, 12);
        mb.r_squared = Some(0.4);
        let mut be = fit_result(StatsKind::BE, 2.0, 12);
        be.r_squared = Some(0.7);
        let comparison = compare(&mb, &be, Thresholds::default()).unwrap();
        assert_eq!(comparison.winner, Winner::MB);
        assert_eq!(comparison.r_squared_winner, Some(0.4));
    }

    #[test]
    fn mismatched_fits_are_rejected() {
        let mb = fit_result(StatsKind::MB, 1.0, 12);
        let be = fit_result(StatsKind::BE, 1.0, 12);
        assert!(matches!(
            compare(&be, &be, Thresholds::default()),
            Err(SelectionError::KindMismatch { .. })
        ));
        assert!(matches!(
            compare(&mb, &mb, Thresholds::default()),
            Err(SelectionError::KindMismatch { .. })
        ));

        let mut shifted = fit_result(StatsKind::BE, 1.0, 12);
        shifted.indices = (1..=12).collect();
        assert_eq!(
            compare(&mb, &shifted, Thresholds::default()),
            Err(SelectionError::MaskMismatch)
        );
    }

    #[test]
    fn delta_is_invariant_under_count_scaling() {
        let counts: Vec<f64> = vec![4.0, 9.0, 18.0, 21.0, 16.0, 9.0, 5.0, 2.0];
        let scaled: Vec<f64> = counts.iter().map(|c| c * 37.5).collect();
        for data in [counts, scaled.clone()] {
            let cv = CountVector::from_counts(7, &data).unwrap();
            let comparison = compare(
                &fit(&cv, StatsKind::MB),
                &fit(&cv, StatsKind::BE),
                Thresholds::default(),
            )
            .unwrap();
            let reference = {
                let cv = CountVector::from_counts(7, &scaled).unwrap();
                compare(
                    &fit(&cv, StatsKind::MB),
                    &fit(&cv, StatsKind::BE),
                    Thresholds::default(),
                )
                .unwrap()
            };
            assert!((comparison.delta_bic - reference.delta_bic).abs() < 1e-9);
        }
    }

    #[test]
    fn noiseless_data_selects_its_generator() {
        for total in 7..=11u32 {
            let be_counts: Vec<f64> = be_pmf_vector(total, 0.3).iter().map(|v| v * 660.0).collect();
            let cv = CountVector::from_counts(total, &be_counts).unwrap();
            let comparison = compare(
                &fit(&cv, StatsKind::MB),
                &fit(&cv, StatsKind::BE),
                Thresholds::default(),
            )
            .unwrap();
            assert_eq!(comparison.winner, Winner::BE, "N = {total}");
            assert_eq!(comparison.strength, Strength::Strong);

            let mb_counts: Vec<f64> = mb_pmf_vector(total, 0.55).iter().map(|v| v * 660.0).collect();
            let cv = CountVector::from_counts(total, &mb_counts).unwrap();
            let comparison = compare(
                &fit(&cv, StatsKind::MB),
                &fit(&cv, StatsKind::BE),
                Thresholds::default(),
            )
            .unwrap();
            assert_eq!(comparison.winner, Winner::MB, "N = {total}");
            assert_eq!(comparison.strength, Strength::Strong);
        }
    }
}
