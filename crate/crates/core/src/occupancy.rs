//! Counting functions and two-state probability mass functions for systems
//! of identical entities distributed over states.
//!
//! Three classical counting rules are covered: distinguishable entities
//! ([`count_mb`]), indistinguishable entities ([`count_be`]), and
//! indistinguishable entities with at most one per state ([`count_fd`]).
//!
//! The pmfs describe the two-state case: of `total` entities, `n` sit in
//! state 1. With distinguishable entities placed independently the count of
//! state-1 entities is binomial ([`mb_pmf`]); when every configuration of
//! indistinguishable entities carries the same weight, tilted linearly by
//! the state-1 probability, the count follows the linear pmf ([`be_pmf`]),
//! which is exactly uniform at `p1 = 1/2`.

use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::real::Real;

/// Totals above this evaluate the binomial pmf in log space: the running
/// coefficient would still fit, but the term-by-term powers start to risk
/// under/overflow long before the coefficient does.
const DIRECT_BINOMIAL_LIMIT: u32 = 50;

/// Domain violations for counting functions and pmf parameters.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("cannot place {entities} entities on zero states")]
    NoStates { entities: u64 },
    #[error("single occupancy admits at most {states} entities, got {entities}")]
    ExclusionViolated { entities: u64, states: u64 },
    #[error("total entity count must be at least 1")]
    ZeroTotal,
    #[error("state-1 count {n} exceeds total {total}")]
    CountExceedsTotal { n: u32, total: u32 },
    #[error("state-1 probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

/// Statistics family governing how entities fill the two states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatsKind {
    /// Distinguishable entities placed independently.
    MB,
    /// Indistinguishable entities; each configuration counted once.
    BE,
}

impl fmt::Display for StatsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsKind::MB => write!(f, "MB"),
            StatsKind::BE => write!(f, "BE"),
        }
    }
}

/// A two-state occupancy: `n` of `total` entities sit in state 1, the
/// remaining `total - n` in state 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OccupancyConfig {
    n: u32,
    total: u32,
}

impl OccupancyConfig {
    pub fn new(n: u32, total: u32) -> Result<Self, DomainError> {
        if total == 0 {
            return Err(DomainError::ZeroTotal);
        }
        if n > total {
            return Err(DomainError::CountExceedsTotal { n, total });
        }
        Ok(Self { n, total })
    }

    /// State-1 entity count.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total entity count.
    pub fn total(&self) -> u32 {
        self.total
    }
}

/// A statistics family together with its state-1 probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    kind: StatsKind,
    p1: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(kind: StatsKind, p1: T) -> Result<Self, DomainError> {
        if !(p1 >= T::zero() && p1 <= T::one()) {
            return Err(DomainError::InvalidProbability(
                p1.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { kind, p1 })
    }

    pub fn kind(&self) -> StatsKind {
        self.kind
    }

    pub fn p1(&self) -> T {
        self.p1
    }

    /// Complementary state-2 probability.
    pub fn p2(&self) -> T {
        T::one() - self.p1
    }

    /// Probability of the given occupancy under these parameters.
    pub fn pmf(&self, state: OccupancyConfig) -> T {
        match self.kind {
            StatsKind::MB => mb_pmf(state, self.p1),
            StatsKind::BE => be_pmf(state, self.p1),
        }
    }

    /// Full pmf over `n = 0..=total`.
    pub fn pmf_vector(&self, total: u32) -> Vec<T> {
        match self.kind {
            StatsKind::MB => mb_pmf_vector(total, self.p1),
            StatsKind::BE => be_pmf_vector(total, self.p1),
        }
    }
}

/// Number of ways to place `entities` distinguishable entities on `states`
/// states: `states^entities`.
pub fn count_mb(entities: u64, states: u64) -> Result<BigUint, DomainError> {
    if states == 0 {
        return if entities == 0 {
            Ok(BigUint::one())
        } else {
            Err(DomainError::NoStates { entities })
        };
    }
    Ok(Pow::pow(BigUint::from(states), entities))
}

/// Number of ways to place `entities` indistinguishable entities on `states`
/// states: `C(entities + states - 1, entities)`.
pub fn count_be(entities: u64, states: u64) -> Result<BigUint, DomainError> {
    if states == 0 {
        return if entities == 0 {
            Ok(BigUint::one())
        } else {
            Err(DomainError::NoStates { entities })
        };
    }
    Ok(binomial(entities + states - 1, entities))
}

/// Number of ways to place `entities` indistinguishable entities on `states`
/// states with at most one entity per state: `C(states, entities)`.
pub fn count_fd(entities: u64, states: u64) -> Result<BigUint, DomainError> {
    if entities > states {
        return Err(DomainError::ExclusionViolated { entities, states });
    }
    Ok(binomial(states, entities))
}

/// Number of distinguishable-entity realizations of a two-state occupancy:
/// `C(total, n)`.
pub fn multiplicity(state: OccupancyConfig) -> BigUint {
    binomial(u64::from(state.total()), u64::from(state.n()))
}

/// Exact binomial coefficient by the multiplicative rule. Each intermediate
/// division is exact because `acc` always holds a complete smaller
/// coefficient.
fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exact binomial coefficient in machine integers; callers keep `n` small
/// enough that the running product cannot overflow.
fn binomial_u128(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..u128::from(k) {
        acc = acc * (u128::from(n) - i) / (i + 1);
    }
    acc
}

fn ln_binomial<T: Real>(n: u32, k: u32) -> T {
    let k = k.min(n - k);
    let mut acc = T::zero();
    for i in 1..=k {
        acc = acc + T::of_u32(n - k + i).ln() - T::of_u32(i).ln();
    }
    acc
}

/// Binomial pmf value `C(total, n) p1^n (1 - p1)^(total - n)`.
pub fn mb_pmf<T: Real>(state: OccupancyConfig, p1: T) -> T {
    debug_assert!(
        p1 >= T::zero() && p1 <= T::one(),
        "p1 = {p1:?} outside [0, 1]"
    );
    let (n, total) = (state.n(), state.total());
    if p1 == T::zero() {
        return if n == 0 { T::one() } else { T::zero() };
    }
    if p1 == T::one() {
        return if n == total { T::one() } else { T::zero() };
    }
    let p2 = T::one() - p1;
    if total <= DIRECT_BINOMIAL_LIMIT {
        let coeff = T::of_u128(binomial_u128(total, n));
        coeff * p1.powi(n as i32) * p2.powi((total - n) as i32)
    } else {
        let ln_value = ln_binomial::<T>(total, n)
            + T::of_u32(n) * p1.ln()
            + T::of_u32(total - n) * p2.ln();
        ln_value.exp()
    }
}

/// Full binomial pmf over `n = 0..=total`, sharing the running coefficient
/// across entries.
pub fn mb_pmf_vector<T: Real>(total: u32, p1: T) -> Vec<T> {
    debug_assert!(
        p1 >= T::zero() && p1 <= T::one(),
        "p1 = {p1:?} outside [0, 1]"
    );
    let len = total as usize + 1;
    if p1 == T::zero() {
        let mut out = vec![T::zero(); len];
        out[0] = T::one();
        return out;
    }
    if p1 == T::one() {
        let mut out = vec![T::zero(); len];
        out[len - 1] = T::one();
        return out;
    }
    let p2 = T::one() - p1;
    let mut out = Vec::with_capacity(len);
    if total <= DIRECT_BINOMIAL_LIMIT {
        let mut coeff: u128 = 1;
        for n in 0..=total {
            let term = T::of_u128(coeff) * p1.powi(n as i32) * p2.powi((total - n) as i32);
            out.push(term);
            if n < total {
                coeff = coeff * u128::from(total - n) / u128::from(n + 1);
            }
        }
    } else {
        let (lp, lq) = (p1.ln(), p2.ln());
        let mut ln_coeff = T::zero();
        for n in 0..=total {
            out.push((ln_coeff + T::of_u32(n) * lp + T::of_u32(total - n) * lq).exp());
            if n < total {
                ln_coeff = ln_coeff + T::of_u32(total - n).ln() - T::of_u32(n + 1).ln();
            }
        }
    }
    out
}

/// Linear two-state pmf `(n p1 + (total - n)(1 - p1)) / (total (total + 1) / 2)`.
///
/// The denominator is the triangular total that makes the vector sum to one
/// for every `p1`; the distribution is uniform exactly at `p1 = 1/2`.
pub fn be_pmf<T: Real>(state: OccupancyConfig, p1: T) -> T {
    debug_assert!(
        p1 >= T::zero() && p1 <= T::one(),
        "p1 = {p1:?} outside [0, 1]"
    );
    let n = T::of_u32(state.n());
    let total = T::of_u32(state.total());
    let pairs = total * (total + T::one()) / T::of(2.0);
    (n * p1 + (total - n) * (T::one() - p1)) / pairs
}

/// Full linear pmf over `n = 0..=total`.
pub fn be_pmf_vector<T: Real>(total: u32, p1: T) -> Vec<T> {
    (0..=total)
        .map(|n| be_pmf(OccupancyConfig { n, total }, p1))
        .collect()
}
