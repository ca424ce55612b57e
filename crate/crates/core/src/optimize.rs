//! One-dimensional bounded minimization used by the fitting layer: a coarse
//! grid scan to land in the right basin, then golden-section refinement.

use crate::real::Real;

const PHI: f64 = 1.618_033_988_749_895;
const RESP: f64 = 2.0 - PHI;

const MAX_GOLDEN_ITERS: usize = 200;

/// Golden-section minimization of `f` on `[a, b]`; returns `(x, f(x))` with
/// the bracket narrowed below `tol`.
pub(crate) fn golden_section_minimize<T, F>(f: &F, mut a: T, mut b: T, tol: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> T,
{
    let resp = T::of(RESP);
    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while (b - a) > tol && iters < MAX_GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            f2 = f(x2);
        }
        iters += 1;
    }
    let mid = (a + b) / T::of(2.0);
    (mid, f(mid))
}

/// Minimize `f` on `[0, 1]`: evaluate on a uniform grid of `steps + 1`
/// points, then golden-refine within the two cells around the grid argmin.
/// Never returns a point worse than the grid winner.
pub(crate) fn minimize_unit_interval<T, F>(f: &F, steps: u32, tol: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> T,
{
    let mut best_x = T::zero();
    let mut best_f = f(best_x);
    for i in 1..=steps {
        let x = T::of_u32(i) / T::of_u32(steps);
        let fx = f(x);
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
    }
    let step = T::one() / T::of_u32(steps);
    let lo = (best_x - step).max(T::zero());
    let hi = (best_x + step).min(T::one());
    let (x, fx) = golden_section_minimize(f, lo, hi, tol);
    if fx < best_f {
        (x, fx)
    } else {
        (best_x, best_f)
    }
}
