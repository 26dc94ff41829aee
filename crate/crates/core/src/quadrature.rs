//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_DEPTH: u32 = 40;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails with [`Error::QuadratureNonConvergence`] if some subinterval still
/// misses its share of the tolerance at the maximum bisection depth; the error
/// carries the accumulated error estimate.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let m = (a + b) * T::lit(0.5);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    let mut achieved = T::zero();
    let mut failed = false;
    let v = recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut achieved, &mut failed);
    if failed {
        return Err(Error::QuadratureNonConvergence {
            achieved: achieved.to_f64_lossy(),
            requested: tol.to_f64_lossy(),
        });
    }
    Ok(v)
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    achieved: &mut T,
    failed: &mut bool,
) -> T {
    let m = (a + b) * T::lit(0.5);
    let lm = (a + m) * T::lit(0.5);
    let rm = (m + b) * T::lit(0.5);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let err = delta.abs() / T::lit(15.0);
    if err <= tol || depth == 0 {
        if err > tol {
            *failed = true;
        }
        *achieved += err;
        return left + right + delta / T::lit(15.0);
    }
    let half = tol * T::lit(0.5);
    recurse(f, a, m, fa, flm, fm, left, half, depth - 1, achieved, failed)
        + recurse(f, m, b, fm, frm, fb, right, half, depth - 1, achieved, failed)
}
