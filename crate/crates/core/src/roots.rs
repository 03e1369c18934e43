//! Bracketed bisection for monotone scalar equations.

use crate::error::{Error, Result};

/// Outcome of a bisection run.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    /// Residual `f(x)` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
///
/// Terminates when `|f(mid)| < f_tol`, or when the bracket can no longer be
/// halved in floating point, in which case the endpoint with the smaller
/// residual is returned.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, f_lo: f64, f_hi: f64, f_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Domain(format!(
            "bisection bracket [{lo}, {hi}] does not straddle a root (f = {f_lo}, {f_hi})"
        )));
    }
    let lo_positive = f_lo > 0.0;
    let (mut r_lo, mut r_hi) = (f_lo, f_hi);
    for iterations in 1..=2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            let (x, residual) = if r_lo.abs() <= r_hi.abs() { (lo, r_lo) } else { (hi, r_hi) };
            return Ok(Root { x, residual, iterations });
        }
        let r = f(mid)?;
        if r.abs() < f_tol {
            return Ok(Root { x: mid, residual: r, iterations });
        }
        if (r > 0.0) == lo_positive {
            lo = mid;
            r_lo = r;
        } else {
            hi = mid;
            r_hi = r;
        }
    }
    unreachable!("bisection halves a finite interval at most ~2100 times")
}
