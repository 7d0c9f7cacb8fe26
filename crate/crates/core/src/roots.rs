//! Scalar root finding: bracketed bisection refined by secant steps.
//!
//! The kinetic-algebra maps are all defined through sign changes guaranteed by
//! the pinching inequalities, so a derivative-free bracketing method is both
//! sufficient and safe near the flux inflection.

use crate::Error;

/// Absolute argument tolerance used throughout the kinetic algebra.
pub const ARG_TOL: f64 = 1e-12;

/// Find a root of `f` on `[lo, hi]`, which must bracket a sign change.
///
/// Bisection with a secant trial each iteration; the secant step is accepted
/// only when it stays strictly inside the current bracket.
pub fn bracketed<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    context: &str,
) -> Result<f64, Error> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket {
            lo,
            hi,
            context: context.to_string(),
        });
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        // Secant trial, clamped into the open bracket.
        let mut mid = lo - flo * (hi - lo) / (fhi - flo);
        let margin = 0.01 * (hi - lo);
        if !mid.is_finite() || mid <= lo + margin || mid >= hi - margin {
            mid = 0.5 * (lo + hi);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    if (hi - lo).abs() > tol.max(1e-9 * (lo.abs() + hi.abs())) {
        return Err(Error::RootNotConverged {
            lo,
            hi,
            context: context.to_string(),
        });
    }
    Ok(0.5 * (lo + hi))
}

/// Expand `hi` geometrically away from `lo` until `f` changes sign, then solve.
pub fn expand_and_solve<F: Fn(f64) -> f64>(
    f: F,
    anchor: f64,
    mut probe: f64,
    tol: f64,
    context: &str,
) -> Result<f64, Error> {
    let fa = f(anchor);
    let mut fp = f(probe);
    let mut iter = 0;
    while fa.signum() == fp.signum() && fp != 0.0 {
        probe = anchor + 2.0 * (probe - anchor);
        fp = f(probe);
        iter += 1;
        if iter > 120 || !probe.is_finite() {
            return Err(Error::NoBracket {
                lo: anchor,
                hi: probe,
                context: context.to_string(),
            });
        }
    }
    let (lo, hi) = if anchor < probe {
        (anchor, probe)
    } else {
        (probe, anchor)
    };
    bracketed(f, lo, hi, tol, context)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = bracketed(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, "cbrt").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn no_bracket_is_error() {
        let e = bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-14, "none");
        assert!(matches!(e, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn expansion_finds_far_root() {
        let r = expand_and_solve(|x| x - 100.0, 0.0, 1.0, 1e-12, "far").unwrap();
        assert!((r - 100.0).abs() < 1e-10);
    }
}
