//! Bracketed scalar root finding: bisection with safeguarded Newton polishing.

/// Finds the root of `f` in the open interval `(lo, hi)`.
///
/// `f(lo)` and `f(hi)` must have strictly opposite signs; otherwise `None` is
/// returned. Bisection shrinks the bracket until it is relatively narrow, then
/// Newton steps using `df` polish the root. A Newton step that leaves the
/// current bracket falls back to bisection, so convergence never depends on the
/// quality of the derivative.
pub fn bisect_newton<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() || f_lo == 0.0 || f_hi == 0.0 {
        return None;
    }

    // Coarse phase.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-6 * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    // Polishing phase.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= rel_tol * x.abs() || hi - lo <= rel_tol * x.abs() {
            return Some(x);
        }
    }
    Some(x)
}
