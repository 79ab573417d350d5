use std::f64::consts::PI;

use super::{classify_lambda0, eigenvalue_bracket, solve_eigenvalue, SignClass};
use crate::medium::MediumConfig;
use crate::{Error, Result};

/// Two-term asymptotic approximation of `τ_j = sqrt|λ_j|` for `|j| ≥ 1`.
///
/// ```text
///   j ≥ 1:   τ_j ≈ (jπ + arctan(σ₊k₊ / (|σ₋|k₋))) / (k₊a₊)
///   j ≤ -1:  τ_j ≈ (|j|π + arctan(|σ₋|k₋ / (σ₊k₊))) / (k₋|a₋|)
/// ```
///
/// The remainder decays exponentially because `tanh(θ_E) → 1`.
pub fn tau_asymptotic(cfg: &MediumConfig, j: i64) -> f64 {
    let sp = cfg.sigma_plus * cfg.k_plus();
    let sm = cfg.sigma_minus.abs() * cfg.k_minus();
    let n = j.unsigned_abs() as f64;
    if j >= 0 {
        (n * PI + (sp / sm).atan()) / (cfg.k_plus() * cfg.a_plus)
    } else {
        (n * PI + (sm / sp).atan()) / (cfg.k_minus() * cfg.a_minus.abs())
    }
}

/// Number of eigenvalues in `[-Λ, Λ]`, counted exactly from the brackets.
///
/// Only the eigenvalue whose bracket straddles `±Λ` on each side (and `λ₀`)
/// needs a root solve; all other brackets lie entirely inside or outside.
pub fn weyl_count(cfg: &MediumConfig, big_lambda: f64) -> Result<usize> {
    if !(big_lambda >= 1.0) {
        return Err(Error::InvalidConfig(format!("Λ must be ≥ 1, got {big_lambda}")));
    }
    let mut count = 0usize;
    for dir in [1i64, -1] {
        let mut j = dir;
        loop {
            let (lo, hi) = eigenvalue_bracket(cfg, j)?;
            let (near, far) = if dir > 0 { (lo, hi) } else { (hi, lo) };
            if near.abs() > big_lambda {
                break;
            }
            if far.abs() <= big_lambda || solve_eigenvalue(cfg, j)?.lambda.abs() <= big_lambda {
                count += 1;
            } else {
                break;
            }
            j += dir;
        }
    }
    let zero_inside = match classify_lambda0(cfg)? {
        SignClass::Zero => true,
        _ => solve_eigenvalue(cfg, 0)?.lambda.abs() <= big_lambda,
    };
    Ok(count + usize::from(zero_inside))
}
