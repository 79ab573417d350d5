//! Closed-form energy inner products of the eigenfunctions.
//!
//! Off the diagonal, integrating by parts on `Ω₋` and using the eigenvalue
//! equation there reduces `∫_{Ω₋} φ_i' φ_j'` to interface data:
//!
//! ```text
//!   ∫_{Ω₋} φ_i' φ_j' = α_i α_j (λ_i D_j - λ_j D_i) / (λ_i - λ_j),   D = φ'(0⁻)/α.
//! ```
//!
//! Since `∫ σ φ_i' φ_j' = λ_j δ_ij`, the `|σ|`-weighted product follows as
//! `⟨φ_i, φ_j⟩_H = 2 |σ₋| ∫_{Ω₋} φ_i' φ_j'` for `i ≠ j`. Specializing the sign
//! classes recovers the familiar case-by-case formulas with the factors
//! `2τ_iτ_j/(τ_i² ∓ τ_j²)`.

use super::special::{stiff_ev, stiff_osc};
use super::{interface_slope_minus, EigenPair, SignClass};
use crate::medium::{MediumConfig, Subdomain};
use crate::{Error, Result};

/// Minimal separation of `τ` values in the same class before the off-diagonal
/// closed form is declared singular.
const COINCIDENCE_TOL: f64 = 1e-9;

/// Per-side `∫_S |σ| φ'²` divided by `α²`.
fn side_stiffness(cfg: &MediumConfig, pair: &EigenPair, side: Subdomain) -> f64 {
    let s = cfg.side(side);
    let theta = pair.tau * s.k * s.len;
    let shape = match pair.sign_class.oscillating() {
        None => 1.0,
        Some(osc) if osc == side => stiff_osc(theta),
        Some(_) => stiff_ev(theta),
    };
    s.sigma_abs / s.len * shape
}

/// `‖φ_j‖_H² = ∫ |σ| (φ_j')²`.
pub fn h_norm_sq(cfg: &MediumConfig, pair: &EigenPair) -> f64 {
    pair.alpha * pair.alpha
        * (side_stiffness(cfg, pair, Subdomain::Minus) + side_stiffness(cfg, pair, Subdomain::Plus))
}

/// Signed `∫ σ (φ_j')²`; equals `λ_j` for a normalized eigenpair.
pub fn stiffness_sq(cfg: &MediumConfig, pair: &EigenPair) -> f64 {
    pair.alpha * pair.alpha
        * (side_stiffness(cfg, pair, Subdomain::Plus) - side_stiffness(cfg, pair, Subdomain::Minus))
}

/// `⟨φ_i, φ_j⟩_H = ∫ |σ| φ_i' φ_j'`.
pub fn h_inner(cfg: &MediumConfig, pi: &EigenPair, pj: &EigenPair) -> Result<f64> {
    if pi.index == pj.index {
        return Ok(h_norm_sq(cfg, pi));
    }
    if pi.sign_class == pj.sign_class
        && pi.sign_class != SignClass::Zero
        && (pi.tau - pj.tau).abs() < COINCIDENCE_TOL
    {
        return Err(Error::CoincidentEigenvalues { i: pi.index, j: pj.index });
    }
    let di = interface_slope_minus(cfg, pi);
    let dj = interface_slope_minus(cfg, pj);
    let cross = (pi.lambda * dj - pj.lambda * di) / (pi.lambda - pj.lambda);
    Ok(2.0 * cfg.sigma_minus.abs() * (pi.alpha * pj.alpha) * cross)
}
