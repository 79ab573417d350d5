//! Semi-analytic eigenpairs of `-(σ u')' = λ c u` with Dirichlet conditions.
//!
//! For `λ ≠ 0` one subdomain is *oscillating* (`Ω₊` when `λ > 0`, `Ω₋` when
//! `λ < 0`) and carries a sine profile, the other is *evanescent* and carries a
//! hyperbolic sine. With `τ = sqrt|λ|`, phases `θ_S = τ k_S |a_S|` and
//! absolute coefficients `s_S = |σ_S|`, flux continuity at the interface reads
//!
//! ```text
//!   tan(θ_O) · s_E k_E = tanh(θ_E) · s_O k_O
//! ```
//!
//! which is solved on the bracket `θ_O ∈ (nπ, (n + ½)π)`, `n = |j|`. Every
//! eigenfunction is normalized to `∫ c φ² = 1` with `φ(0) = α > 0`.

mod inner;
mod special;
mod weyl;

pub use inner::{h_inner, h_norm_sq, stiffness_sq};
pub use weyl::{tau_asymptotic, weyl_count};

use std::f64::consts::PI;

use crate::medium::{MediumConfig, Subdomain};
use crate::roots::bisect_newton;
use crate::{Error, Result};

use special::{cosh_over_sinh, mass_ev, mass_osc, sinc, sinh_ratio, tanhc};

/// Relative tolerance on `|σ₊a₋/(a₊σ₋) - 1|` below which `λ₀ = 0` is declared.
pub const ZERO_RATIO_TOL: f64 = 1e-12;

/// Relative tolerance of the root solve on `τ`.
pub const ROOT_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub index: i64,
    pub lambda: f64,
    /// `sqrt|λ|`.
    pub tau: f64,
    /// Normalization constant, equal to `φ(0)`.
    pub alpha: f64,
    pub sign_class: SignClass,
}

impl SignClass {
    /// Subdomain on which the eigenfunction oscillates; `None` for the zero class.
    pub fn oscillating(self) -> Option<Subdomain> {
        match self {
            SignClass::Positive => Some(Subdomain::Plus),
            SignClass::Negative => Some(Subdomain::Minus),
            SignClass::Zero => None,
        }
    }
}

/// Sign of `λ₀` from the contrast ratio `σ₊a₋/(a₊σ₋)`.
pub fn classify_lambda0(cfg: &MediumConfig) -> Result<SignClass> {
    cfg.validate()?;
    let r = cfg.lambda0_ratio();
    Ok(if (r - 1.0).abs() < ZERO_RATIO_TOL {
        SignClass::Zero
    } else if r > 1.0 {
        SignClass::Positive
    } else {
        SignClass::Negative
    })
}

fn class_of_index(cfg: &MediumConfig, j: i64) -> Result<SignClass> {
    Ok(match j {
        j if j >= 1 => SignClass::Positive,
        j if j <= -1 => SignClass::Negative,
        _ => classify_lambda0(cfg)?,
    })
}

/// Phases `(θ_O, θ_E)` of the oscillating and evanescent sides.
fn phases(cfg: &MediumConfig, osc: Subdomain, tau: f64) -> (f64, f64) {
    let o = cfg.side(osc);
    let e = cfg.side(osc.other());
    (tau * o.k * o.len, tau * e.k * e.len)
}

/// Flux-continuity function divided by `τ`; finite and pole-free on `τ ≥ 0`.
fn scaled_flux_mismatch(cfg: &MediumConfig, osc: Subdomain, tau: f64) -> f64 {
    let o = cfg.side(osc);
    let e = cfg.side(osc.other());
    let (to, te) = (tau * o.k * o.len, tau * e.k * e.len);
    e.sigma_abs * e.k * o.k * o.len * sinc(to) - o.sigma_abs * o.k * to.cos() * e.k * e.len * tanhc(te)
}

fn scaled_flux_mismatch_derivative(cfg: &MediumConfig, osc: Subdomain, tau: f64) -> f64 {
    let o = cfg.side(osc);
    let e = cfg.side(osc.other());
    let (to, te) = (tau * o.k * o.len, tau * e.k * e.len);
    let (wo, we) = (o.k * o.len, e.k * e.len);
    let f = e.sigma_abs * e.k * to.sin() - o.sigma_abs * o.k * to.cos() * te.tanh();
    let sech2 = 1.0 / te.cosh().powi(2);
    let df = e.sigma_abs * e.k * wo * to.cos() + o.sigma_abs * o.k * wo * to.sin() * te.tanh()
        - o.sigma_abs * o.k * to.cos() * we * sech2;
    (df * tau - f) / (tau * tau)
}

/// The transcendental quotient `tan(θ_O) s_E k_E / (tanh(θ_E) s_O k_O)`, equal to
/// one exactly at an eigenvalue. Undefined for the zero class.
pub fn equation_quotient(cfg: &MediumConfig, pair: &EigenPair) -> f64 {
    let Some(osc) = pair.sign_class.oscillating() else {
        return 1.0;
    };
    let o = cfg.side(osc);
    let e = cfg.side(osc.other());
    let (to, te) = phases(cfg, osc, pair.tau);
    to.tan() * e.sigma_abs * e.k / (te.tanh() * o.sigma_abs * o.k)
}

/// Open interval in `λ` that contains `λ_j` and no other eigenvalue.
pub fn eigenvalue_bracket(cfg: &MediumConfig, j: i64) -> Result<(f64, f64)> {
    cfg.validate()?;
    let wp = cfg.k_plus() * cfg.a_plus;
    let wm = cfg.k_minus() * cfg.a_minus.abs();
    let n = j.unsigned_abs() as f64;
    Ok(if j >= 1 {
        ((n * PI / wp).powi(2), ((n + 0.5) * PI / wp).powi(2))
    } else if j <= -1 {
        (-((n + 0.5) * PI / wm).powi(2), -(n * PI / wm).powi(2))
    } else {
        (-(0.5 * PI / wm).powi(2), (0.5 * PI / wp).powi(2))
    })
}

/// Solves for the eigenpair with index `j`.
///
/// Indices follow the nodal ordering: `j ≥ 1` gives positive eigenvalues with
/// `j` zeros in `Ω₊`, `j ≤ -1` negative eigenvalues with `|j|` zeros in `Ω₋`,
/// and `j = 0` the nodeless eigenfunction whose eigenvalue sign is given by
/// [`classify_lambda0`].
pub fn solve_eigenvalue(cfg: &MediumConfig, j: i64) -> Result<EigenPair> {
    cfg.validate()?;
    let class = class_of_index(cfg, j)?;
    let Some(osc) = class.oscillating() else {
        return Ok(EigenPair {
            index: 0,
            lambda: 0.0,
            tau: 0.0,
            alpha: normalization_alpha(cfg, 0.0, SignClass::Zero),
            sign_class: SignClass::Zero,
        });
    };
    let o = cfg.side(osc);
    let n = j.unsigned_abs() as f64;
    let w = o.k * o.len;
    let (lo, hi) = (n * PI / w, (n + 0.5) * PI / w);
    let tau = bisect_newton(
        |t| scaled_flux_mismatch(cfg, osc, t),
        |t| scaled_flux_mismatch_derivative(cfg, osc, t),
        lo,
        hi,
        ROOT_REL_TOL,
    )
    .ok_or(Error::Bracketing { index: j, lo, hi })?;
    let lambda = match class {
        SignClass::Positive => tau * tau,
        _ => -tau * tau,
    };
    Ok(EigenPair {
        index: j,
        lambda,
        tau,
        alpha: normalization_alpha(cfg, tau, class),
        sign_class: class,
    })
}

/// All eigenpairs with `j_min ≤ j ≤ j_max`, in increasing order.
pub fn spectrum(cfg: &MediumConfig, j_min: i64, j_max: i64) -> Result<Vec<EigenPair>> {
    if j_min > j_max {
        return Err(Error::InvalidConfig(format!("empty index range [{j_min}, {j_max}]")));
    }
    (j_min..=j_max).map(|j| solve_eigenvalue(cfg, j)).collect()
}

/// Normalization `α > 0` making `∫ c φ² = 1` for the eigenfunction with phase
/// parameter `tau` in the given class.
///
/// The integral is evaluated exactly on each side (no use of the eigenvalue
/// equation), so the result is meaningful for any `tau`.
pub fn normalization_alpha(cfg: &MediumConfig, tau: f64, class: SignClass) -> f64 {
    let m = cfg.side(Subdomain::Minus);
    let p = cfg.side(Subdomain::Plus);
    let inv_sq = match class {
        SignClass::Zero => (m.c * m.len + p.c * p.len) / 3.0,
        SignClass::Positive => p.c * p.len * mass_osc(tau * p.k * p.len) + m.c * m.len * mass_ev(tau * m.k * m.len),
        SignClass::Negative => m.c * m.len * mass_osc(tau * m.k * m.len) + p.c * p.len * mass_ev(tau * p.k * p.len),
    };
    inv_sq.recip().sqrt()
}

fn side_of(x: f64) -> Subdomain {
    if x < 0.0 {
        Subdomain::Minus
    } else {
        Subdomain::Plus
    }
}

fn check_domain(cfg: &MediumConfig, x: f64) -> Result<()> {
    if cfg.contains(x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x, a_minus: cfg.a_minus, a_plus: cfg.a_plus })
    }
}

/// Profile `φ/α` on `side` as a function of the distance `d` from the outer boundary.
fn profile(cfg: &MediumConfig, pair: &EigenPair, side: Subdomain, d: f64) -> f64 {
    let s = cfg.side(side);
    match pair.sign_class.oscillating() {
        None => d / s.len,
        Some(osc) if osc == side => (pair.tau * s.k * d).sin() / (pair.tau * s.k * s.len).sin(),
        Some(_) => sinh_ratio(pair.tau * s.k * d, pair.tau * s.k * s.len),
    }
}

/// `d/dd (φ/α)` on `side`, with `d` the distance from the outer boundary.
fn profile_slope(cfg: &MediumConfig, pair: &EigenPair, side: Subdomain, d: f64) -> f64 {
    let s = cfg.side(side);
    let w = pair.tau * s.k;
    match pair.sign_class.oscillating() {
        None => 1.0 / s.len,
        Some(osc) if osc == side => w * (w * d).cos() / (w * s.len).sin(),
        Some(_) => w * cosh_over_sinh(w * d, w * s.len),
    }
}

fn distance_from_boundary(cfg: &MediumConfig, side: Subdomain, x: f64) -> f64 {
    match side {
        Subdomain::Minus => x - cfg.a_minus,
        Subdomain::Plus => cfg.a_plus - x,
    }
}

/// `φ_j(x)` for `x ∈ [a₋, a₊]`.
pub fn eigenfunction_eval(pair: &EigenPair, cfg: &MediumConfig, x: f64) -> Result<f64> {
    check_domain(cfg, x)?;
    if x == cfg.a_minus || x == cfg.a_plus {
        return Ok(0.0);
    }
    let side = side_of(x);
    Ok(pair.alpha * profile(cfg, pair, side, distance_from_boundary(cfg, side, x)))
}

/// One-sided derivative `φ_j'(x)` taken from `side`. At the interface the two
/// sides differ; elsewhere `side` must contain `x`.
pub fn eigenfunction_derivative(pair: &EigenPair, cfg: &MediumConfig, side: Subdomain, x: f64) -> Result<f64> {
    check_domain(cfg, x)?;
    let d = distance_from_boundary(cfg, side, x);
    let dir = match side {
        Subdomain::Minus => 1.0,
        Subdomain::Plus => -1.0,
    };
    Ok(dir * pair.alpha * profile_slope(cfg, pair, side, d))
}

/// `φ_j'(0⁻) / α_j`.
pub(crate) fn interface_slope_minus(cfg: &MediumConfig, pair: &EigenPair) -> f64 {
    let len = cfg.side(Subdomain::Minus).len;
    profile_slope(cfg, pair, Subdomain::Minus, len)
}

/// Interior zeros `(n₋, n₊)` of the closed-form eigenfunction, counted from
/// the phase of the oscillating side.
pub fn count_interior_zeros_analytic(pair: &EigenPair, cfg: &MediumConfig) -> (usize, usize) {
    let Some(osc) = pair.sign_class.oscillating() else {
        return (0, 0);
    };
    let s = cfg.side(osc);
    let theta = pair.tau * s.k * s.len;
    // zeros of sin(τ k d) for 0 < d < L
    let n = ((theta / PI).ceil() as usize).saturating_sub(1);
    match osc {
        Subdomain::Minus => (n, 0),
        Subdomain::Plus => (0, n),
    }
}
