//! Piecewise-constant coefficient model on `Ω = (a₋, a₊)` with interface at `x = 0`.

use crate::{Error, Result};

/// Problem data: `σ = σ₊ > 0, c = c₊` on `Ω₊ = (0, a₊)` and
/// `σ = σ₋ < 0, c = c₋` on `Ω₋ = (a₋, 0)`; cubic coefficient `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConfig {
    pub a_minus: f64,
    pub a_plus: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub kappa: f64,
}

/// One of the two subdomains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subdomain {
    Minus,
    Plus,
}

/// Coefficients of one subdomain expressed through absolute values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    /// `|σ|` on the subdomain.
    pub sigma_abs: f64,
    pub c: f64,
    /// Length `|a_±|` of the subdomain.
    pub len: f64,
    /// Wavenumber `k = sqrt(c / |σ|)`.
    pub k: f64,
}

impl Default for MediumConfig {
    /// `Ω = (-5, 5)`, `σ₊ = 1`, `σ₋ = -2`, `c ≡ 1`, `κ = 1`.
    fn default() -> Self {
        Self {
            a_minus: -5.0,
            a_plus: 5.0,
            sigma_plus: 1.0,
            sigma_minus: -2.0,
            c_plus: 1.0,
            c_minus: 1.0,
            kappa: 1.0,
        }
    }
}

impl MediumConfig {
    /// Symmetric domain `(-len, len)` with `σ₊ = 1`, `c ≡ 1`, `κ = 1`.
    pub fn symmetric(len: f64, sigma_minus: f64) -> Self {
        Self {
            a_minus: -len,
            a_plus: len,
            sigma_minus,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.a_minus,
            self.a_plus,
            self.sigma_plus,
            self.sigma_minus,
            self.c_plus,
            self.c_minus,
            self.kappa,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        if !(self.a_minus < 0.0 && self.a_plus > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need a_minus < 0 < a_plus, got ({}, {})",
                self.a_minus, self.a_plus
            )));
        }
        if !(self.sigma_plus > 0.0 && self.sigma_minus < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need sigma_plus > 0 > sigma_minus, got ({}, {})",
                self.sigma_plus, self.sigma_minus
            )));
        }
        if !(self.c_plus > 0.0 && self.c_minus > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need c_plus, c_minus > 0, got ({}, {})",
                self.c_plus, self.c_minus
            )));
        }
        let (km, kp) = (self.k_minus(), self.k_plus());
        if !(km.is_finite() && km > 0.0 && kp.is_finite() && kp > 0.0) {
            return Err(Error::InvalidConfig("wavenumbers are not finite and positive".into()));
        }
        Ok(())
    }

    pub fn k_minus(&self) -> f64 {
        (self.c_minus / self.sigma_minus.abs()).sqrt()
    }

    pub fn k_plus(&self) -> f64 {
        (self.c_plus / self.sigma_plus).sqrt()
    }

    pub fn side(&self, sub: Subdomain) -> Side {
        match sub {
            Subdomain::Minus => Side {
                sigma_abs: self.sigma_minus.abs(),
                c: self.c_minus,
                len: self.a_minus.abs(),
                k: self.k_minus(),
            },
            Subdomain::Plus => Side {
                sigma_abs: self.sigma_plus,
                c: self.c_plus,
                len: self.a_plus,
                k: self.k_plus(),
            },
        }
    }

    /// Signed `σ(x)`; at the interface the `Ω₊` value is returned.
    pub fn sigma_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.sigma_minus
        } else {
            self.sigma_plus
        }
    }

    pub fn c_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.c_minus
        } else {
            self.c_plus
        }
    }

    /// Contrast ratio `σ₊a₋ / (a₊σ₋)` deciding the sign of `λ₀`.
    pub fn lambda0_ratio(&self) -> f64 {
        self.sigma_plus * self.a_minus / (self.a_plus * self.sigma_minus)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a_minus && x <= self.a_plus
    }

    /// Leading Weyl slope `(k₊a₊ + k₋|a₋|)/π` of the eigenvalue counting function in `√Λ`.
    pub fn weyl_slope(&self) -> f64 {
        (self.k_plus() * self.a_plus + self.k_minus() * self.a_minus.abs()) / std::f64::consts::PI
    }
}

impl Subdomain {
    pub fn other(self) -> Self {
        match self {
            Subdomain::Minus => Subdomain::Plus,
            Subdomain::Plus => Subdomain::Minus,
        }
    }
}
