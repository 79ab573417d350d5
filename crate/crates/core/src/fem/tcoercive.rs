//! Discrete check of weak T-coercivity of `a(u, v) = ∫ σ u' v'`.
//!
//! The reflection operator is the identity on `Ω₊` and
//! `Tu(x) = 2χ(x) u(-m x) - u(x)` on `Ω₋`, so that `a(u, Tu)` differs from
//! `‖u‖_H²` only by interface-localized cross terms of size `O(√m)` plus a
//! compact remainder absorbed by `k ⟨u, u⟩_c`.

use nalgebra::DMatrix;

use super::assemble::{assemble, check_mesh, Weight};
use super::band::SymBandMatrix;
use super::mesh::Mesh;
use crate::eig::generalized_sym_eigenvalues;
use crate::medium::MediumConfig;
use crate::{Error, Result};

/// Threshold on the minimal generalized eigenvalue: the proven bound is ½,
/// the slack accounts for discretization.
pub const COERCIVITY_THRESHOLD: f64 = 0.4;

/// Smooth cutoff equal to 1 on `|x| ≤ r1` and 0 on `|x| ≥ r2`, built from the
/// `C^∞` transition `g(t) = f(1-t) / (f(1-t) + f(t))`, `f(t) = exp(-1/t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub r1: f64,
    pub r2: f64,
}

impl Cutoff {
    /// `r1 = 0.05 |a₋|`, `r2 = 0.5 |a₋|`.
    pub fn default_for(cfg: &MediumConfig) -> Self {
        let l = cfg.a_minus.abs();
        Self { r1: 0.05 * l, r2: 0.5 * l }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r1 > 0.0 && self.r2 > self.r1 && self.r2.is_finite()) {
            return Err(Error::InvalidConfig(format!("cutoff needs 0 < r1 < r2, got ({}, {})", self.r1, self.r2)));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x.abs() - self.r1) / (self.r2 - self.r1);
        if t <= 0.0 {
            1.0
        } else if t >= 1.0 {
            0.0
        } else {
            let f = |s: f64| (-1.0 / s).exp();
            f(1.0 - t) / (f(1.0 - t) + f(t))
        }
    }

    /// `‖χ'‖_∞`; the transition has maximal slope 2 at its midpoint.
    pub fn max_slope(&self) -> f64 {
        2.0 / (self.r2 - self.r1)
    }
}

/// Constants of the coercivity estimate
/// `a(u,Tu) ≥ (1 - (α₁+α₂)√m) ‖u‖_H² - α₂ m^{-3/2} ‖u‖_c²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    /// Largest `m < a₊/|a₋|` with `(α₁+α₂)√m ≤ ½`.
    pub m: f64,
    /// `α₂ m^{-3/2}`.
    pub k: f64,
}

pub fn proof_constants(cfg: &MediumConfig, chi: &Cutoff) -> Result<ProofConstants> {
    cfg.validate()?;
    chi.validate()?;
    let sm = cfg.sigma_minus.abs();
    let alpha1 = 2.0 * (sm / cfg.sigma_plus).sqrt();
    let alpha2 = 2.0 * chi.max_slope() * sm.sqrt() / cfg.c_minus.min(cfg.c_plus).sqrt();
    let m_small = (0.5 / (alpha1 + alpha2)).powi(2);
    // stay strictly inside the admissible range of m
    let m = m_small.min(0.5 * cfg.a_plus / cfg.a_minus.abs());
    Ok(ProofConstants { alpha1, alpha2, m, k: alpha2 * m.powf(-1.5) })
}

/// Sparse rows of the nodal operator `u ↦ I_h(Tu)` on the interior DOFs.
#[derive(Debug, Clone)]
pub struct TOperator {
    rows: Vec<Vec<(usize, f64)>>,
}

impl TOperator {
    pub fn new(mesh: &Mesh, m: f64, chi: &Cutoff) -> Result<Self> {
        chi.validate()?;
        let limit = mesh.a_plus() / mesh.a_minus().abs();
        if !(m > 0.0 && m < limit) {
            return Err(Error::InvalidConfig(format!("need 0 < m < {limit}, got {m}")));
        }
        let nodes = mesh.nodes();
        let last = nodes.len() - 1;
        let mut rows = Vec::with_capacity(mesh.num_dofs());
        for (i, &x) in nodes.iter().enumerate().take(last).skip(1) {
            let mut row = vec![];
            if x < 0.0 {
                row.push((i - 1, -1.0));
                let w = 2.0 * chi.eval(x);
                if w != 0.0 {
                    let (e, t) = mesh.locate(-m * x)?;
                    for (node, coef) in [(e, 1.0 - t), (e + 1, t)] {
                        if node != 0 && node != last && coef != 0.0 {
                            row.push((node - 1, w * coef));
                        }
                    }
                }
            } else {
                row.push((i - 1, 1.0));
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.rows.len(), "DOF vector length");
        self.rows.iter().map(|r| r.iter().map(|&(j, w)| w * u[j]).sum()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.rows.len();
        let mut t = DMatrix::zeros(n, n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, w) in r {
                t[(i, j)] += w;
            }
        }
        t
    }
}

/// Nodal interpolant of `Tu`.
pub fn apply_t(mesh: &Mesh, u: &[f64], m: f64, chi: &Cutoff) -> Result<Vec<f64>> {
    if u.len() != mesh.num_dofs() {
        return Err(Error::DimensionMismatch { expected: mesh.num_dofs(), found: u.len() });
    }
    Ok(TOperator::new(mesh, m, chi)?.apply(u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityResult {
    pub k: f64,
    pub min_eig: f64,
    pub pass: bool,
}

/// Assembled pieces shared by all `k` of a sweep.
pub struct CoercivityProblem {
    /// `sym(A_σ T)`.
    form: DMatrix<f64>,
    mass: DMatrix<f64>,
    gram: SymBandMatrix,
}

impl CoercivityProblem {
    pub fn new(cfg: &MediumConfig, mesh: &Mesh, m: f64, chi: &Cutoff) -> Result<Self> {
        check_mesh(cfg, mesh)?;
        let t = TOperator::new(mesh, m, chi)?.to_dense();
        let a = assemble(cfg, mesh, Weight::Sigma)?.to_dense();
        Self::from_parts(&a, &t, cfg, mesh)
    }

    /// Sanity variant: `|σ|` in place of `σ` and `T = id`, so the form equals the H Gram matrix.
    pub fn identity_sanity(cfg: &MediumConfig, mesh: &Mesh) -> Result<Self> {
        check_mesh(cfg, mesh)?;
        let a = assemble(cfg, mesh, Weight::AbsSigma)?.to_dense();
        let t = DMatrix::identity(mesh.num_dofs(), mesh.num_dofs());
        Self::from_parts(&a, &t, cfg, mesh)
    }

    fn from_parts(a: &DMatrix<f64>, t: &DMatrix<f64>, cfg: &MediumConfig, mesh: &Mesh) -> Result<Self> {
        let at = a * t;
        let form = (&at + at.transpose()) * 0.5;
        Ok(Self {
            form,
            mass: assemble(cfg, mesh, Weight::C)?.to_dense(),
            gram: assemble(cfg, mesh, Weight::AbsSigma)?,
        })
    }

    /// Minimal eigenvalue of `sym(A_σ T) + k C` relative to the H Gram matrix.
    pub fn min_eig(&self, k: f64) -> Result<CoercivityResult> {
        let b = SymBandMatrix::from_dense_upper(&(&self.form + &self.mass * k))?;
        let eigs = generalized_sym_eigenvalues(&b, &self.gram)?;
        let min_eig = eigs[0];
        Ok(CoercivityResult { k, min_eig, pass: min_eig >= COERCIVITY_THRESHOLD })
    }
}

/// Single evaluation of the coercivity form at a given `k`.
pub fn coercivity_check(cfg: &MediumConfig, mesh: &Mesh, m: f64, chi: &Cutoff, k: f64) -> Result<CoercivityResult> {
    CoercivityProblem::new(cfg, mesh, m, chi)?.min_eig(k)
}

/// Geometric grid `k_proof · 4^{-i}`, `i = n-1, …, 0`, preceded by `k = 0`.
pub fn k_grid(k_proof: f64, n: usize) -> Vec<f64> {
    std::iter::once(0.0).chain((0..n).rev().map(|i| k_proof * 4f64.powi(-(i as i32)))).collect()
}

/// Evaluates the form over `ks` (ascending); the sweep stops at the first pass.
pub fn coercivity_sweep(problem: &CoercivityProblem, ks: &[f64]) -> Result<Vec<CoercivityResult>> {
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        let r = problem.min_eig(k)?;
        out.push(r);
        if r.pass {
            break;
        }
    }
    Ok(out)
}
