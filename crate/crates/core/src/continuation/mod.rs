//! Pseudo-arclength continuation of the nontrivial solution branches of
//!
//! ```text
//!   F(u, λ) = A_σ u - λ C u - G(u) = 0,   G(u)_i = ∫ κ u³ ψ_i,
//! ```
//!
//! seeded at the eigenvalues of the linear problem.
//!
//! Arclength is measured in the metric `‖(v, μ)‖² = vᵀCv + μ²`. Each corrector
//! solves the bordered system
//!
//! ```text
//!   [ J       -Cu ] [du]   [-F]
//!   [ (C t)ᵀ  t_λ ] [dλ] = [-g]
//! ```
//!
//! by block elimination on the tridiagonal `J` with one step of iterative refinement.

mod diagnostics;
mod io;
mod problem;

pub use diagnostics::{
    count_interior_zeros, detect_plateau, extremum_half_widths, Plateau, ZeroCount, PLATEAU_SPREAD, ZERO_BAND,
};
pub use io::{
    read_branch_csv, sidecar_name, vector_from_text, vector_to_text, write_branch_csv, BranchRow, BRANCH_CSV_HEADER,
};
pub use problem::Discretization;

use problem::norm2;

use crate::fem::{dot, SymBandMatrix};
use crate::spectral::{eigenfunction_eval, EigenPair};
use crate::eig::TridiagPencil;
use crate::tridiag::TridiagLu;
use crate::{Error, Result};

/// Step-control and tolerance parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationParams {
    /// Number of continuation steps after the seed.
    pub steps: usize,
    /// Initial arclength step; the step stays within `[ds/64, 8·ds]`.
    pub ds: f64,
    /// Relative Newton tolerance on `‖F‖₂ ≤ tol (1 + ‖u‖₂)`.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Seed amplitude `s = ⟨u, φ_j⟩_c`.
    pub seed_amplitude: f64,
    /// `‖u‖_c` below which the branch is declared to have returned to `u = 0`.
    pub trivial_tol: f64,
    /// `‖u‖_c` above which the branch is declared divergent.
    pub divergence_norm: f64,
}

impl Default for ContinuationParams {
    fn default() -> Self {
        Self {
            steps: 100,
            ds: 0.05,
            newton_tol: 1e-10,
            max_newton: 25,
            seed_amplitude: 1e-2,
            trivial_tol: 1e-6,
            divergence_norm: 1e6,
        }
    }
}

impl ContinuationParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.ds > 0.0
            && self.newton_tol > 0.0
            && self.max_newton > 0
            && self.seed_amplitude > 0.0
            && self.trivial_tol >= 0.0
            && self.divergence_norm > self.trivial_tol;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid continuation parameters {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub lambda: f64,
    pub u: Vec<f64>,
    pub l2c_norm: f64,
    pub h_norm: f64,
    pub energy: f64,
    pub zeros_minus: usize,
    pub zeros_plus: usize,
    pub monotone_minus: bool,
    pub monotone_plus: bool,
    pub plateau: Option<f64>,
    /// Euclidean residual norm at acceptance.
    pub residual: f64,
    /// Arclength step that produced the point; zero for the seed.
    pub ds: f64,
    /// Half-maximum widths of the lobes of `u` on `Ω₋`.
    pub extremum_widths: Vec<f64>,
}

impl BranchPoint {
    pub fn new(disc: &Discretization, u: Vec<f64>, lambda: f64, ds: f64) -> Result<Self> {
        let z = count_interior_zeros(&disc.mesh, &u)?;
        Ok(Self {
            lambda,
            l2c_norm: disc.l2c_norm(&u),
            h_norm: disc.h_norm(&u),
            energy: disc.energy(&u, lambda),
            zeros_minus: z.zeros_minus,
            zeros_plus: z.zeros_plus,
            monotone_minus: z.monotone_minus,
            monotone_plus: z.monotone_plus,
            plateau: detect_plateau(&disc.mesh, &u, lambda).map(|p| p.value),
            residual: disc.residual_norm(&u, lambda),
            ds,
            extremum_widths: extremum_half_widths(&disc.mesh, &u),
            u,
        })
    }

    /// Re-checks `‖F(u, λ)‖₂ ≤ tol (1 + ‖u‖₂)`.
    pub fn verify(&self, disc: &Discretization, tol: f64) -> bool {
        disc.residual_norm(&self.u, self.lambda) <= tol * (1.0 + norm2(&self.u))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchStatus {
    MaxSteps,
    Diverged,
    ReturnedToTrivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub seed_index: i64,
    pub points: Vec<BranchPoint>,
    pub status: BranchStatus,
}

/// Converged starting point together with the first tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub index: i64,
    pub point: BranchPoint,
    /// Amplitude actually used after possible halvings.
    pub amplitude: f64,
    /// Discrete eigenvalue of the linear problem closest to the analytic one;
    /// the branch leaves the trivial family there on this mesh.
    pub linear_lambda: f64,
    /// `∫ κ φ_j⁴` of the discrete, `C`-normalized eigenfunction interpolant.
    pub beta: f64,
    pub tangent_u: Vec<f64>,
    pub tangent_lambda: f64,
}

/// Linear constraint `rowᵀ u + corner λ = target`.
struct Constraint {
    row: Vec<f64>,
    corner: f64,
    target: f64,
}

impl Constraint {
    fn eval(&self, u: &[f64], lambda: f64) -> f64 {
        dot(&self.row, u) + self.corner * lambda - self.target
    }
}

enum CorrectorFailure {
    Singular,
    NoConvergence,
}

/// Block elimination for `[J b; rᵀ c] [x; y] = [f; g]`, refined once.
fn bordered_solve(
    jac: &SymBandMatrix,
    lu: &TridiagLu,
    col: &[f64],
    con: &Constraint,
    f: &[f64],
    g: f64,
) -> std::result::Result<(Vec<f64>, f64), CorrectorFailure> {
    let x2 = lu.solve(col);
    let schur = con.corner - dot(&con.row, &x2);
    let scale = con.corner.abs() + norm2(&con.row) * norm2(&x2);
    if !(schur.abs() > 1e-14 * scale) {
        return Err(CorrectorFailure::Singular);
    }
    let solve = |f: &[f64], g: f64| {
        let x1 = lu.solve(f);
        let y = (g - dot(&con.row, &x1)) / schur;
        let x: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a - y * b).collect();
        (x, y)
    };
    let (mut x, mut y) = solve(f, g);
    let jx = jac.matvec(&x);
    let rf: Vec<f64> = (0..f.len()).map(|i| f[i] - jx[i] - col[i] * y).collect();
    let rg = g - dot(&con.row, &x) - con.corner * y;
    let (dx, dy) = solve(&rf, rg);
    x.iter_mut().zip(&dx).for_each(|(a, b)| *a += b);
    y += dy;
    Ok((x, y))
}

/// Newton's method on `F = 0` augmented by a linear constraint.
fn correct(
    disc: &Discretization,
    mut u: Vec<f64>,
    mut lambda: f64,
    con: &Constraint,
    params: &ContinuationParams,
) -> std::result::Result<(Vec<f64>, f64, usize), CorrectorFailure> {
    for iter in 0..=params.max_newton {
        let f = disc.residual(&u, lambda);
        let g = con.eval(&u, lambda);
        let unorm = norm2(&u);
        if !(unorm.is_finite() && lambda.is_finite()) {
            return Err(CorrectorFailure::NoConvergence);
        }
        let scale = 1.0 + unorm;
        if norm2(&f) <= params.newton_tol * scale && g.abs() <= params.newton_tol * scale {
            return Ok((u, lambda, iter));
        }
        if iter == params.max_newton {
            break;
        }
        let jac = disc.jacobian(&u, lambda);
        let (lower, diag, upper) = jac.tridiagonal().expect("P1 Jacobian is tridiagonal");
        let lu = TridiagLu::factor(&lower, &diag, &upper).map_err(|_| CorrectorFailure::Singular)?;
        let col: Vec<f64> = disc.mass.matvec(&u).iter().map(|v| -v).collect();
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let (du, dl) = bordered_solve(&jac, &lu, &col, con, &rhs, -g)?;
        u.iter_mut().zip(&du).for_each(|(a, b)| *a += b);
        lambda += dl;
    }
    Err(CorrectorFailure::NoConvergence)
}

/// `C`-normalized nodal interpolant of the eigenfunction.
pub fn interpolated_eigenfunction(disc: &Discretization, pair: &EigenPair) -> Result<Vec<f64>> {
    let mut phi = disc
        .mesh
        .interpolate(|x| eigenfunction_eval(pair, &disc.cfg, x).expect("mesh nodes lie in the domain"));
    let n = disc.l2c_norm(&phi);
    phi.iter_mut().for_each(|v| *v /= n);
    Ok(phi)
}

/// Converges a solution with `⟨u, φ_j⟩_c = s` from the predictor
/// `u₀ = s φ_j`, `λ₀ = λ_j - s² ∫κφ_j⁴`.
fn seed_at(
    disc: &Discretization,
    linear_lambda: f64,
    phi: &[f64],
    beta: f64,
    s: f64,
    params: &ContinuationParams,
) -> Option<(Vec<f64>, f64)> {
    let row = disc.mass.matvec(phi);
    let con = Constraint { row, corner: 0.0, target: s };
    let u0: Vec<f64> = phi.iter().map(|v| s * v).collect();
    let lambda0 = linear_lambda - s * s * beta;
    correct(disc, u0, lambda0, &con, params).ok().map(|(u, l, _)| (u, l))
}

/// Seeds the branch bifurcating from `pair`. Both `±s` are solved and checked
/// to be mirror images; the `+s` solution is returned.
pub fn branch_seed(disc: &Discretization, pair: &EigenPair, params: &ContinuationParams) -> Result<Seed> {
    params.validate()?;
    let phi = interpolated_eigenfunction(disc, pair)?;
    let beta = disc.quartic(&phi);
    let linear_lambda = TridiagPencil::new(&disc.a_sigma, &disc.mass)?.nearest_eigenvalue(pair.lambda, 1e-14)?;
    let mut s = params.seed_amplitude;
    for _ in 0..=5 {
        if let (Some((up, lp)), Some((um, lm))) =
            (seed_at(disc, linear_lambda, &phi, beta, s, params), seed_at(disc, linear_lambda, &phi, beta, -s, params))
        {
            let odd = (lp - lm).abs() <= 1e-8 * (1.0 + lp.abs())
                && up.iter().zip(&um).all(|(a, b)| (a + b).abs() <= 1e-8 * (1.0 + a.abs()));
            if !odd {
                return Err(Error::NewtonFailure(format!("±{s} seeds at j = {} are not mirror images", pair.index)));
            }
            let point = BranchPoint::new(disc, up, lp, 0.0)?;
            return Ok(Seed {
                index: pair.index,
                point,
                amplitude: s,
                linear_lambda,
                beta,
                tangent_u: phi,
                tangent_lambda: -2.0 * beta * s,
            });
        }
        s *= 0.5;
    }
    Err(Error::NewtonFailure(format!("seed at j = {} failed after 5 amplitude halvings", pair.index)))
}

fn metric_norm(disc: &Discretization, v: &[f64], mu: f64) -> f64 {
    (disc.mass.form(v, v) + mu * mu).sqrt()
}

/// Follows the branch from `seed` for `params.steps` accepted steps.
pub fn continue_branch(disc: &Discretization, seed: &Seed, params: &ContinuationParams) -> Result<Branch> {
    params.validate()?;
    let (ds_min, ds_max) = (params.ds / 64.0, 8.0 * params.ds);
    let mut ds = params.ds;
    let nt = metric_norm(disc, &seed.tangent_u, seed.tangent_lambda);
    let mut tu: Vec<f64> = seed.tangent_u.iter().map(|v| v / nt).collect();
    let mut tl = seed.tangent_lambda / nt;
    let mut points = vec![seed.point.clone()];
    let mut easy = 0;
    let mut status = BranchStatus::MaxSteps;
    'steps: for _ in 0..params.steps {
        let cur = points.last().unwrap();
        let (u_new, l_new, iters) = loop {
            let up: Vec<f64> = cur.u.iter().zip(&tu).map(|(a, t)| a + ds * t).collect();
            let lp = cur.lambda + ds * tl;
            let row = disc.mass.matvec(&tu);
            let target = dot(&row, &up) + tl * lp;
            let con = Constraint { row, corner: tl, target };
            let attempt = correct(disc, up.clone(), lp, &con, params);
            let failure = match attempt {
                Ok((u, l, it)) => {
                    let du: Vec<f64> = u.iter().zip(&up).map(|(a, b)| a - b).collect();
                    if metric_norm(disc, &du, l - lp) <= ds {
                        break (u, l, it);
                    }
                    CorrectorFailure::NoConvergence
                }
                Err(e) => e,
            };
            easy = 0;
            ds *= 0.5;
            if ds < ds_min {
                if matches!(failure, CorrectorFailure::Singular) {
                    return Err(Error::BorderedSingular { lambda: cur.lambda });
                }
                status = BranchStatus::Diverged;
                break 'steps;
            }
        };
        let du: Vec<f64> = u_new.iter().zip(&cur.u).map(|(a, b)| a - b).collect();
        let dl = l_new - cur.lambda;
        let step = metric_norm(disc, &du, dl);
        if step == 0.0 {
            status = BranchStatus::Diverged;
            break;
        }
        tu = du.iter().map(|v| v / step).collect();
        tl = dl / step;
        let point = BranchPoint::new(disc, u_new, l_new, ds)?;
        let norm = point.l2c_norm;
        points.push(point);
        if norm < params.trivial_tol {
            status = BranchStatus::ReturnedToTrivial;
            break;
        }
        if norm > params.divergence_norm {
            status = BranchStatus::Diverged;
            break;
        }
        if iters <= 3 {
            easy += 1;
            if easy >= 3 {
                ds = (ds * 1.3).min(ds_max);
                easy = 0;
            }
        } else {
            easy = 0;
        }
    }
    Ok(Branch { seed_index: seed.index, points, status })
}

#[cfg(test)]
mod tests;
