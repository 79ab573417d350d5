//! Symmetric generalized eigenproblems `A v = λ C v` with `C` positive definite.
//!
//! Two paths are provided:
//!
//! * a dense solver (Cholesky reduction, Householder tridiagonalization,
//!   implicit Wilkinson-shifted QR) returning the full spectrum, and
//! * a spectrum-slicing solver for tridiagonal pencils that counts
//!   eigenvalues below a shift by Sylvester inertia, which makes large P1
//!   meshes affordable when only a window of the spectrum is needed.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SymmetricTridiagonal};

use crate::fem::{dot, SymBandMatrix};
use crate::spectral::EigenPair;
use crate::tridiag::TridiagLu;
use crate::{Error, Result};

/// Residual and orthonormality tolerance asserted after every full solve.
pub const VERIFY_TOL: f64 = 1e-10;

/// Iteration cap per matrix dimension for the implicit QR sweeps.
const ITER_PER_DIM: usize = 10_000;

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `C`-orthonormal eigenvectors stored as columns.
    pub eigenvectors: DMatrix<f64>,
}

fn check_dims(a: &SymBandMatrix, c: &SymBandMatrix) -> Result<()> {
    if a.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: c.dim() });
    }
    if a.dim() == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    Ok(())
}

/// `L⁻¹ A L⁻ᵀ` with `C = L Lᵀ`, symmetrized, together with `L`.
fn reduce(a: &SymBandMatrix, c: &SymBandMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_dims(a, c)?;
    let l = c.to_dense().cholesky().ok_or(Error::NotPositiveDefinite)?.unpack();
    let x = l.solve_lower_triangular(&a.to_dense()).ok_or(Error::NotPositiveDefinite)?;
    let s = l.solve_lower_triangular(&x.transpose()).ok_or(Error::NotPositiveDefinite)?;
    let s = (&s + s.transpose()) * 0.5;
    Ok((s, l))
}

/// Full spectrum and eigenvectors, verified against [`VERIFY_TOL`].
pub fn generalized_sym_eig(a: &SymBandMatrix, c: &SymBandMatrix) -> Result<EigResult> {
    let (s, l) = reduce(a, c)?;
    let n = s.nrows();
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, ITER_PER_DIM * n).ok_or(Error::NoConvergence {
        max_iter: ITER_PER_DIM * n,
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let w = DMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    let mut v = l.transpose().solve_upper_triangular(&w).ok_or(Error::NotPositiveDefinite)?;
    for mut col in v.column_iter_mut() {
        fix_sign(col.as_mut_slice());
    }
    let res = EigResult { eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(), eigenvectors: v };
    verify(a, c, &res, VERIFY_TOL)?;
    Ok(res)
}

/// Makes the largest-magnitude component positive; ties go to the first index.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Checks `‖Av − λCv‖ ≤ tol (‖A‖ + |λ|‖C‖) ‖v‖` and `VᵀCV = I` entrywise.
pub fn verify(a: &SymBandMatrix, c: &SymBandMatrix, res: &EigResult, tol: f64) -> Result<()> {
    let (na, nc) = (a.norm_inf(), c.norm_inf());
    let v = &res.eigenvectors;
    let mut cv = Vec::with_capacity(v.ncols());
    for (k, &lam) in res.eigenvalues.iter().enumerate() {
        let x: Vec<f64> = v.column(k).iter().copied().collect();
        let ax = a.matvec(&x);
        let cx = c.matvec(&x);
        let r = ax.iter().zip(&cx).map(|(p, q)| (p - lam * q).powi(2)).sum::<f64>().sqrt();
        let xn = dot(&x, &x).sqrt();
        if r > tol * (na + lam.abs() * nc) * xn {
            return Err(Error::ResidualCheck(format!("eigenpair {k} (λ = {lam}) residual {r:e}")));
        }
        cv.push(cx);
    }
    for i in 0..v.ncols() {
        for j in i..v.ncols() {
            let g: f64 = v.column(i).iter().zip(&cv[j]).map(|(p, q)| p * q).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - target).abs() > tol {
                return Err(Error::ResidualCheck(format!("C-orthonormality ({i}, {j}) off by {:e}", g - target)));
            }
        }
    }
    Ok(())
}

/// Eigenvalues only, ascending.
pub fn generalized_sym_eigenvalues(a: &SymBandMatrix, c: &SymBandMatrix) -> Result<Vec<f64>> {
    let (s, _) = reduce(a, c)?;
    dense_sym_eigenvalues(s)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &SymBandMatrix) -> Result<Vec<f64>> {
    if m.dim() == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    dense_sym_eigenvalues(m.to_dense())
}

fn dense_sym_eigenvalues(s: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = s.nrows();
    let (d, e) = SymmetricTridiagonal::new(s).unpack_tridiagonal();
    let mut d: Vec<f64> = d.iter().copied().collect();
    let mut e: Vec<f64> = e.iter().copied().collect();
    implicit_ql(&mut d, &mut e, ITER_PER_DIM * n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of the symmetric tridiagonal matrix `(d, e)` by implicit QL
/// with Wilkinson shifts; `d` is overwritten with the (unsorted) result.
fn implicit_ql(d: &mut [f64], e: &mut Vec<f64>, max_iter: usize) -> Result<()> {
    let n = d.len();
    e.resize(n, 0.0);
    let mut iters = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iters += 1;
            if iters > max_iter {
                return Err(Error::NoConvergence { max_iter });
            }
            // Wilkinson shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Tridiagonal pencil `(A, C)` with `C` positive definite.
#[derive(Debug, Clone)]
pub struct TridiagPencil {
    a_diag: Vec<f64>,
    a_off: Vec<f64>,
    c_diag: Vec<f64>,
    c_off: Vec<f64>,
    scale: f64,
}

impl TridiagPencil {
    pub fn new(a: &SymBandMatrix, c: &SymBandMatrix) -> Result<Self> {
        check_dims(a, c)?;
        let (_, a_diag, a_off) = a.tridiagonal()?;
        let (_, c_diag, c_off) = c.tridiagonal()?;
        let pencil = Self { scale: a.norm_inf() + c.norm_inf(), a_diag, a_off, c_diag, c_off };
        // C positive definite iff all LDLᵀ pivots are positive
        let mut d = pencil.c_diag[0];
        for i in 1..pencil.dim() {
            if d <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            d = pencil.c_diag[i] - pencil.c_off[i - 1].powi(2) / d;
        }
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(pencil)
    }

    pub fn dim(&self) -> usize {
        self.a_diag.len()
    }

    /// Number of eigenvalues strictly below `shift` (inertia of `A - shift·C`).
    pub fn count_below(&self, shift: f64) -> usize {
        let tiny = f64::EPSILON * self.scale * (1.0 + shift.abs());
        let mut count = 0;
        let mut d = 0.0;
        for i in 0..self.dim() {
            let mut di = self.a_diag[i] - shift * self.c_diag[i];
            if i > 0 {
                let b = self.a_off[i - 1] - shift * self.c_off[i - 1];
                di -= b * b / d;
            }
            if di == 0.0 {
                di = -tiny;
            }
            if di < 0.0 {
                count += 1;
            }
            d = di;
        }
        count
    }

    /// All eigenvalues in `[lo, hi)`, ascending, by bisection to relative precision `rel_tol`.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, rel_tol: f64) -> Vec<f64> {
        if !(hi > lo) {
            return vec![];
        }
        let (k_lo, k_hi) = (self.count_below(lo), self.count_below(hi));
        (k_lo..k_hi).map(|k| self.bisect_index(k, lo, hi, rel_tol)).collect()
    }

    /// The `k`-th eigenvalue (0-based), known to lie in `[lo, hi)`.
    fn bisect_index(&self, k: usize, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) || mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k`-th eigenvalue (0-based) in ascending order.
    pub fn eigenvalue(&self, k: usize, rel_tol: f64) -> Result<f64> {
        if k >= self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: k + 1 });
        }
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while self.count_below(lo) > k {
            lo *= 2.0;
        }
        while self.count_below(hi) <= k {
            hi *= 2.0;
        }
        Ok(self.bisect_index(k, lo, hi, rel_tol))
    }

    /// Eigenvalue closest to `target`.
    pub fn nearest_eigenvalue(&self, target: f64, rel_tol: f64) -> Result<f64> {
        let k = self.count_below(target);
        let above = (k < self.dim()).then(|| self.eigenvalue(k, rel_tol)).transpose()?;
        let below = k.checked_sub(1).map(|k| self.eigenvalue(k, rel_tol)).transpose()?;
        Ok(match (below, above) {
            (Some(b), Some(a)) => if target - b <= a - target { b } else { a },
            (Some(v), None) | (None, Some(v)) => v,
            (None, None) => unreachable!("pencil has positive dimension"),
        })
    }

    /// Eigenvector for an accurate eigenvalue by inverse iteration, `C`-normalized
    /// with the largest component positive.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        // perturb the shift slightly so the factorization stays regular
        let shift = lambda + 1e-13 * self.scale.max(lambda.abs());
        let diag: Vec<f64> = (0..n).map(|i| self.a_diag[i] - shift * self.c_diag[i]).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| self.a_off[i] - shift * self.c_off[i]).collect();
        let lu = TridiagLu::factor(&off, &diag, &off)?;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
        for _ in 0..4 {
            let cx = self.c_matvec(&x);
            x = lu.solve(&cx);
            let nrm = dot(&x, &self.c_matvec(&x)).sqrt();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::NoConvergence { max_iter: 4 });
            }
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        fix_sign(&mut x);
        Ok(x)
    }

    fn c_matvec(&self, x: &[f64]) -> Vec<f64> {
        crate::tridiag::tridiag_matvec(&self.c_off, &self.c_diag, &self.c_off, x)
    }
}

/// One analytic eigenvalue paired with its discrete partner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub index: i64,
    pub analytic: f64,
    pub discrete: f64,
    /// Position of the partner in the ascending discrete spectrum.
    pub discrete_pos: usize,
    /// `|discrete - analytic| / |analytic|`, absolute when `analytic = 0`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Matching {
    pub matches: Vec<Match>,
    /// Discrete eigenvalues inside the window without analytic partner.
    pub spurious: usize,
}

impl Matching {
    pub fn max_rel_error(&self) -> f64 {
        self.matches.iter().map(|m| m.rel_error).fold(0.0, f64::max)
    }
}

/// Injective nearest-neighbour matching of the analytic eigenvalues with
/// `|λ| ≤ window` to the ascending discrete spectrum `discrete`.
///
/// A partner must lie closer than half the gap to the neighbouring analytic
/// eigenvalues; otherwise the pair is reported as a matching failure.
pub fn match_to_analytic(discrete: &[f64], pairs: &[EigenPair], window: f64) -> Result<Matching> {
    let mut analytic: Vec<&EigenPair> = pairs.iter().collect();
    analytic.sort_by(|p, q| p.lambda.total_cmp(&q.lambda));
    let mut used = vec![false; discrete.len()];
    let mut matches = vec![];
    for (pos, p) in analytic.iter().enumerate() {
        if p.lambda.abs() > window {
            continue;
        }
        let below = pos.checked_sub(1).map(|i| p.lambda - analytic[i].lambda);
        let above = analytic.get(pos + 1).map(|q| q.lambda - p.lambda);
        let tol = match (below, above) {
            (Some(b), Some(a)) => 0.5 * a.min(b),
            (Some(g), None) | (None, Some(g)) => 0.5 * g,
            (None, None) => f64::INFINITY,
        };
        let nearest = discrete.partition_point(|&d| d < p.lambda);
        let candidate = [nearest.checked_sub(1), (nearest < discrete.len()).then_some(nearest)]
            .into_iter()
            .flatten()
            .min_by(|&i, &j| (discrete[i] - p.lambda).abs().total_cmp(&(discrete[j] - p.lambda).abs()));
        let Some(k) = candidate.filter(|&k| (discrete[k] - p.lambda).abs() < tol && !used[k]) else {
            return Err(Error::MatchFailure { index: p.index, lambda: p.lambda });
        };
        used[k] = true;
        let err = (discrete[k] - p.lambda).abs();
        matches.push(Match {
            index: p.index,
            analytic: p.lambda,
            discrete: discrete[k],
            discrete_pos: k,
            rel_error: if p.lambda == 0.0 { err } else { err / p.lambda.abs() },
        });
    }
    let spurious = discrete
        .iter()
        .zip(&used)
        .filter(|(d, u)| d.abs() <= window && !**u)
        .count();
    Ok(Matching { matches, spurious })
}

/// Dense column vector helper for callers working with nalgebra.
pub fn column(res: &EigResult, k: usize) -> DVector<f64> {
    res.eigenvectors.column(k).into_owned()
}
