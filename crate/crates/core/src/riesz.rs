//! Conditioning of the eigenfunction family in the energy inner product.
//!
//! The normalized Gram matrix `M_Λ` over all indices with `|λ_j| ≤ Λ` has
//! entries `⟨φ_i, φ_j⟩_H / sqrt(w_i w_j)`. Extreme eigenvalues that stay
//! bounded away from `0` and `∞` as `Λ` grows are numerical evidence that the
//! family is a Riesz basis of the energy space.

use std::io::Write;

use crate::eig::sym_eigenvalues;
use crate::fem::SymBandMatrix;
use crate::medium::MediumConfig;
use crate::spectral::{eigenvalue_bracket, h_inner, solve_eigenvalue, EigenPair};
use crate::{Error, Result};

pub const SWEEP_CSV_HEADER: &str = "Lambda,dim,min_eig,max_eig,sigma_minus";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// `w_j = 1 + |λ_j|`.
    OnePlusAbs,
    /// `w_j = |λ_j - λ_ref|`, or `1` when `λ_j = λ_ref`.
    Shifted { lambda_ref: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramConfig {
    pub weight_mode: WeightMode,
}

impl Default for GramConfig {
    fn default() -> Self {
        Self { weight_mode: WeightMode::OnePlusAbs }
    }
}

impl GramConfig {
    pub fn weight(&self, lambda: f64) -> f64 {
        match self.weight_mode {
            WeightMode::OnePlusAbs => 1.0 + lambda.abs(),
            WeightMode::Shifted { lambda_ref } => {
                let w = (lambda - lambda_ref).abs();
                if w == 0.0 {
                    1.0
                } else {
                    w
                }
            }
        }
    }
}

/// All eigenpairs with `|λ_j| ≤ Λ`, ordered by index.
pub fn eigenpairs_within(cfg: &MediumConfig, big_lambda: f64) -> Result<Vec<EigenPair>> {
    if !(big_lambda >= 1.0) {
        return Err(Error::InvalidConfig(format!("Λ must be ≥ 1, got {big_lambda}")));
    }
    let mut out = vec![];
    let mut j = -1;
    loop {
        if eigenvalue_bracket(cfg, j)?.1.abs() > big_lambda {
            break;
        }
        j -= 1;
    }
    // j is now the first index whose bracket starts beyond -Λ; solve upward
    j += 1;
    loop {
        let (lo, _) = eigenvalue_bracket(cfg, j)?;
        if j > 0 && lo > big_lambda {
            break;
        }
        let p = solve_eigenvalue(cfg, j)?;
        if p.lambda.abs() <= big_lambda {
            out.push(p);
        }
        j += 1;
    }
    Ok(out)
}

/// Dense normalized Gram matrix over `pairs`, in the given order.
pub fn gram_from_pairs(cfg: &MediumConfig, gcfg: &GramConfig, pairs: &[EigenPair]) -> Result<SymBandMatrix> {
    let n = pairs.len();
    let scale: Vec<f64> = pairs.iter().map(|p| gcfg.weight(p.lambda).sqrt().recip()).collect();
    let mut m = SymBandMatrix::zeros(n, n.saturating_sub(1));
    for i in 0..n {
        for j in i..n {
            m.set(i, j, h_inner(cfg, &pairs[i], &pairs[j])? * (scale[i] * scale[j]));
        }
    }
    Ok(m)
}

/// `M_Λ` together with the eigenpairs indexing its rows.
pub fn gram_matrix(cfg: &MediumConfig, gcfg: &GramConfig, big_lambda: f64) -> Result<(Vec<EigenPair>, SymBandMatrix)> {
    let pairs = eigenpairs_within(cfg, big_lambda)?;
    let m = gram_from_pairs(cfg, gcfg, &pairs)?;
    Ok((pairs, m))
}

pub fn extreme_eigs(m: &SymBandMatrix) -> Result<(f64, f64)> {
    let e = sym_eigenvalues(m)?;
    Ok((e[0], e[e.len() - 1]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub big_lambda: f64,
    pub dim: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub sigma_minus: f64,
}

/// `Λ = start, 2·start, 4·start, …` while the matrix dimension stays `≤ dim_cap`.
pub fn sweep(cfg: &MediumConfig, gcfg: &GramConfig, start: f64, dim_cap: usize) -> Result<Vec<SweepRow>> {
    let mut rows = vec![];
    let mut big = start;
    loop {
        let pairs = eigenpairs_within(cfg, big)?;
        if pairs.len() > dim_cap {
            break;
        }
        let m = gram_from_pairs(cfg, gcfg, &pairs)?;
        let (min_eig, max_eig) = extreme_eigs(&m)?;
        rows.push(SweepRow { big_lambda: big, dim: pairs.len(), min_eig, max_eig, sigma_minus: cfg.sigma_minus });
        big *= 2.0;
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{:e},{},{:e},{:e},{:e}", r.big_lambda, r.dim, r.min_eig, r.max_eig, r.sigma_minus)?;
    }
    Ok(())
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(SWEEP_CSV_HEADER) {
        return Err(Error::Parse("unexpected Riesz CSV header".into()));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            if c.len() != 5 {
                return Err(Error::Parse(format!("expected 5 columns in {l:?}")));
            }
            Ok(SweepRow {
                big_lambda: num(c[0])?,
                dim: c[1].trim().parse().map_err(|e| Error::Parse(format!("{:?}: {e}", c[1])))?,
                min_eig: num(c[2])?,
                max_eig: num(c[3])?,
                sigma_minus: num(c[4])?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertReport {
    /// `max_{i≠j} |⟨φ_i,φ_j⟩_H| (1+|i|+|j|) / sqrt((1+|λ_i|)(1+|λ_j|))`.
    pub g_fit: f64,
    pub worst_pair: (i64, i64),
    /// `max_j ‖φ_j‖_H² / (1+|λ_j|)`.
    pub f_fit: f64,
}

/// Fitted constants of the off-diagonal decay bound over `|i|, |j| ≤ J`.
pub fn hilbert_bound_report(cfg: &MediumConfig, big_j: usize) -> Result<HilbertReport> {
    if big_j < 2 {
        return Err(Error::InvalidConfig(format!("J must be ≥ 2, got {big_j}")));
    }
    let jj = big_j as i64;
    let pairs: Vec<EigenPair> = (-jj..=jj).map(|j| solve_eigenvalue(cfg, j)).collect::<Result<_>>()?;
    let mut g_fit = 0.0;
    let mut worst_pair = (0, 0);
    let mut f_fit = 0.0f64;
    for (a, pi) in pairs.iter().enumerate() {
        let wi = 1.0 + pi.lambda.abs();
        f_fit = f_fit.max(h_inner(cfg, pi, pi)? / wi);
        for pj in &pairs[a + 1..] {
            let wj = 1.0 + pj.lambda.abs();
            let ratio = h_inner(cfg, pi, pj)?.abs() * (1 + pi.index.abs() + pj.index.abs()) as f64 / (wi * wj).sqrt();
            if ratio > g_fit {
                g_fit = ratio;
                worst_pair = (pi.index, pj.index);
            }
        }
    }
    Ok(HilbertReport { g_fit, worst_pair, f_fit })
}

impl HilbertReport {
    /// Constant `D = F + 2π G` of the one-sided bound
    /// `Σ c_i c_j ⟨φ_i,φ_j⟩_H ≤ D Σ c_i² (1+|λ_i|)`.
    ///
    /// Splitting indices by sign reduces the off-diagonal part to Hilbert
    /// matrices `1/(1+m+n)` of norm `π`, hence the factor `2π`.
    pub fn one_sided_constant(&self) -> f64 {
        self.f_fit + 2.0 * std::f64::consts::PI * self.g_fit
    }
}

/// Ratio `Σ c_i c_j ⟨φ_i,φ_j⟩_H / Σ c_i² (1+|λ_i|)` for coefficients on `pairs`.
pub fn quadratic_form_ratio(cfg: &MediumConfig, pairs: &[EigenPair], c: &[f64]) -> Result<f64> {
    if c.len() != pairs.len() {
        return Err(Error::DimensionMismatch { expected: pairs.len(), found: c.len() });
    }
    let mut num = 0.0;
    for (a, pa) in pairs.iter().enumerate() {
        for (b, pb) in pairs.iter().enumerate() {
            num += c[a] * c[b] * h_inner(cfg, pa, pb)?;
        }
    }
    let den: f64 = pairs.iter().zip(c).map(|(p, v)| v * v * (1.0 + p.lambda.abs())).sum();
    Ok(num / den)
}
