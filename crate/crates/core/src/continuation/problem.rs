use crate::fem::{assemble, check_mesh, dot, scatter, Mesh, SymBandMatrix, Weight};
use crate::medium::MediumConfig;
use crate::Result;

/// Assembled P1 discretization of `-(σu')' - λcu - κu³` on a fixed mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub cfg: MediumConfig,
    pub mesh: Mesh,
    pub a_sigma: SymBandMatrix,
    pub a_abs: SymBandMatrix,
    pub mass: SymBandMatrix,
}

impl Discretization {
    pub fn new(cfg: &MediumConfig, mesh: Mesh) -> Result<Self> {
        check_mesh(cfg, &mesh)?;
        Ok(Self {
            cfg: *cfg,
            a_sigma: assemble(cfg, &mesh, Weight::Sigma)?,
            a_abs: assemble(cfg, &mesh, Weight::AbsSigma)?,
            mass: assemble(cfg, &mesh, Weight::C)?,
            mesh,
        })
    }

    pub fn dim(&self) -> usize {
        self.mesh.num_dofs()
    }

    /// `‖u‖_c = sqrt(uᵀCu)`.
    pub fn l2c_norm(&self, u: &[f64]) -> f64 {
        self.mass.form(u, u).sqrt()
    }

    /// `‖u‖_H = sqrt(uᵀA_{|σ|}u)`.
    pub fn h_norm(&self, u: &[f64]) -> f64 {
        self.a_abs.form(u, u).sqrt()
    }

    /// `⟨u, v⟩_c`.
    pub fn inner_c(&self, u: &[f64], v: &[f64]) -> f64 {
        self.mass.form(u, v)
    }

    /// Calls `f(element, h, a, b)` with the end values of `u` on each element.
    fn for_each_element(&self, u: &[f64], mut f: impl FnMut(usize, f64, f64, f64)) {
        let full = self.mesh.with_boundary(u);
        for (e, w) in self.mesh.nodes().windows(2).enumerate() {
            f(e, w[1] - w[0], full[e], full[e + 1]);
        }
    }

    /// `∫ κ u⁴`, exact for piecewise-linear `u`.
    pub fn quartic(&self, u: &[f64]) -> f64 {
        let kappa = self.cfg.kappa;
        let mut q = 0.0;
        self.for_each_element(u, |_, h, a, b| {
            q += kappa * h * (a.powi(4) + a.powi(3) * b + a * a * b * b + a * b.powi(3) + b.powi(4)) / 5.0;
        });
        q
    }

    /// Load vector `∫ κ u³ ψ_i`, exact for piecewise-linear `u`.
    pub fn cubic_load(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let kappa = self.cfg.kappa;
        let mut g = vec![0.0; n];
        self.for_each_element(u, |e, h, a, b| {
            let s = kappa * h / 20.0;
            let g0 = s * (4.0 * a.powi(3) + 3.0 * a * a * b + 2.0 * a * b * b + b.powi(3));
            let g1 = s * (a.powi(3) + 2.0 * a * a * b + 3.0 * a * b * b + 4.0 * b.powi(3));
            // node e has DOF e - 1
            if e >= 1 {
                g[e - 1] += g0;
            }
            if e < n {
                g[e] += g1;
            }
        });
        g
    }

    /// Discrete weak residual `F(u, λ) = A_σ u - λ C u - G(u)`.
    pub fn residual(&self, u: &[f64], lambda: f64) -> Vec<f64> {
        let au = self.a_sigma.matvec(u);
        let cu = self.mass.matvec(u);
        let g = self.cubic_load(u);
        au.iter().zip(&cu).zip(&g).map(|((a, c), g)| a - lambda * c - g).collect()
    }

    /// `∂F/∂u = A_σ - λ C - M(3κu²)`, the exact derivative of [`Self::residual`].
    pub fn jacobian(&self, u: &[f64], lambda: f64) -> SymBandMatrix {
        let full = self.mesh.with_boundary(u);
        let kappa = self.cfg.kappa;
        let nonlinear = scatter(&self.mesh, |e, h, _| {
            let (a, b) = (full[e], full[e + 1]);
            let s = kappa * h / 20.0;
            let off = s * (3.0 * a * a + 4.0 * a * b + 3.0 * b * b);
            [
                [s * (12.0 * a * a + 6.0 * a * b + 2.0 * b * b), off],
                [off, s * (2.0 * a * a + 6.0 * a * b + 12.0 * b * b)],
            ]
        });
        let lin = self.a_sigma.add_scaled(-lambda, &self.mass).expect("matching dimensions");
        lin.add_scaled(-1.0, &nonlinear).expect("matching dimensions")
    }

    /// `Ψ_λ(u) = ½uᵀA_σu - (λ/2)uᵀCu - ¼∫κu⁴`.
    pub fn energy(&self, u: &[f64], lambda: f64) -> f64 {
        0.5 * self.a_sigma.form(u, u) - 0.5 * lambda * self.mass.form(u, u) - 0.25 * self.quartic(u)
    }

    /// Euclidean norm of the residual.
    pub fn residual_norm(&self, u: &[f64], lambda: f64) -> f64 {
        let r = self.residual(u, lambda);
        dot(&r, &r).sqrt()
    }
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
