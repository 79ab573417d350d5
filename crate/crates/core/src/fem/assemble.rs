use super::band::SymBandMatrix;
use super::mesh::Mesh;
use crate::medium::MediumConfig;
use crate::{Error, Result};

/// Coefficient of the assembled bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `∫ σ u' v'`, indefinite.
    Sigma,
    /// `∫ |σ| u' v'`, the energy inner product.
    AbsSigma,
    /// `∫ c u v`.
    C,
}

/// Element-wise loop over `(element, h, x_mid)` scattering a 2×2 block into the
/// interior DOFs. Boundary rows and columns are dropped.
pub(crate) fn scatter(mesh: &Mesh, mut block: impl FnMut(usize, f64, f64) -> [[f64; 2]; 2]) -> SymBandMatrix {
    let n = mesh.num_dofs();
    let last = mesh.nodes().len() - 1;
    let mut m = SymBandMatrix::zeros(n, 1);
    for (e, w) in mesh.nodes().windows(2).enumerate() {
        let k = block(e, w[1] - w[0], 0.5 * (w[0] + w[1]));
        for (a, ia) in [e, e + 1].into_iter().enumerate() {
            for (b, ib) in [e, e + 1].into_iter().enumerate() {
                if ia == 0 || ib == 0 || ia == last || ib == last || ib < ia {
                    continue;
                }
                m.add(ia - 1, ib - 1, k[a][b]);
            }
        }
    }
    m
}

pub(crate) fn check_mesh(cfg: &MediumConfig, mesh: &Mesh) -> Result<()> {
    cfg.validate()?;
    if mesh.a_minus() != cfg.a_minus || mesh.a_plus() != cfg.a_plus {
        return Err(Error::InvalidConfig(format!(
            "mesh covers [{}, {}] but the domain is [{}, {}]",
            mesh.a_minus(),
            mesh.a_plus(),
            cfg.a_minus,
            cfg.a_plus
        )));
    }
    Ok(())
}

/// P1 stiffness or mass matrix with exact element integrals and Dirichlet
/// elimination. Since `0` is a node every element sees a constant coefficient.
pub fn assemble(cfg: &MediumConfig, mesh: &Mesh, weight: Weight) -> Result<SymBandMatrix> {
    check_mesh(cfg, mesh)?;
    Ok(scatter(mesh, |_, h, xm| match weight {
        Weight::Sigma | Weight::AbsSigma => {
            let s = cfg.sigma_at(xm);
            let s = if weight == Weight::AbsSigma { s.abs() } else { s };
            let k = s / h;
            [[k, -k], [-k, k]]
        }
        Weight::C => {
            let m = cfg.c_at(xm) * h / 6.0;
            [[2.0 * m, m], [m, 2.0 * m]]
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::build_mesh;
    use crate::quadrature::integrate_split;
    use crate::spectral::{solve_eigenvalue, eigenfunction_eval};

    fn setup() -> (MediumConfig, Mesh) {
        let cfg = MediumConfig::default();
        let mesh = build_mesh(&cfg, 0.25, 0.3, 2).unwrap();
        (cfg, mesh)
    }

    #[test]
    fn sigma_and_abs_sigma_rows() {
        let (cfg, mesh) = setup();
        let s = assemble(&cfg, &mesh, Weight::Sigma).unwrap();
        let a = assemble(&cfg, &mesh, Weight::AbsSigma).unwrap();
        let iface = mesh.interface_index() - 1;
        for i in 0..mesh.num_dofs() {
            for j in i.saturating_sub(1)..(i + 2).min(mesh.num_dofs()) {
                if i > iface && j > iface {
                    assert_eq!(s.get(i, j), a.get(i, j));
                } else if i < iface && j < iface {
                    assert_eq!(s.get(i, j), -a.get(i, j));
                }
            }
        }
        // interface row mixes both signs
        assert!(s.get(iface, iface).abs() < a.get(iface, iface));
    }

    #[test]
    fn mass_row_sums() {
        let (cfg, mesh) = setup();
        let c = MediumConfig { c_minus: 3.0, ..cfg };
        let m = assemble(&c, &mesh, Weight::C).unwrap();
        let ones = vec![1.0; mesh.num_dofs()];
        let sums = m.matvec(&ones);
        let x = mesh.nodes();
        for i in 2..mesh.num_dofs() - 2 {
            // ∫ c ψ_i = c_left h_left / 2 + c_right h_right / 2
            let node = i + 1;
            let left = c.c_at(0.5 * (x[node - 1] + x[node])) * (x[node] - x[node - 1]);
            let right = c.c_at(0.5 * (x[node] + x[node + 1])) * (x[node + 1] - x[node]);
            assert!((sums[i] - 0.5 * (left + right)).abs() < 1e-14);
        }
    }

    #[test]
    fn positive_definite_by_cholesky() {
        let (cfg, mesh) = setup();
        for w in [Weight::AbsSigma, Weight::C] {
            let m = assemble(&cfg, &mesh, w).unwrap().to_dense();
            assert!(m.cholesky().is_some());
        }
        let s = assemble(&cfg, &mesh, Weight::Sigma).unwrap().to_dense();
        assert!(s.cholesky().is_none());
    }

    #[test]
    fn tent_rayleigh_quotient() {
        // the interpolated tent is exact in P1, so the discrete quotient equals
        // the continuous one, which bounds the first |σ|-Dirichlet eigenvalue
        let (cfg, mesh) = setup();
        let tent = |x: f64| if x < 0.0 { 1.0 - x / cfg.a_minus } else { 1.0 - x / cfg.a_plus };
        let u = mesh.interpolate(tent);
        let a = assemble(&cfg, &mesh, Weight::AbsSigma).unwrap();
        let c = assemble(&cfg, &mesh, Weight::C).unwrap();
        let rq = a.form(&u, &u) / c.form(&u, &u);
        let num = cfg.sigma_minus.abs() / cfg.a_minus.abs() + cfg.sigma_plus / cfg.a_plus;
        let den = integrate_split(|x| cfg.c_at(x) * tent(x).powi(2), cfg.a_minus, cfg.a_plus, &[0.0], 1e-14, 1e-14).value;
        assert!((rq - num / den).abs() < 1e-12);
        let dense = assemble(&cfg, &mesh, Weight::AbsSigma).unwrap().to_dense();
        let mass = c.to_dense();
        let l = mass.cholesky().unwrap();
        let linv = l.l().try_inverse().unwrap();
        let std = &linv * dense * linv.transpose();
        let min = nalgebra::SymmetricEigen::new(std).eigenvalues.min();
        assert!(min <= rq);
    }

    #[test]
    fn interpolated_eigenfunction_rayleigh_quotient() {
        let cfg = MediumConfig::default();
        let mesh = build_mesh(&cfg, 2f64.powi(-6), 0.1, 3).unwrap();
        let a = assemble(&cfg, &mesh, Weight::Sigma).unwrap();
        let c = assemble(&cfg, &mesh, Weight::C).unwrap();
        for j in [-2, 0, 3] {
            let p = solve_eigenvalue(&cfg, j).unwrap();
            let u = mesh.interpolate(|x| eigenfunction_eval(&p, &cfg, x).unwrap());
            let rq = a.form(&u, &u) / c.form(&u, &u);
            assert!((rq - p.lambda).abs() < 1e-2 * p.lambda.abs().max(0.1), "j={j}: {rq} vs {}", p.lambda);
        }
    }

    #[test]
    fn rejects_foreign_mesh() {
        let (cfg, mesh) = setup();
        let other = MediumConfig { a_plus: 4.0, ..cfg };
        assert!(assemble(&other, &mesh, Weight::C).is_err());
    }
}
