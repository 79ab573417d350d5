//! P1 finite elements on interface-graded meshes.

mod assemble;
mod band;
mod mesh;
mod tcoercive;

pub use assemble::{assemble, Weight};
pub use band::SymBandMatrix;
pub use mesh::{build_mesh, Mesh};
pub use tcoercive::{
    apply_t, coercivity_check, coercivity_sweep, k_grid, proof_constants, CoercivityProblem, CoercivityResult,
    Cutoff, ProofConstants, TOperator, COERCIVITY_THRESHOLD,
};

pub(crate) use assemble::{check_mesh, scatter};
pub(crate) use band::dot;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::MediumConfig;
    use crate::spectral::{eigenfunction_eval, solve_eigenvalue};

    #[test]
    fn interpolant_rayleigh_quotient_is_second_order() {
        let cfg = MediumConfig::default();
        let hs = [2f64.powi(-4), 2f64.powi(-5), 2f64.powi(-6), 2f64.powi(-7)];
        for j in [-3, 0, 1, 4] {
            let p = solve_eigenvalue(&cfg, j).unwrap();
            let errs: Vec<f64> = hs
                .iter()
                .map(|&h| {
                    let mesh = build_mesh(&cfg, h, 0.1, 2).unwrap();
                    let a = assemble(&cfg, &mesh, Weight::Sigma).unwrap();
                    let c = assemble(&cfg, &mesh, Weight::C).unwrap();
                    let u = mesh.interpolate(|x| eigenfunction_eval(&p, &cfg, x).unwrap());
                    (a.form(&u, &u) / c.form(&u, &u) - p.lambda).abs()
                })
                .collect();
            for w in errs.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!(order > 1.9, "j={j}: {errs:?}");
            }
        }
    }

    #[test]
    fn assembly_is_exactly_symmetric() {
        let cfg = MediumConfig::default();
        let mesh = build_mesh(&cfg, 0.3, 0.5, 2).unwrap();
        for w in [Weight::Sigma, Weight::AbsSigma, Weight::C] {
            let d = assemble(&cfg, &mesh, w).unwrap().to_dense();
            assert_eq!(d, d.transpose());
        }
    }
}
