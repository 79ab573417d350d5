use super::*;
use crate::fem::build_mesh;
use crate::medium::MediumConfig;
use crate::spectral::solve_eigenvalue;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn disc(cfg: MediumConfig, h: f64) -> Discretization {
    let mesh = build_mesh(&cfg, h, 0.1, 2).unwrap();
    Discretization::new(&cfg, mesh).unwrap()
}

fn random_state(d: &Discretization, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn trivial_solution_family() {
    let d = disc(MediumConfig::default(), 0.25);
    let zero = vec![0.0; d.dim()];
    for lambda in [-3.0, 0.0, 7.5] {
        assert!(d.residual(&zero, lambda).iter().all(|v| *v == 0.0));
        assert_eq!(d.energy(&zero, lambda), 0.0);
    }
    let j = d.jacobian(&zero, 2.0);
    let lin = d.a_sigma.add_scaled(-2.0, &d.mass).unwrap();
    assert_eq!(j, lin);
}

#[test]
fn linear_eigenpair_consistency() {
    let base = MediumConfig { kappa: 0.0, ..MediumConfig::default() };
    for j in [-2, 0, 3] {
        let p = solve_eigenvalue(&base, j).unwrap();
        let mut prev = f64::INFINITY;
        for h in [2f64.powi(-4), 2f64.powi(-5), 2f64.powi(-6)] {
            let d = disc(base, h);
            let u = interpolated_eigenfunction(&d, &p).unwrap();
            let r = norm2(&d.residual(&u, p.lambda)) / norm2(&d.a_sigma.matvec(&u));
            let e = d.energy(&u, p.lambda).abs();
            assert!(r < prev, "j={j}");
            assert!(e < 10.0 * h * h * p.lambda.abs().max(1.0), "j={j}, h={h}: {e}");
            prev = r;
        }
    }
}

#[test]
fn quartic_matches_nodal_quadrature() {
    let d = disc(MediumConfig { kappa: 2.5, ..MediumConfig::default() }, 0.125);
    let u = d.mesh.interpolate(|x| (x - d.cfg.a_minus) * (d.cfg.a_plus - x) / 25.0);
    let full = d.mesh.with_boundary(&u);
    // Simpson-type check with 4 sub-points per element is exact for quartics
    let mut q = 0.0;
    for (e, w) in d.mesh.nodes().windows(2).enumerate() {
        let h = w[1] - w[0];
        let f = |t: f64| ((1.0 - t) * full[e] + t * full[e + 1]).powi(4);
        q += h * (7.0 * f(0.0) + 32.0 * f(0.25) + 12.0 * f(0.5) + 32.0 * f(0.75) + 7.0 * f(1.0)) / 90.0;
    }
    assert!((d.quartic(&u) - 2.5 * q).abs() < 1e-13 * q);
    // ⟨G(u), u⟩ = ∫ κ u⁴
    assert!((dot(&d.cubic_load(&u), &u) - d.quartic(&u)).abs() < 1e-13 * q);
}

#[test]
fn energy_gradient_is_residual() {
    let d = disc(MediumConfig::default(), 0.25);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let u = random_state(&d, &mut rng);
        let v = random_state(&d, &mut rng);
        let lambda = rng.gen_range(-2.0..2.0);
        let exact = dot(&d.residual(&u, lambda), &v);
        let errs: Vec<f64> = [1e-3, 5e-4]
            .iter()
            .map(|&eps| {
                let up: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
                let um: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - eps * b).collect();
                ((d.energy(&up, lambda) - d.energy(&um, lambda)) / (2.0 * eps) - exact).abs()
            })
            .collect();
        let rate = (errs[0] / errs[1]).log2();
        assert!((rate - 2.0).abs() < 0.2, "rate {rate}");
    }
}

#[test]
fn jacobian_columns_by_differences() {
    let d = disc(MediumConfig::default(), 0.25);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = random_state(&d, &mut rng);
    let lambda = 0.7;
    let jac = d.jacobian(&u, lambda);
    let f0 = d.residual(&u, lambda);
    for i in [0, d.dim() / 3, d.mesh.interface_index() - 1, d.dim() - 1] {
        let ei: Vec<f64> = (0..d.dim()).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
        let col = jac.matvec(&ei);
        let errs: Vec<f64> = [1e-4, 5e-5]
            .iter()
            .map(|&eps| {
                let mut up = u.clone();
                up[i] += eps;
                let f1 = d.residual(&up, lambda);
                let diff: Vec<f64> = (0..d.dim()).map(|k| (f1[k] - f0[k]) / eps - col[k]).collect();
                norm2(&diff)
            })
            .collect();
        let rate = (errs[0] / errs[1]).log2();
        assert!((rate - 1.0).abs() < 0.1, "column {i}: rate {rate}");
    }
    let dense = jac.to_dense();
    assert_eq!(dense, dense.transpose());
}

#[test]
fn seed_bends_left_for_focusing_nonlinearity() {
    let cfg = MediumConfig::symmetric(5.0, -1.005);
    let d = disc(cfg, 2f64.powi(-5));
    let params = ContinuationParams::default();
    for j in [-2, 0, 5] {
        let p = solve_eigenvalue(&cfg, j).unwrap();
        let seed = branch_seed(&d, &p, &params).unwrap();
        assert!(seed.point.lambda < seed.linear_lambda, "j={j}");
        assert!((seed.linear_lambda - p.lambda).abs() < 2e-2 * p.lambda.abs().max(1.0), "j={j}");
        let bend = seed.linear_lambda - seed.point.lambda;
        let predicted = seed.beta * seed.amplitude.powi(2);
        assert!((bend - predicted).abs() < 0.05 * predicted, "j={j}: {bend} vs {predicted}");
        assert!(seed.beta > 0.0);
        assert!((d.inner_c(&seed.point.u, &seed.tangent_u) - seed.amplitude).abs() < 1e-10);
        assert!(seed.point.verify(&d, 1e-9));
    }
}

#[test]
fn linear_seed_is_scaled_eigenfunction() {
    let cfg = MediumConfig { kappa: 0.0, ..MediumConfig::default() };
    let d = disc(cfg, 2f64.powi(-5));
    let p = solve_eigenvalue(&cfg, 1).unwrap();
    let seed = branch_seed(&d, &p, &ContinuationParams::default()).unwrap();
    assert_eq!(seed.beta, 0.0);
    assert!((seed.point.lambda - p.lambda).abs() < 1e-2 * p.lambda);
    // the corrected seed is s times the discrete eigenvector, close to the interpolant
    let phi = interpolated_eigenfunction(&d, &p).unwrap();
    let diff: Vec<f64> = seed.point.u.iter().zip(&phi).map(|(a, b)| a - seed.amplitude * b).collect();
    assert!(d.l2c_norm(&diff) < 1e-2 * seed.amplitude);
}

fn short_branch(j: i64) -> (Discretization, Branch) {
    let cfg = MediumConfig::symmetric(5.0, -1.005);
    let d = disc(cfg, 2f64.powi(-5));
    let params = ContinuationParams { steps: 25, ..ContinuationParams::default() };
    let p = solve_eigenvalue(&cfg, j).unwrap();
    let seed = branch_seed(&d, &p, &params).unwrap();
    let branch = continue_branch(&d, &seed, &params).unwrap();
    (d, branch)
}

#[test]
fn branch_invariants() {
    for j in [-2, 0, 2] {
        let (d, b) = short_branch(j);
        assert_eq!(b.status, BranchStatus::MaxSteps);
        assert_eq!(b.points.len(), 26);
        let (zm, zp) = if j < 0 { (j.unsigned_abs() as usize, 0) } else { (0, j as usize) };
        for (k, p) in b.points.iter().enumerate() {
            assert_eq!((p.zeros_minus, p.zeros_plus), (zm, zp), "j={j}, step {k}");
            assert!(p.verify(&d, 1e-9));
            // Nehari identity: Ψ = ¼∫κu⁴ > 0 at solutions
            let q = d.quartic(&p.u);
            assert!((p.energy - 0.25 * q).abs() < 1e-7 * (1.0 + q), "step {k}");
            assert!(p.energy > 0.0);
        }
        for w in b.points.windows(2) {
            let du: Vec<f64> = w[1].u.iter().zip(&w[0].u).map(|(a, b)| a - b).collect();
            let dist = metric_norm(&d, &du, w[1].lambda - w[0].lambda);
            assert!(dist <= std::f64::consts::SQRT_2 * w[1].ds * (1.0 + 1e-9));
            // leftward bending with growing amplitude
            assert!(w[1].lambda < w[0].lambda);
            assert!(w[1].l2c_norm > w[0].l2c_norm);
        }
    }
}

#[test]
fn branch_is_deterministic() {
    let (_, a) = short_branch(0);
    let (_, b) = short_branch(0);
    assert_eq!(a, b);
}

#[test]
fn csv_and_sidecar_roundtrip() {
    let (d, b) = short_branch(-2);
    let mut buf = vec![];
    write_branch_csv(&mut buf, "jm2", &b).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let rows = read_branch_csv(&text).unwrap();
    assert_eq!(rows.len(), b.points.len());
    for (k, (r, p)) in rows.iter().zip(&b.points).enumerate() {
        assert_eq!(r.step, k);
        assert_eq!(r.lambda, p.lambda);
        assert_eq!(r.energy, p.energy);
        assert_eq!(r.plateau_value, p.plateau);
        let u = vector_from_text(&vector_to_text(&p.u)).unwrap();
        assert_eq!(u, p.u);
        assert!(d.residual_norm(&u, r.lambda) <= 1e-9 * (1.0 + norm2(&u)));
    }
    assert!(read_branch_csv("wrong,header\n").is_err());
    assert_eq!(sidecar_name("j5", 7), "j5_step0007.vec");
}
