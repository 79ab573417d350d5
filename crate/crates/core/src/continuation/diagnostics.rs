use crate::fem::Mesh;
use crate::{Error, Result};

/// Nodal values whose magnitude is below this fraction of `‖u‖_∞` count as zero.
pub const ZERO_BAND: f64 = 1e-8;

/// Plateau acceptance: sample standard deviation below this fraction of the mean magnitude.
pub const PLATEAU_SPREAD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroCount {
    pub zeros_minus: usize,
    pub zeros_plus: usize,
    /// No sign change of the discrete derivative on `[a₋, 0]`.
    pub monotone_minus: bool,
    /// No sign change of the discrete derivative on `[0, a₊]`.
    pub monotone_plus: bool,
}

fn sign_changes(values: &[f64], band: f64) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() <= band {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// Sign changes of the nodal values strictly inside each subdomain and
/// monotonicity of the piecewise-linear function on each closed subdomain.
pub fn count_interior_zeros(mesh: &Mesh, u: &[f64]) -> Result<ZeroCount> {
    let full = mesh.with_boundary(u);
    let sup = full.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup == 0.0 {
        return Err(Error::ZeroVector);
    }
    let band = ZERO_BAND * sup;
    let iface = mesh.interface_index();
    let last = full.len() - 1;
    // the interface value closes the Ω₋ sequence and opens the Ω₊ one
    let zeros_minus = sign_changes(&full[1..=iface], band);
    let zeros_plus = sign_changes(&full[iface..last], band);
    let slopes: Vec<f64> = mesh
        .nodes()
        .windows(2)
        .zip(full.windows(2))
        .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
        .collect();
    let slope_band = ZERO_BAND * slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    Ok(ZeroCount {
        zeros_minus,
        zeros_plus,
        monotone_minus: sign_changes(&slopes[..iface], slope_band) == 0,
        monotone_plus: sign_changes(&slopes[iface..], slope_band) == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    /// Mean of `u` over the probe window.
    pub value: f64,
    /// `| |value| - √(-λ) | / √(-λ)`.
    pub deviation: f64,
}

/// Detects a near-constant profile over the middle half of `Ω₋`, where
/// solutions with `λ < 0` approach `±√(-λ)`.
pub fn detect_plateau(mesh: &Mesh, u: &[f64], lambda: f64) -> Option<Plateau> {
    if !(lambda < 0.0) {
        return None;
    }
    let (a, len) = (mesh.a_minus(), mesh.a_minus().abs());
    let (lo, hi) = (a + 0.25 * len, a + 0.75 * len);
    let full = mesh.with_boundary(u);
    let samples: Vec<f64> = mesh
        .nodes()
        .iter()
        .zip(&full)
        .filter(|(x, _)| **x >= lo && **x <= hi)
        .map(|(_, v)| *v)
        .collect();
    if samples.len() < 2 {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if mean == 0.0 || var.sqrt() >= PLATEAU_SPREAD * mean.abs() {
        return None;
    }
    let target = (-lambda).sqrt();
    Some(Plateau { value: mean, deviation: (mean.abs() - target).abs() / target })
}

/// Full width at half maximum of each sign-constant lobe of `u` on `Ω₋`,
/// ordered from `a₋` towards the interface.
pub fn extremum_half_widths(mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    let full = mesh.with_boundary(u);
    let nodes = mesh.nodes();
    let iface = mesh.interface_index();
    let sup = full.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup == 0.0 {
        return vec![];
    }
    let band = ZERO_BAND * sup;
    let sign = |v: f64| if v.abs() <= band { 0.0 } else { v.signum() };
    let mut widths = vec![];
    let mut start = 0;
    while start <= iface {
        let s = sign(full[start]);
        let mut end = start;
        while end < iface && sign(full[end + 1]) == s {
            end += 1;
        }
        if s != 0.0 {
            let peak = full[start..=end].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let half = 0.5 * peak;
            let mut w = 0.0;
            for i in start..end {
                let (p, q) = (full[i].abs(), full[i + 1].abs());
                let h = nodes[i + 1] - nodes[i];
                w += if p >= half && q >= half {
                    h
                } else if p < half && q < half {
                    0.0
                } else {
                    h * (p.max(q) - half) / (p - q).abs()
                };
            }
            widths.push(w);
        }
        start = end + 1;
    }
    widths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::build_mesh;
    use crate::medium::MediumConfig;
    use crate::spectral::{eigenfunction_eval, solve_eigenvalue};

    fn setup() -> (MediumConfig, Mesh) {
        let cfg = MediumConfig::default();
        (cfg, build_mesh(&cfg, 2f64.powi(-6), 0.1, 2).unwrap())
    }

    fn interp(cfg: &MediumConfig, mesh: &Mesh, j: i64) -> Vec<f64> {
        let p = solve_eigenvalue(cfg, j).unwrap();
        mesh.interpolate(|x| eigenfunction_eval(&p, cfg, x).unwrap())
    }

    #[test]
    fn eigenfunction_patterns() {
        let (cfg, mesh) = setup();
        let z3 = count_interior_zeros(&mesh, &interp(&cfg, &mesh, 3)).unwrap();
        assert_eq!((z3.zeros_minus, z3.zeros_plus, z3.monotone_minus), (0, 3, true));
        assert!(!z3.monotone_plus);
        let z0 = count_interior_zeros(&mesh, &interp(&cfg, &mesh, 0)).unwrap();
        assert_eq!(z0, ZeroCount { zeros_minus: 0, zeros_plus: 0, monotone_minus: true, monotone_plus: true });
        let zm = count_interior_zeros(&mesh, &interp(&cfg, &mesh, -4)).unwrap();
        assert_eq!((zm.zeros_minus, zm.zeros_plus, zm.monotone_plus), (4, 0, true));
    }

    #[test]
    fn sign_flip_invariance() {
        let (cfg, mesh) = setup();
        for j in [-2, 0, 5] {
            let u = interp(&cfg, &mesh, j);
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            assert_eq!(count_interior_zeros(&mesh, &u).unwrap(), count_interior_zeros(&mesh, &neg).unwrap());
            assert_eq!(extremum_half_widths(&mesh, &u), extremum_half_widths(&mesh, &neg));
        }
    }

    #[test]
    fn zero_vector_rejected() {
        let (_, mesh) = setup();
        assert!(matches!(count_interior_zeros(&mesh, &vec![0.0; mesh.num_dofs()]), Err(Error::ZeroVector)));
    }

    #[test]
    fn tiny_values_ignored() {
        let mesh = Mesh::new(vec![-3.0, -2.0, -1.0, 0.0, 1.0]).unwrap();
        let u = [1.0, -1e-12, 1.0];
        assert_eq!(count_interior_zeros(&mesh, &u).unwrap().zeros_minus, 0);
        let u = [1.0, -1e-3, 1.0];
        assert_eq!(count_interior_zeros(&mesh, &u).unwrap().zeros_minus, 2);
    }

    #[test]
    fn plateau_detection() {
        let (cfg, mesh) = setup();
        // trapezoid equal to 2 on [a₋ + 0.5, -0.5]
        let u = mesh.interpolate(|x| {
            if x < 0.0 {
                2.0 * (2.0 * (x - cfg.a_minus)).min(-2.0 * x).min(1.0)
            } else {
                2.0 * (1.0 - x / cfg.a_plus)
            }
        });
        let p = detect_plateau(&mesh, &u, -4.0).unwrap();
        assert!((p.value - 2.0).abs() < 1e-6);
        assert!(p.deviation < 1e-6);
        assert!(detect_plateau(&mesh, &u, 1.0).is_none());
        for j in [-3, 0, 2] {
            let p = solve_eigenvalue(&cfg, j).unwrap();
            assert!(detect_plateau(&mesh, &interp(&cfg, &mesh, j), p.lambda.min(-0.1)).is_none(), "j={j}");
        }
    }

    #[test]
    fn half_widths_of_sine_lobes() {
        let cfg = MediumConfig::default();
        let mesh = build_mesh(&cfg, 2f64.powi(-8), 0.1, 0).unwrap();
        // two full lobes of sin on Ω₋ of length 2.5 each, FWHM = 2.5 · 2/3
        let u = mesh.interpolate(|x| if x < 0.0 { (std::f64::consts::PI * x / 2.5).sin() } else { 0.0 });
        let w = extremum_half_widths(&mesh, &u);
        assert_eq!(w.len(), 2);
        for v in w {
            assert!((v - 2.5 * 2.0 / 3.0).abs() < 1e-3, "{v}");
        }
    }
}
