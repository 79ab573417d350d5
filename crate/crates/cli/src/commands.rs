//! The five subcommands. Each writes its files under the output directory and
//! returns the list of computations that missed their tolerance.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use signchange::continuation::{
    branch_seed, continue_branch, sidecar_name, vector_to_text, write_branch_csv, Branch, Discretization, Seed,
};
use signchange::eig::VERIFY_TOL;
use signchange::fem::{
    build_mesh, coercivity_sweep, k_grid, proof_constants, CoercivityProblem, Cutoff, COERCIVITY_THRESHOLD,
};
use signchange::riesz::{sweep, write_sweep_csv, SweepRow};
use signchange::spectral::{count_interior_zeros_analytic, eigenfunction_eval, spectrum, weyl_count, EigenPair};
use signchange::MediumConfig;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::plot::{Figure, Series, Style};

/// Relative deviation of `count/√Λ` from the Weyl slope tolerated at `Λ ≥ 10³`.
const WEYL_TOL: f64 = 0.05;

pub struct Output {
    pub dir: PathBuf,
    pub plot: bool,
}

impl Output {
    pub fn new(dir: PathBuf, plot: bool) -> Result<Self, CliError> {
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self { dir, plot })
    }

    fn write(&self, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    fn figure(&self, name: &str, fig: &Figure) -> Result<(), CliError> {
        if self.plot {
            self.write(name, fig.to_svg())?;
        }
        Ok(())
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = vec![];
    f(&mut buf).expect("writing to memory cannot fail");
    buf
}

/// Sample points on each subdomain, both sharing the interface node.
fn sample_points(cfg: &MediumConfig, n: usize) -> Vec<f64> {
    let half = n / 2;
    let minus = (0..half).map(|i| cfg.a_minus * (half - i) as f64 / half as f64);
    let plus = (0..=n - half - 1).map(|i| cfg.a_plus * i as f64 / (n - half - 1) as f64);
    minus.chain(plus).collect()
}

fn profile(cfg: &MediumConfig, pair: &EigenPair, xs: &[f64]) -> Result<Vec<(f64, f64)>, CliError> {
    xs.iter().map(|&x| Ok((x, eigenfunction_eval(pair, cfg, x)?))).collect()
}

pub fn cmd_spectrum(run: &RunConfig, out: &Output) -> Result<Vec<String>, CliError> {
    let cfg = &run.medium;
    let pairs = spectrum(cfg, run.j_min, run.j_max)?;
    let mut csv = String::from("j,lambda,tau,alpha,zeros_minus,zeros_plus\n");
    for p in &pairs {
        let (zm, zp) = count_interior_zeros_analytic(p, cfg);
        csv.push_str(&format!("{},{:e},{:e},{:e},{zm},{zp}\n", p.index, p.lambda, p.tau, p.alpha));
    }
    out.write("spectrum.csv", csv)?;

    let xs = sample_points(cfg, run.profile_points);
    let profiles: Vec<Vec<(f64, f64)>> = pairs.par_iter().map(|p| profile(cfg, p, &xs)).collect::<Result<_, _>>()?;
    for (p, prof) in pairs.iter().zip(&profiles) {
        let mut csv = String::from("x,phi\n");
        for (x, v) in prof {
            csv.push_str(&format!("{x:e},{v:e}\n"));
        }
        out.write(&format!("profile_j{}.csv", p.index), csv)?;
        let mut fig = Figure::new(format!("eigenfunction j = {}, λ = {:.6}", p.index, p.lambda), "x", "φ_j(x)");
        fig.push(Series::new(format!("j = {}", p.index), prof.clone(), Style::Line, 0));
        out.figure(&format!("profile_j{}.svg", p.index), &fig)?;
    }
    println!("spectrum: {} eigenpairs for j in [{}, {}]", pairs.len(), run.j_min, run.j_max);
    for p in &pairs {
        println!("  j = {:>4}  λ = {:>+.12e}", p.index, p.lambda);
    }
    Ok(vec![])
}

fn branch_id(j: i64) -> String {
    format!("C{j}")
}

pub fn cmd_bifurcate(run: &RunConfig, out: &Output) -> Result<Vec<String>, CliError> {
    let cfg = &run.medium;
    let mesh = build_mesh(cfg, run.h, run.refine_radius, run.refine_levels)?;
    println!(
        "bifurcate: {} elements, smallest {:.3e}, {} seeds",
        mesh.num_elements(),
        mesh.min_element(),
        run.seeds.len()
    );
    let disc = Discretization::new(cfg, mesh)?;
    let params = &run.continuation;
    let results: Vec<signchange::Result<(Seed, Branch)>> = run
        .seeds
        .par_iter()
        .map(|&j| {
            let pair = signchange::spectral::solve_eigenvalue(cfg, j)?;
            let seed = branch_seed(&disc, &pair, params)?;
            let branch = continue_branch(&disc, &seed, params)?;
            Ok((seed, branch))
        })
        .collect();

    let mut failures = vec![];
    let mut fig = Figure::new("bifurcation diagram", "λ", "‖u‖ (L² with weight c)");
    let mut lambda_range = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, (&j, res)) in run.seeds.iter().zip(results).enumerate() {
        let id = branch_id(j);
        let (seed, branch) = match res {
            Ok(v) => v,
            Err(e) => {
                println!("  {id}: failed: {e}");
                failures.push(format!("branch {id}: {e}"));
                continue;
            }
        };
        out.write(&format!("branch_{id}.csv"), csv_bytes(|w| write_branch_csv(w, &id, &branch)))?;
        if run.dump_vectors {
            let vec_dir = out.dir.join("vectors");
            fs::create_dir_all(&vec_dir).map_err(|e| CliError::io(&vec_dir, e))?;
            for (step, p) in branch.points.iter().enumerate() {
                let path = vec_dir.join(sidecar_name(&id, step));
                fs::write(&path, vector_to_text(&p.u)).map_err(|e| CliError::io(&path, e))?;
            }
        }
        let unverified = branch.points.iter().filter(|p| !p.verify(&disc, params.newton_tol)).count();
        if unverified > 0 {
            failures.push(format!("branch {id}: {unverified} points fail residual re-verification"));
        }
        let first = &branch.points[0];
        let last = branch.points.last().unwrap();
        println!(
            "  {id}: bifurcates at λ = {:.6}, {} points, status {:?}, λ {:.4} -> {:.4}, zeros (Ω₋, Ω₊) = ({}, {})",
            seed.linear_lambda,
            branch.points.len(),
            branch.status,
            first.lambda,
            last.lambda,
            first.zeros_minus,
            first.zeros_plus
        );
        let mut pts = vec![(seed.linear_lambda, 0.0)];
        pts.extend(branch.points.iter().map(|p| (p.lambda, p.l2c_norm)));
        for &(l, _) in &pts {
            lambda_range = (lambda_range.0.min(l), lambda_range.1.max(l));
        }
        fig.push(Series::new(id, pts, Style::Line, k));
    }
    if !fig.series.is_empty() {
        fig.push(Series::new("u = 0", vec![(lambda_range.0, 0.0), (lambda_range.1, 0.0)], Style::Dashed, 7));
        out.figure("bifurcation.svg", &fig)?;
    }
    Ok(failures)
}

pub fn cmd_riesz(run: &RunConfig, out: &Output) -> Result<Vec<String>, CliError> {
    let sweeps: Vec<(f64, signchange::Result<Vec<SweepRow>>)> = run
        .riesz_sigmas
        .par_iter()
        .map(|&s| {
            let cfg = MediumConfig { sigma_minus: s, ..run.medium };
            (s, sweep(&cfg, &run.gram, run.lambda_start, run.dim_cap))
        })
        .collect();
    let mut failures = vec![];
    let mut fig = Figure::new("extreme eigenvalues of the normalized Gram matrix", "Λ", "eigenvalue").log_x();
    for (k, (s, res)) in sweeps.into_iter().enumerate() {
        let rows = match res {
            Ok(rows) if !rows.is_empty() => rows,
            Ok(_) => {
                failures.push(format!("σ₋ = {s}: no sweep value fits within dim_cap = {}", run.dim_cap));
                continue;
            }
            Err(e) => {
                failures.push(format!("σ₋ = {s}: {e}"));
                continue;
            }
        };
        out.write(&format!("riesz_sigma{s}.csv"), csv_bytes(|w| write_sweep_csv(w, &rows)))?;
        let last = rows.last().unwrap();
        let change = match rows.as_slice() {
            [.., a, b] => format!(", last doubling changes min by {:.3}%", 100.0 * (b.min_eig - a.min_eig).abs() / a.min_eig),
            _ => String::new(),
        };
        println!(
            "riesz: σ₋ = {s}: Λ up to {} (dim {}), min {:.6}, max {:.6}{change}",
            last.big_lambda, last.dim, last.min_eig, last.max_eig
        );
        if rows.iter().any(|r| !(r.min_eig > 0.0)) {
            failures.push(format!("σ₋ = {s}: Gram matrix not positive definite"));
        }
        fig.push(Series::new(format!("min, σ₋ = {s}"), rows.iter().map(|r| (r.big_lambda, r.min_eig)).collect(), Style::Line, k));
        fig.push(Series::new(format!("max, σ₋ = {s}"), rows.iter().map(|r| (r.big_lambda, r.max_eig)).collect(), Style::Dashed, k));
    }
    if !fig.series.is_empty() {
        out.figure("riesz.svg", &fig)?;
    }
    Ok(failures)
}

pub fn cmd_coercivity(run: &RunConfig, out: &Output) -> Result<Vec<String>, CliError> {
    let cfg = &run.medium;
    let mesh = build_mesh(cfg, run.coercivity_h, run.refine_radius, run.refine_levels)?;
    let chi = Cutoff::default_for(cfg);
    let pc = proof_constants(cfg, &chi)?;
    let problem = CoercivityProblem::new(cfg, &mesh, pc.m, &chi)?;
    let results = coercivity_sweep(&problem, &k_grid(pc.k, run.k_count))?;
    let sanity = CoercivityProblem::identity_sanity(cfg, &mesh)?.min_eig(0.0)?.min_eig;

    println!("coercivity: {} degrees of freedom, cutoff on [{}, {}]", mesh.num_dofs(), chi.r1, chi.r2);
    println!("m = {:e}", pc.m);
    println!("k_proof = {:e} (alpha1 = {:e}, alpha2 = {:e})", pc.k, pc.alpha1, pc.alpha2);
    let mut csv = String::from("k,min_eig,pass\n");
    for r in &results {
        println!("k = {:e}  min_eig = {:.6}  pass = {}", r.k, r.min_eig, r.pass);
        csv.push_str(&format!("{:e},{:e},{}\n", r.k, r.min_eig, r.pass));
    }
    println!("identity sanity min_eig = {sanity:.15}");
    out.write("coercivity.csv", csv)?;

    let mut failures = vec![];
    match results.iter().find(|r| r.pass) {
        Some(r) => println!("pass: min_eig = {:.6} ≥ {COERCIVITY_THRESHOLD} at k = {:e}", r.min_eig, r.k),
        None => failures.push(format!("no k in the grid reaches min_eig ≥ {COERCIVITY_THRESHOLD}")),
    }
    if (sanity - 1.0).abs() > VERIFY_TOL {
        failures.push(format!("identity sanity check returned {sanity}, expected 1"));
    }
    Ok(failures)
}

pub fn cmd_weyl(run: &RunConfig, out: &Output) -> Result<Vec<String>, CliError> {
    let cfg = &run.medium;
    let ppd = run.weyl_points_per_decade as f64;
    let decades = run.weyl_lambda_max.log10();
    let n = (decades * ppd).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| 10f64.powf(k as f64 / ppd)).collect();
    if *grid.last().unwrap() < run.weyl_lambda_max {
        grid.push(run.weyl_lambda_max);
    }
    let counts: Vec<usize> = grid.par_iter().map(|&l| weyl_count(cfg, l)).collect::<Result<_, _>>()?;

    let mut csv = String::from("Lambda,count,sqrt_lambda_slope\n");
    for (l, c) in grid.iter().zip(&counts) {
        csv.push_str(&format!("{l:e},{c},{:e}\n", *c as f64 / l.sqrt()));
    }
    out.write("weyl.csv", csv)?;

    // least-squares line count ≈ a·√Λ + b
    let xs: Vec<f64> = grid.iter().map(|l| l.sqrt()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let nf = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / nf, ys.iter().sum::<f64>() / nf);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let bound = xs.iter().zip(&ys).map(|(x, y)| y / x).fold(0.0, f64::max);
    let weyl = cfg.weyl_slope();
    let top = *ys.last().unwrap() / xs.last().unwrap();
    let deviation = (top - weyl).abs() / weyl;
    println!("weyl: asymptotic slope (k₊a₊ + k₋|a₋|)/π = {weyl:.6}");
    println!("fitted count ≈ {slope:.6}·√Λ {intercept:+.4}; count ≤ {bound:.6}·√Λ on the whole sweep");
    println!("count/√Λ at Λ = {:e}: {top:.6} ({:.3}% from the slope)", run.weyl_lambda_max, 100.0 * deviation);

    let mut fig = Figure::new("eigenvalue counting function", "√Λ", "#{j : |λ_j| ≤ Λ}");
    fig.push(Series::new("count", xs.iter().copied().zip(ys.iter().copied()).collect(), Style::Markers, 0));
    let x_end = *xs.last().unwrap();
    fig.push(Series::new("least-squares fit", vec![(0.0, intercept), (x_end, intercept + slope * x_end)], Style::Line, 1));
    fig.push(Series::new("asymptotic slope", vec![(0.0, 0.0), (x_end, weyl * x_end)], Style::Dashed, 2));
    out.figure("weyl.svg", &fig)?;

    let mut failures = vec![];
    if run.weyl_lambda_max >= 1e3 && deviation > WEYL_TOL {
        failures.push(format!("count/√Λ deviates {:.2}% from the asymptotic slope", 100.0 * deviation));
    }
    Ok(failures)
}

pub fn output_dir(run: &RunConfig, cli_out: Option<&Path>) -> PathBuf {
    cli_out.map(Path::to_path_buf).unwrap_or_else(|| run.out.clone())
}
