use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use signchange::continuation::read_branch_csv;
use signchange::riesz::read_sweep_csv;

const COARSE: &str = "h = 0.0625\nrefine_levels = 2\nsteps = 12\nds = 0.1\n\
                      dim_cap = 100\nweyl_lambda_max = 1000\ncoercivity_h = 0.125\n";

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_signchange"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_svg(dir: &Path, name: &str) {
    let text = read(dir, name);
    let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(!text.contains("NaN"), "{name}");
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn spectrum_writes_ordered_table_and_figures() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), "", &["spectrum"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(tmp.path(), "spectrum.csv");
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("j,lambda,tau,alpha,zeros_minus,zeros_plus"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    let lambdas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[1] > w[0]));
    for j in -5..=5 {
        assert_svg(tmp.path(), &format!("profile_j{j}.svg"));
        let profile = read(tmp.path(), &format!("profile_j{j}.csv"));
        assert!(profile.lines().skip(1).any(|l| l.starts_with("0e0,")));
        assert_eq!(profile.lines().count(), 402);
    }

    // identical bytes on a second run
    let first = table.clone();
    let first_profile = read(tmp.path(), "profile_j3.csv");
    assert!(run(tmp.path(), "", &["spectrum"]).status.success());
    assert_eq!(read(tmp.path(), "spectrum.csv"), first);
    assert_eq!(read(tmp.path(), "profile_j3.csv"), first_profile);
}

#[test]
fn bifurcate_on_coarse_mesh() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = format!("{COARSE}dump_vectors = true\n");
    let out = run(tmp.path(), &cfg, &["bifurcate"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for id in ["C-2", "C0", "C5"] {
        let rows = read_branch_csv(&read(tmp.path(), &format!("branch_{id}.csv"))).unwrap();
        assert_eq!(rows.len(), 13);
        assert!(rows.iter().all(|r| r.branch_id == id));
        assert!(rows.iter().all(|r| (r.zeros_minus, r.zeros_plus) == (rows[0].zeros_minus, rows[0].zeros_plus)));
        assert!(rows.windows(2).all(|w| w[1].lambda < w[0].lambda), "{id}");
        assert!(rows.iter().all(|r| r.energy > 0.0));
    }
    assert_svg(tmp.path(), "bifurcation.svg");
    assert_eq!(listing(&tmp.path().join("out/vectors")).len(), 3 * 13);
}

#[test]
fn empty_seed_list_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &format!("{COARSE}seeds =\n"), &["bifurcate"]);
    assert!(out.status.success());
    assert!(listing(&tmp.path().join("out")).is_empty());
}

#[test]
fn riesz_sweep_is_positive_and_parseable() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &format!("{COARSE}riesz_sigmas = -1, -0.5\n"), &["riesz"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for s in ["-1", "-0.5"] {
        let rows = read_sweep_csv(&read(tmp.path(), &format!("riesz_sigma{s}.csv"))).unwrap();
        assert!(rows.len() >= 3);
        assert!(rows.iter().all(|r| r.dim <= 100 && r.min_eig > 0.0 && r.max_eig >= r.min_eig));
        assert!(rows.windows(2).all(|w| w[1].big_lambda == 2.0 * w[0].big_lambda));
    }
    assert_svg(tmp.path(), "riesz.svg");
}

#[test]
fn coercivity_reports_a_passing_k() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), COARSE, &["coercivity"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("m = ") && stdout.contains("k_proof = "));
    let table = read(tmp.path(), "coercivity.csv");
    let last = table.lines().last().unwrap();
    assert!(last.ends_with(",true"), "{table}");
    assert_eq!(table.lines().filter(|l| l.ends_with(",true")).count(), 1);
}

#[test]
fn weyl_table_tracks_slope() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), COARSE, &["weyl"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(tmp.path(), "weyl.csv");
    let rows: Vec<(f64, usize)> =
        table.lines().skip(1).map(|l| l.split(',').collect::<Vec<_>>()).map(|c| (c[0].parse().unwrap(), c[1].parse().unwrap())).collect();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows.last().unwrap().0, 1000.0);
    assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1));
    assert_svg(tmp.path(), "weyl.svg");
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    for cfg in ["colour = red\n", "sigma_minus = 0.5\n", "h = 0\n"] {
        let out = run(tmp.path(), cfg, &["spectrum"]);
        assert_eq!(out.status.code(), Some(2), "{cfg:?}");
    }
}

#[test]
fn missing_config_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_signchange"))
        .args(["spectrum", "--config"])
        .arg(tmp.path().join("absent.cfg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn no_plot_skips_svg() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run(tmp.path(), "j_min = -1\nj_max = 1\n", &["spectrum", "--no-plot"]).status.success());
    let names = listing(&tmp.path().join("out"));
    assert_eq!(names.len(), 4);
    assert!(names.iter().all(|n| n.ends_with(".csv")));
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run(a.path(), COARSE, &["bifurcate", "--jobs", "1"]).status.success());
    assert!(run(b.path(), COARSE, &["bifurcate", "--jobs", "4"]).status.success());
    let names = listing(&a.path().join("out"));
    assert_eq!(names, listing(&b.path().join("out")));
    for n in names {
        assert_eq!(read(a.path(), &n), read(b.path(), &n), "{n}");
    }
}
