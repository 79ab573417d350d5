use std::io::Write;

use super::Branch;
use crate::{Error, Result};

pub const BRANCH_CSV_HEADER: &str = "branch_id,step,lambda,l2c_norm,h_norm,energy,zeros_minus,zeros_plus,plateau_value";

/// One parsed row of a branch CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRow {
    pub branch_id: String,
    pub step: usize,
    pub lambda: f64,
    pub l2c_norm: f64,
    pub h_norm: f64,
    pub energy: f64,
    pub zeros_minus: usize,
    pub zeros_plus: usize,
    pub plateau_value: Option<f64>,
}

/// Writes the branch as CSV; floats use the shortest round-trip representation.
pub fn write_branch_csv<W: Write>(mut w: W, branch_id: &str, branch: &Branch) -> std::io::Result<()> {
    writeln!(w, "{BRANCH_CSV_HEADER}")?;
    for (step, p) in branch.points.iter().enumerate() {
        let plateau = p.plateau.map(|v| format!("{v:e}")).unwrap_or_default();
        writeln!(
            w,
            "{branch_id},{step},{:e},{:e},{:e},{:e},{},{},{plateau}",
            p.lambda, p.l2c_norm, p.h_norm, p.energy, p.zeros_minus, p.zeros_plus
        )?;
    }
    Ok(())
}

fn field<T: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("line {line}: bad {name} {s:?}")))
}

pub fn read_branch_csv(text: &str) -> Result<Vec<BranchRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == BRANCH_CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected branch CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line = i + 2;
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 9 {
                return Err(Error::Parse(format!("line {line}: expected 9 columns, found {}", cols.len())));
            }
            Ok(BranchRow {
                branch_id: cols[0].to_string(),
                step: field(cols[1], "step", line)?,
                lambda: field(cols[2], "lambda", line)?,
                l2c_norm: field(cols[3], "l2c_norm", line)?,
                h_norm: field(cols[4], "h_norm", line)?,
                energy: field(cols[5], "energy", line)?,
                zeros_minus: field(cols[6], "zeros_minus", line)?,
                zeros_plus: field(cols[7], "zeros_plus", line)?,
                plateau_value: if cols[8].trim().is_empty() { None } else { Some(field(cols[8], "plateau_value", line)?) },
            })
        })
        .collect()
}

/// File name of the coefficient-vector sidecar of a branch point.
pub fn sidecar_name(branch_id: &str, step: usize) -> String {
    format!("{branch_id}_step{step:04}.vec")
}

/// One coefficient per line, round-trip exact.
pub fn vector_to_text(u: &[f64]) -> String {
    let mut s = String::with_capacity(u.len() * 24);
    for v in u {
        s.push_str(&format!("{v:e}\n"));
    }
    s
}

pub fn vector_from_text(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| field(l, "coefficient", i + 1))
        .collect()
}
