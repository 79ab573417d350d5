use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Symmetric band matrix storing the upper band row by row:
/// `data[i * (b + 1) + k] = A[i][i + k]` for `0 ≤ k ≤ b`. Entries past the
/// last column are kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBandMatrix {
    n: usize,
    b: usize,
    data: Vec<f64>,
}

impl SymBandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let b = bandwidth.min(n.saturating_sub(1));
        Self { n, b, data: vec![0.0; n * (b + 1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Full-band matrix from the upper triangle of a dense matrix.
    pub fn from_dense_upper(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let n = m.nrows();
        let mut out = Self::zeros(n, n.saturating_sub(1));
        for i in 0..n {
            for j in i..n {
                out.set(i, j, m[(i, j)]);
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.n, "index out of range");
        if j - i > self.b {
            0.0
        } else {
            self.data[i * (self.b + 1) + (j - i)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.n && j - i <= self.b, "entry ({i}, {j}) outside the band");
        self.data[i * (self.b + 1) + (j - i)] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let v0 = self.get(i, j);
        self.set(i, j, v0 + v);
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length");
        let mut y = vec![0.0; self.n];
        let w = self.b + 1;
        for i in 0..self.n {
            let row = &self.data[i * w..(i + 1) * w];
            y[i] += row[0] * x[i];
            for k in 1..w.min(self.n - i) {
                y[i] += row[k] * x[i + k];
                y[i + k] += row[k] * x[i];
            }
        }
        y
    }

    /// `xᵀ A y`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    /// Diagonal `(lower, diag, upper)` of a tridiagonal matrix.
    pub fn tridiagonal(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if self.b > 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.b });
        }
        let diag: Vec<f64> = (0..self.n).map(|i| self.get(i, i)).collect();
        let off: Vec<f64> = (1..self.n).map(|i| self.get(i - 1, i)).collect();
        Ok((off.clone(), diag, off))
    }

    /// `self + s * other`, with the larger of the two bandwidths.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = Self::zeros(self.n, self.b.max(other.b));
        for i in 0..self.n {
            for j in i..self.n.min(i + out.b + 1) {
                out.set(i, j, self.get(i, j) + s * other.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.b);
                let hi = (i + self.b + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Plain-text form: header `symband <n> <b>`, then one packed row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("symband {} {}\n", self.n, self.b);
        for row in self.data.chunks(self.b + 1) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .strip_prefix("symband ")
            .map(|r| r.split_whitespace().filter_map(|t| t.parse().ok()).collect())
            .unwrap_or_default();
        let [n, b] = dims[..] else {
            return Err(Error::Parse(format!("bad matrix header {header:?}")));
        };
        let mut m = Self::zeros(n, b);
        if m.b != b {
            return Err(Error::Parse(format!("bandwidth {b} too large for dimension {n}")));
        }
        let mut rows = 0;
        for (i, line) in lines.enumerate() {
            if i >= n {
                return Err(Error::DimensionMismatch { expected: n, found: i + 1 });
            }
            let vals = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != b + 1 {
                return Err(Error::DimensionMismatch { expected: b + 1, found: vals.len() });
            }
            m.data[i * (b + 1)..(i + 1) * (b + 1)].copy_from_slice(&vals);
            rows += 1;
        }
        if rows != n {
            return Err(Error::DimensionMismatch { expected: n, found: rows });
        }
        Ok(m)
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SymBandMatrix {
        let mut m = SymBandMatrix::zeros(4, 1);
        for i in 0..4 {
            m.set(i, i, 2.0 + i as f64);
        }
        for i in 0..3 {
            m.set(i, i + 1, -1.0 - i as f64);
        }
        m
    }

    #[test]
    fn matvec_matches_dense() {
        let m = sample();
        let x = [1.0, -2.0, 0.5, 3.0];
        let dense = m.to_dense() * nalgebra::DVector::from_column_slice(&x);
        for (a, b) in m.matvec(&x).iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(m.get(2, 1), m.get(1, 2));
        assert_eq!(m.get(0, 3), 0.0);
        assert_eq!(m.norm_inf(), 4.0 + 2.0 + 3.0);
    }

    #[test]
    fn text_roundtrip() {
        let m = sample();
        assert_eq!(SymBandMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(SymBandMatrix::from_text("symband 2 1\n1 2\n").is_err());
        assert!(SymBandMatrix::from_text("nonsense").is_err());
    }

    #[test]
    fn dense_conversion() {
        let m = sample();
        assert_eq!(SymBandMatrix::from_dense_upper(&m.to_dense()).unwrap().to_dense(), m.to_dense());
        let sum = m.add_scaled(2.0, &SymBandMatrix::identity(4)).unwrap();
        assert_eq!(sum.get(1, 1), 5.0);
        assert_eq!(sum.get(0, 1), -1.0);
    }

    #[test]
    fn tridiagonal_parts() {
        let (l, d, u) = sample().tridiagonal().unwrap();
        assert_eq!(d, vec![2.0, 3.0, 4.0, 5.0]);
        assert_eq!(l, u);
        assert_eq!(l, vec![-1.0, -2.0, -3.0]);
    }
}
