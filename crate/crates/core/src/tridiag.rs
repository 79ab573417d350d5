//! LU factorization of general tridiagonal matrices with partial pivoting.
//!
//! Pivoting introduces one extra superdiagonal in `U`, which is stored in
//! `u2`. Used for the (possibly indefinite) Jacobians of the continuation.

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct TridiagLu {
    /// Multipliers of the elimination.
    l: Vec<f64>,
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    /// Whether rows `i` and `i + 1` were swapped at step `i`.
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factors the matrix with subdiagonal `lower`, diagonal `diag` and
    /// superdiagonal `upper` (`lower.len() == upper.len() == diag.len() - 1`).
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: lower.len().min(upper.len()) });
        }
        let scale = diag
            .iter()
            .chain(lower)
            .chain(upper)
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let mut u0 = diag.to_vec();
        let mut u1 = upper.to_vec();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            let sub = lower[i];
            // row i+1 before elimination: (sub, diag[i+1], upper[i+1])
            let (mut d1, mut e1) = (u0[i + 1], u1[i + 1]);
            if sub.abs() > u0[i].abs() {
                swapped[i] = true;
                // swap rows i and i+1
                let (p0, p1, p2) = (sub, d1, e1);
                let (r0, r1, r2) = (u0[i], u1[i], u2[i]);
                u0[i] = p0;
                u1[i] = p1;
                u2[i] = p2;
                let m = r0 / p0;
                l[i] = m;
                d1 = r1 - m * p1;
                e1 = r2 - m * p2;
            } else {
                if u0[i] == 0.0 {
                    return Err(Error::Singular(format!("zero pivot at row {i}")));
                }
                let m = sub / u0[i];
                l[i] = m;
                d1 -= m * u1[i];
                e1 -= m * u2[i];
            }
            u0[i + 1] = d1;
            u1[i + 1] = e1;
        }
        if u0.iter().any(|p| p.abs() <= f64::EPSILON * scale * 1e-3 || !p.is_finite()) {
            return Err(Error::Singular("tridiagonal matrix is numerically singular".into()));
        }
        Ok(Self { l, u0, u1, u2, swapped })
    }

    pub fn dim(&self) -> usize {
        self.u0.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length");
        let mut y = b.to_vec();
        for i in 0..n - 1 {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.l[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

/// `y = T x` for the tridiagonal matrix given by its three diagonals.
pub fn tridiag_matvec(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += upper[i] * x[i + 1];
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solves_pivoting_case() {
        // zero leading pivot forces a row swap
        let lower = [1.0, 2.0];
        let diag = [0.0, 1.0, 3.0];
        let upper = [4.0, -1.0];
        let lu = TridiagLu::factor(&lower, &diag, &upper).unwrap();
        let x = [1.0, -2.0, 0.5];
        let b = tridiag_matvec(&lower, &diag, &upper, &x);
        let y = lu.solve(&b);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn one_by_one() {
        let lu = TridiagLu::factor(&[], &[2.0], &[]).unwrap();
        assert_eq!(lu.solve(&[4.0]), vec![2.0]);
    }

    #[test]
    fn singular_detected() {
        assert!(TridiagLu::factor(&[1.0], &[1.0, 1.0], &[1.0]).is_err());
        assert!(TridiagLu::factor(&[1.0], &[1.0], &[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn random_systems(
            n in 2usize..40,
            seed in proptest::collection::vec(-1.0..1.0f64, 120),
        ) {
            let lower: Vec<f64> = seed[..n - 1].to_vec();
            let upper: Vec<f64> = seed[40..40 + n - 1].to_vec();
            // indefinite diagonal, kept away from singularity by dominance
            let diag: Vec<f64> = seed[80..80 + n]
                .iter()
                .map(|v| if *v >= 0.0 { 2.5 + v } else { -2.5 + v })
                .collect();
            let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let b = tridiag_matvec(&lower, &diag, &upper, &x);
            let y = TridiagLu::factor(&lower, &diag, &upper).unwrap().solve(&b);
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
