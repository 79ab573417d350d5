//! Numerical toolkit for the one-dimensional Helmholtz operator with a
//! sign-changing diffusion coefficient,
//!
//! ```text
//!   -(σ(x) u')' - λ c(x) u = κ u³   on (a₋, a₊),   u(a₋) = u(a₊) = 0,
//! ```
//!
//! where `σ` is positive on `(0, a₊)` and negative on `(a₋, 0)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`medium`] holds the piecewise-constant problem data.
//! * [`spectral`] computes the eigenpairs of the linear operator
//!   semi-analytically, together with closed-form inner products and Weyl counts.
//! * [`fem`] discretizes with P1 elements on an interface-graded mesh and checks
//!   weak T-coercivity of the discrete form.
//! * [`eig`] solves the symmetric generalized eigenproblems arising from both.
//! * [`continuation`] traces the nonlinear solution branches emanating from the
//!   eigenvalues.
//! * [`riesz`] studies the conditioning of the normalized eigenfunction family.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons deliberately reject NaN

pub mod continuation;
pub mod eig;
pub mod fem;
pub mod medium;
pub mod quadrature;
pub mod riesz;
pub mod roots;
pub mod spectral;
pub mod tridiag;

mod error;

pub use error::{Error, Result};
pub use medium::MediumConfig;
