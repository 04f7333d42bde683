//! Semi-separable matrices in generator form and the differentiation matrix
//! of Jacobi W-functions.
//!
//! The W-functions `phi_n(x) = kappa_n (1-x)^(alpha/2) (1+x)^(beta/2) P_n(x)` form an
//! orthonormal basis of `L2(-1, 1)`. Their differentiation matrix
//! `D[m][n] = <phi_m', phi_n>` is skew-symmetric and semi-separable of rank 2,
//! so products with it and shifted solves against it cost `O(N)`.
//!
//! * [`specfun`]: log-gamma, Jacobi polynomials, Gauss–Jacobi rules, `pFq` sums.
//! * [`semisep`]: generator storage, matvec, products and the banded-reduction solver.
//! * [`jacobidiff`]: four independent constructions of `D`.
//! * [`spectral`]: expansion, differentiation and two model time steppers.

mod dd;
pub mod error;
pub mod jacobidiff;
pub mod semisep;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
