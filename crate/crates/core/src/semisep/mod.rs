//! Semi-separably generated matrices.
//!
//! An `N x N` matrix of rank `r` is stored as
//!
//! ```text
//! A[m][n] = sum_i a_i[m] b_i[n]   (m < n)
//! A[n][n] = c[n]
//! A[m][n] = sum_i d_i[m] e_i[n]   (m > n)
//! ```
//!
//! which costs `O(N r)` memory and gives `O(N r)` products with vectors.

mod banded;
mod generators;
mod product;
mod solve;

pub use banded::{BandedLu, BandedMatrix};
pub use generators::{SemiSepGenerators, SkewGeneratorPair, DEFAULT_DENSE_CAP};
pub use product::{product, product_rank1, product_rank1_variant, product_with_horizon, TailVariant};
pub use solve::{solve_structured, StructuredLu};
