//! Special functions and orthogonal-polynomial primitives.

mod gamma;
mod hyper;
mod jacobi;
mod quadrature;

pub use gamma::{log_gamma, pochhammer};
pub use hyper::hyper_pfq_at;
pub use jacobi::{
    connection_check, jacobi_eval, jacobi_reflection_check, JacobiParams, OrthonormalRecurrence,
};
pub use quadrature::{gauss_jacobi_rule, weight_mass, QuadratureRule};

pub(crate) use gamma::{lgamma, lgamma_diff};
pub(crate) use jacobi::jacobi_all_dd;
