//! Sparse Dirichlet and trigonometric polynomials, the Bohr lift between
//! them, and the smooth/rough block decomposition.

mod dirichlet;
mod json;
mod lift;
mod monomial;
mod scaled;
mod trig;

pub use dirichlet::DirichletPoly;
pub use lift::{bohr_lift, bohr_unlift, decompose_smooth, index_of, integer_of, recompose};
pub use monomial::MultiIndex;
pub use scaled::{build_qn, Scale, Scaled};
pub(crate) use trig::accumulate;
pub use trig::{binomial_u128, power_term_bound, TrigPoly, DEFAULT_TERM_CAP};
