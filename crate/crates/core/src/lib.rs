//! Hardy-space norms of Dirichlet polynomials.
//!
//! Dirichlet polynomials `sum a_n n^{-s}` are lifted to polynomials on the
//! infinite torus through the prime factorization of each index; the
//! `H_p` norm of `D` is the `L_p` norm of the lift. Even integer norms are
//! computed exactly from coefficient convolutions, other exponents by
//! seeded Monte Carlo integration.
//!
//! Polynomials are generic over the coefficient ring ([`scalar::Coeff`]):
//! double precision, Gaussian integers and Gaussian rationals are the
//! common choices, aliased below.

pub mod bounds;
pub mod corpus;
pub mod error;
pub mod extremal;
pub mod multiplier;
pub mod norms;
pub mod numtheory;
pub mod polyalg;
pub mod scalar;

use num_complex::{Complex, Complex64};

pub use error::{Error, Result};
pub use polyalg::{DirichletPoly, MultiIndex, Scale, Scaled, TrigPoly};
pub use scalar::{Coeff, ComplexRational, Rational};

/// Gaussian integer coefficients, exact and fast.
pub type GaussInt = Complex<i128>;

pub type DirichletPolyF64 = DirichletPoly<Complex64>;
pub type DirichletPolyF32 = DirichletPoly<Complex<f32>>;
pub type DirichletPolyExact = DirichletPoly<ComplexRational>;
pub type DirichletPolyInt = DirichletPoly<GaussInt>;

pub type TrigPolyF64 = TrigPoly<Complex64>;
pub type TrigPolyF32 = TrigPoly<Complex<f32>>;
pub type TrigPolyExact = TrigPoly<ComplexRational>;
pub type TrigPolyInt = TrigPoly<GaussInt>;
