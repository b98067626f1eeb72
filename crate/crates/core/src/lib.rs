//! Waring decompositions of monomials.
//!
//! Exact ranks and decompositions of `x0^d0 * ... * xn^dn`, the
//! complete-intersection ideals `(a_i^(d_i+1) - phi_i * a0^(d0+1))` whose
//! reduced zero sets are exactly the decompositions, Hilbert functions and
//! the dimension of the space of decompositions, together with radicality
//! certificates and torus normalization for equal exponents.

pub mod error;
pub mod apolar_ideals;
pub mod exact_arith;
pub mod linalg;
pub mod monomial_waring;
pub mod polynomial;
pub mod quotient_solver;
pub mod scalar;
pub mod vsp_explorer;

pub use error::{Error, Result};
