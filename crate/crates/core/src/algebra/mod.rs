//! Exact coefficient fields, monomials and sparse multivariate polynomials.

mod field;
mod monomial;
mod parse;
mod polynomial;

pub(crate) use field::{add_mod, inv_mod, mul_mod, sub_mod};
pub use field::{is_prime, Field, FieldElement, LARGE_PRIME, MAX_MODULUS};
pub use monomial::{Exponent, Monomial, MonomialDisplay, VarSet};
pub use parse::infer_vars;
pub use polynomial::{Degree, Polynomial, Term};
