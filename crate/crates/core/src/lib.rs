//! Exact computer-algebra toolkit for determinantal complexity.
//!
//! The crate covers sparse polynomial arithmetic over ℚ and 𝔽_p, affine
//! matrix maps and their determinants, a Buchberger Gröbner engine with
//! affine dimension, singular-locus codimension and the lower-bound
//! certificate `dc(f) >= codim Sing(f) + 1`, explicit determinantal
//! expressions (catalog, ABP conversion, coefficient equations), exhaustive
//! search over small prime fields, and a random-sampling harness for the
//! codimension law of determinantal hypersurfaces.

pub mod algebra;
pub mod error;
pub mod explore;
pub mod expressions;
pub mod groebner;
pub mod io;
pub mod linalg;
pub mod matforms;
pub mod search;
pub mod singularity;

pub use algebra::{Degree, Field, FieldElement, Monomial, Polynomial, VarSet};
pub use error::{CapKind, Error, ParseError, Result};
