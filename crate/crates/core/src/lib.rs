//! Exact computation of the spectrum, the order of reducibility and
//! compositional decompositions of rational functions `f = p/q` over `Q`.

pub mod analysis;
pub mod decomp;
pub mod error;
pub mod field;
pub mod irrcount;
pub mod linalg;
pub mod mpoly;
pub mod numfield;
pub mod parse;
pub mod ratfunc;
pub mod ratlambda;
pub mod spectrum;
pub mod upoly;

pub use error::Error;
pub use field::{ArithError, Field, Rationals};
pub use mpoly::{MPoly, Monomial, QPoly};
pub use num_rational::BigRational;
pub use numfield::NumberField;
pub use upoly::UniPoly;
