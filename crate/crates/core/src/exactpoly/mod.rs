//! Exact polynomial algebra over the Gaussian rationals.

pub mod gaussian;
pub mod parse;
pub mod rational_field;
pub mod tripoly;
pub mod unipoly;

pub use gaussian::GaussianRational;
pub use parse::poly;
pub use rational_field::{CompiledField, RationalField, DEFAULT_DENOMINATOR_FLOOR};
pub use tripoly::{CompiledPoly, Exponent, TriPoly, Var};
pub use unipoly::UniPoly;
