//! Exact construction and numerical verification of Moutard-transformation
//! solutions of the Davey–Stewartson II equation
//!
//! ```text
//! U_t = i(U_zz + U_z̄z̄ + 2(V + V̄)U),   V_z̄ = (|U|²)_z
//! ```
//!
//! built from polynomial solutions `f`, `g` of `f_t = i f_zz`, `g_t = -i g_zz`.
//! The algebra ([`exactpoly`], [`heat`], [`moutard`]) is exact over the
//! Gaussian rationals; [`analysis`] locates singularities and [`numerics`]
//! checks mass and the PDE residual in double precision.

pub mod analysis;
pub mod error;
pub mod exactpoly;
pub mod heat;
pub mod moutard;
pub mod numerics;

pub use error::{Error, Result};
