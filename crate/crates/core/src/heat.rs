//! Holomorphic polynomial solutions of `f_t = i f_zz` and `g_t = -i g_zz`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{GaussianRational, TriPoly, Var};

/// Default bound on generator order, limiting factorial coefficient growth.
pub const DEFAULT_DEGREE_CAP: u32 = 16;

/// Which of the two linear evolutions a polynomial obeys.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeatSign {
    /// `∂f/∂t = i ∂²f/∂z²`
    #[serde(rename = "+")]
    Plus,
    /// `∂g/∂t = -i ∂²g/∂z²`
    #[serde(rename = "-")]
    Minus,
}

impl HeatSign {
    /// `σ·i` with `σ = ±1`.
    pub fn unit(self) -> GaussianRational {
        match self {
            HeatSign::Plus => GaussianRational::i(),
            HeatSign::Minus => -GaussianRational::i(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            HeatSign::Plus => HeatSign::Minus,
            HeatSign::Minus => HeatSign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            HeatSign::Plus => "+",
            HeatSign::Minus => "-",
        }
    }
}

/// Exact linear combination `Σ coeff · heat_poly(order, sign)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatCombination {
    pub sign: HeatSign,
    pub terms: Vec<(u32, GaussianRational)>,
}

impl HeatCombination {
    pub fn new(sign: HeatSign, terms: Vec<(u32, GaussianRational)>) -> Self {
        Self { sign, terms }
    }

    /// Single generator with unit coefficient.
    pub fn generator(order: u32, sign: HeatSign) -> Self {
        Self::new(sign, vec![(order, GaussianRational::one())])
    }

    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|(k, _)| *k).max().unwrap_or(0)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// The generator of order `m`:
/// `Σ_j m!/((m-2j)! j!) (σ i t)^j z^{m-2j}`, leading term `z^m`.
pub fn heat_poly(m: u32, sign: HeatSign) -> TriPoly {
    let unit = sign.unit();
    TriPoly::from_terms((0..=m / 2).map(|j| {
        let c = factorial(m) / (factorial(m - 2 * j) * factorial(j));
        let coeff = &GaussianRational::from(c) * &unit.pow(j);
        (crate::exactpoly::Exponent::new(m - 2 * j, 0, j), coeff)
    }))
}

/// As [`heat_poly`], refusing orders above `cap`.
pub fn heat_poly_capped(m: u32, sign: HeatSign, cap: u32) -> Result<TriPoly> {
    if m > cap {
        return Err(Error::DegreeCap { order: m, cap });
    }
    Ok(heat_poly(m, sign))
}

/// Exact check of `p_t = σ i p_zz` together with independence of `w`.
pub fn verify_evolution(p: &TriPoly, sign: HeatSign) -> bool {
    if !p.is_independent_of(Var::W) {
        return false;
    }
    let rhs = p.derive(Var::Z).derive(Var::Z).scale(&sign.unit());
    (&p.derive(Var::T) - &rhs).is_zero()
}

pub fn realize(c: &HeatCombination) -> TriPoly {
    c.terms.iter().fold(TriPoly::zero(), |acc, (k, coeff)| {
        if coeff.is_zero() {
            acc
        } else {
            &acc + &heat_poly(*k, c.sign).scale(coeff)
        }
    })
}

pub fn realize_capped(c: &HeatCombination, cap: u32) -> Result<TriPoly> {
    if c.max_order() > cap {
        return Err(Error::DegreeCap {
            order: c.max_order(),
            cap,
        });
    }
    Ok(realize(c))
}
