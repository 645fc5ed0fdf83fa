//! Dense univariate polynomials over the Gaussian rationals.
//!
//! Used for slices of [`TriPoly`] values (fixed `t`, or coefficients in `t`)
//! where Euclidean algorithms are needed: gcd, square-free decomposition,
//! resultants and real-root isolation.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::tripoly::{Exponent, TriPoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    /// Coefficients, lowest degree first, no trailing zeros.
    coeffs: Vec<GaussianRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `x - a`
    pub fn linear_root(a: &GaussianRational) -> Self {
        Self::new(vec![-a, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from(k as i64))
                .collect(),
        )
    }

    pub fn eval_exact(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex64())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex64()).collect()
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let sub = &c * dc;
                    rem[k + j] -= &sub;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(d);
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns monic `s_1, …, s_k` with
    /// `self = lead · ∏ s_j^j` and each `s_j` square-free, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<UniPoly> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            out.push(a);
            if b.is_constant() {
                break;
            }
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|p| p.is_constant()) {
            out.pop();
        }
        out
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    /// Multiplicity of `x0` as a root, by repeated exact division by `x - x0`.
    pub fn root_multiplicity(&self, x0: &GaussianRational) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let lin = UniPoly::linear_root(x0);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return Ok(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Real and imaginary coefficient parts: `self = re + i·im` for real argument.
    pub fn split_real_imag(&self) -> (UniPoly, UniPoly) {
        let re = self.coeffs.iter().map(|c| GaussianRational::real(c.re.clone())).collect();
        let im = self.coeffs.iter().map(|c| GaussianRational::real(c.im.clone())).collect();
        (UniPoly::new(re), UniPoly::new(im))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Exact value at a rational point, for real-coefficient polynomials
    /// (the imaginary part is dropped).
    pub fn eval_real(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + &c.re)
    }

    /// Views a polynomial independent of `w` and `t` (or of the variables
    /// other than `v`) as univariate in `v`.
    pub fn from_tripoly(p: &TriPoly, v: Var) -> Result<UniPoly> {
        let mut coeffs = vec![GaussianRational::zero(); p.degree_in(v) as usize + 1];
        for (e, c) in p.terms() {
            let k = e.get(v);
            if *e != exponent_only(v, k) {
                return Err(Error::InvalidInput(format!(
                    "polynomial depends on variables other than {v:?}"
                )));
            }
            coeffs[k as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_tripoly(&self, v: Var) -> TriPoly {
        TriPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (exponent_only(v, k as u32), c.clone())),
        )
    }
}

fn exponent_only(v: Var, k: u32) -> Exponent {
    match v {
        Var::Z => Exponent::new(k, 0, 0),
        Var::W => Exponent::new(0, k, 0),
        Var::T => Exponent::new(0, 0, k),
    }
}

/// Coefficients of a `w`-free polynomial in powers of `z`, each a polynomial in `t`.
pub fn z_coefficients_in_t(p: &TriPoly) -> Result<Vec<UniPoly>> {
    if !p.is_independent_of(Var::W) {
        return Err(Error::InvalidInput("polynomial depends on w".into()));
    }
    let dz = p.degree_in(Var::Z) as usize;
    let dt = p.degree_in(Var::T) as usize;
    let mut table = vec![vec![GaussianRational::zero(); dt + 1]; dz + 1];
    for (e, c) in p.terms() {
        table[e.z as usize][e.t as usize] = c.clone();
    }
    Ok(table.into_iter().map(UniPoly::new).collect())
}

/// Slice of a `w`-free polynomial at an exact time, as a polynomial in `z`.
pub fn slice_at_time(p: &TriPoly, t0: &BigRational) -> Result<UniPoly> {
    if !p.is_independent_of(Var::W) {
        return Err(Error::InvalidInput("polynomial depends on w".into()));
    }
    let s = p.substitute(Var::T, &GaussianRational::real(t0.clone()));
    UniPoly::from_tripoly(&s, Var::Z)
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
