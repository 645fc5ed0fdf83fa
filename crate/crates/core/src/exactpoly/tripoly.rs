//! Sparse polynomials in `(z, w, t)` over the Gaussian rationals.
//!
//! `w` stands for the complex conjugate of `z` and `t` is a real variable, so
//! [`TriPoly::conj_involution`] swaps the `z`/`w` exponents, conjugates every
//! coefficient and leaves `t` alone.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::{format_ratio, parse_ratio, GaussianRational};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z,
    W,
    T,
}

/// Exponent triple; the derived `Ord` is lexicographic in `(z, w, t)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent {
    pub z: u32,
    pub w: u32,
    pub t: u32,
}

impl Exponent {
    pub fn new(z: u32, w: u32, t: u32) -> Self {
        Self { z, w, t }
    }

    pub fn get(&self, v: Var) -> u32 {
        match v {
            Var::Z => self.z,
            Var::W => self.w,
            Var::T => self.t,
        }
    }

    fn with(mut self, v: Var, e: u32) -> Self {
        match v {
            Var::Z => self.z = e,
            Var::W => self.w = e,
            Var::T => self.t = e,
        }
        self
    }

    fn plus(self, o: Exponent) -> Self {
        Self::new(self.z + o.z, self.w + o.w, self.t + o.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponent, GaussianRational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0, 0)
    }

    pub fn monomial(c: GaussianRational, z: u32, w: u32, t: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Exponent::new(z, w, t), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let e = Exponent::default().with(v, 1);
        Self::monomial(GaussianRational::one(), e.z, e.w, e.t)
    }

    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn w() -> Self {
        Self::var(Var::W)
    }

    pub fn t() -> Self {
        Self::var(Var::T)
    }

    /// Builds a canonical polynomial, merging repeated exponents and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, GaussianRational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> GaussianRational {
        self.terms.get(&e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == Exponent::default())
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e.get(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.z + e.w + e.t)
            .max()
            .unwrap_or(0)
    }

    /// True iff no term carries a positive power of `v`.
    pub fn is_independent_of(&self, v: Var) -> bool {
        self.terms.keys().all(|e| e.get(v) == 0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(e, c)| {
            let k = e.get(v);
            (k > 0).then(|| (e.with(v, k - 1), c * &GaussianRational::from(k as i64)))
        }))
    }

    /// Antiderivative in `v` with zero constant term in `v`.
    pub fn antiderive(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let k = e.get(v) + 1;
            let inv = BigRational::new(BigInt::one(), BigInt::from(k));
            (e.with(v, k), c.scale_real(&inv))
        }))
    }

    /// Swaps `z`/`w` exponents and conjugates coefficients; `t` is fixed.
    pub fn conj_involution(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.w, e.z, e.t), c.conj()))
                .collect(),
        }
    }

    /// Exact substitution `v := value`.
    pub fn substitute(&self, v: Var, value: &GaussianRational) -> Self {
        let maxk = self.degree_in(v);
        let powers: Vec<GaussianRational> = std::iter::successors(Some(GaussianRational::one()), |p| {
            Some(p * value)
        })
        .take(maxk as usize + 1)
        .collect();
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (e.with(v, 0), c * &powers[e.get(v) as usize])),
        )
    }

    /// Exact substitution `z := z + z0`, `w := w + conj(z0)`.
    pub fn shift(&self, z0: &GaussianRational) -> Self {
        let zs = &Self::z() + &Self::constant(z0.clone());
        let ws = &Self::w() + &Self::constant(z0.conj());
        let zp = powers_of(&zs, self.degree_in(Var::Z));
        let wp = powers_of(&ws, self.degree_in(Var::W));
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let tpart = Self::monomial(c.clone(), 0, 0, e.t);
            let prod = &(&zp[e.z as usize] * &wp[e.w as usize]) * &tpart;
            out = &out + &prod;
        }
        out
    }

    /// Double-precision evaluation with `w := conj(z)`.
    pub fn eval(&self, z: Complex64, t: f64) -> Complex64 {
        self.compile_at(t).eval(z)
    }

    /// Collapses the `t` dependence at a fixed real time into a dense
    /// `(z, w)` coefficient table for repeated Horner evaluation.
    pub fn compile_at(&self, t: f64) -> CompiledPoly {
        let dz = self.degree_in(Var::Z) as usize;
        let dw = self.degree_in(Var::W) as usize;
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); dw + 1]; dz + 1];
        if self.is_zero() {
            return CompiledPoly { rows: Vec::new() };
        }
        for (e, c) in &self.terms {
            rows[e.z as usize][e.w as usize] += c.to_complex64() * t.powi(e.t as i32);
        }
        CompiledPoly { rows }
    }

    /// Newline-separated `deg_z deg_w deg_t re_num/re_den im_num/im_den`
    /// records in lexicographic exponent order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            s.push_str(&format!(
                "{} {} {} {} {}\n",
                e.z,
                e.w,
                e.t,
                format_ratio(&c.re),
                format_ratio(&c.im)
            ));
        }
        s
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut p = Self::zero();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!(
                    "line {}: expected 5 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let deg = |s: &str| {
                s.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let e = Exponent::new(deg(fields[0])?, deg(fields[1])?, deg(fields[2])?);
            let c = GaussianRational::new(parse_ratio(fields[3])?, parse_ratio(fields[4])?);
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn powers_of(p: &TriPoly, k: u32) -> Vec<TriPoly> {
    let mut out = vec![TriPoly::one()];
    for i in 0..k as usize {
        let next = &out[i] * p;
        out.push(next);
    }
    out
}

/// A [`TriPoly`] frozen at one time value, ready for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    rows: Vec<Vec<Complex64>>,
}

impl CompiledPoly {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.rows.iter().rev() {
            let mut inner = Complex64::new(0.0, 0.0);
            for c in row.iter().rev() {
                inner = inner * w + c;
            }
            acc = acc * z + inner;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|c| *c == Complex64::new(0.0, 0.0)))
    }
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: &TriPoly) -> TriPoly {
        let mut acc: BTreeMap<Exponent, GaussianRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let prod = ca * cb;
                let slot = acc.entry(ea.plus(*eb)).or_insert_with(GaussianRational::zero);
                *slot += &prod;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TriPoly { terms: acc }
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        self.scale(&GaussianRational::from(-1))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for TriPoly {
            type Output = TriPoly;
            fn $m(self, rhs: TriPoly) -> TriPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TriPoly> for TriPoly {
            type Output = TriPoly;
            fn $m(self, rhs: &TriPoly) -> TriPoly {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        -&self
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest degree first reads more naturally
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut vars = String::new();
            for (name, k) in [("z", e.z), ("w", e.w), ("t", e.t)] {
                match k {
                    0 => {}
                    1 => vars.push_str(name),
                    _ => vars.push_str(&format!("{name}^{k}")),
                }
            }
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{c}*{vars}")?;
            }
        }
        Ok(())
    }
}

/// Shorthand for a Gaussian-rational constant `re + im·i` with integer parts.
pub fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ratios(re, 1, im, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> TriPoly {
        TriPoly::z()
    }
    fn t() -> TriPoly {
        TriPoly::t()
    }
    fn c(re: i64, im: i64) -> TriPoly {
        TriPoly::constant(gi(re, im))
    }

    #[test]
    fn additive_inverse_is_empty() {
        let z2 = z().pow(2);
        assert!((&z2 + &(-&z2)).is_zero());
        assert_eq!((&z2 - &z2).len(), 0);
    }

    #[test]
    fn product_matches_obs23_h_prime() {
        let fp = &(&c(2, 0) * &z()) - &c(1, 0);
        let gp = &(&c(3, 0) * &z().pow(2)) - &(&c(1, 0) + &(&c(0, 6) * &t()));
        let one_6it = &c(1, 0) + &(&c(0, 6) * &t());
        let expected = &(&(&(&c(6, 0) * &z().pow(3)) - &(&c(3, 0) * &z().pow(2)))
            - &(&(&c(2, 0) * &one_6it) * &z()))
            + &one_6it;
        assert_eq!(&fp * &gp, expected);
    }

    #[test]
    fn derivatives_of_remark22_data() {
        let f = &z().pow(2) + &(&c(0, 2) * &t());
        assert_eq!(f.derive(Var::T), c(0, 2));
        let g = &z().pow(3) - &(&(&c(0, 6) * &t()) * &z());
        let gp = &(&c(3, 0) * &z().pow(2)) - &(&c(0, 6) * &t());
        assert_eq!(g.derive(Var::Z), gp);
        assert!(c(7, -3).derive(Var::Z).is_zero());
    }

    #[test]
    fn antiderive_obs23_h_prime() {
        let one_6it = &c(1, 0) + &(&c(0, 6) * &t());
        let hp = &(&(&(&c(6, 0) * &z().pow(3)) - &(&c(3, 0) * &z().pow(2)))
            - &(&(&c(2, 0) * &one_6it) * &z()))
            + &one_6it;
        let three_halves = TriPoly::constant(GaussianRational::from_ratios(3, 2, 0, 1));
        let expected = &(&(&(&three_halves * &z().pow(4)) - &z().pow(3))
            - &(&one_6it * &z().pow(2)))
            + &(&one_6it * &z());
        assert_eq!(hp.antiderive(Var::Z), expected);
        assert!(TriPoly::zero().antiderive(Var::Z).is_zero());
    }

    #[test]
    fn conj_of_remark22_g() {
        let g = &z().pow(3) - &(&(&c(0, 6) * &t()) * &z());
        let w = TriPoly::w();
        let expected = &w.pow(3) + &(&(&c(0, 6) * &t()) * &w);
        assert_eq!(g.conj_involution(), expected);
        let real_t = &(&c(3, 0) * &t().pow(2)) + &c(-1, 0);
        assert_eq!(real_t.conj_involution(), real_t);
    }

    #[test]
    fn eval_basics() {
        let zw = &z() * &TriPoly::w();
        let v = zw.eval(Complex64::new(1.0, 1.0), 0.0);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let h = &(&(&TriPoly::constant(GaussianRational::from_ratios(3, 2, 0, 1)) * &z().pow(4))
            - &(&(&c(0, 6) * &t()) * &z().pow(2)))
            + &(&c(6, 0) * &t().pow(2));
        let v = h.eval(Complex64::new(0.0, 0.0), 1.0);
        assert!((v - Complex64::new(6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn independence() {
        let f = &z().pow(2) + &(&c(0, 2) * &t());
        assert!(f.is_independent_of(Var::W));
        assert!(!(&z() * &TriPoly::w()).is_independent_of(Var::W));
        assert!(TriPoly::zero().is_independent_of(Var::W));
    }

    #[test]
    fn shift_then_eval_agrees() {
        let p = &(&z().pow(3) * &TriPoly::w()) - &(&c(2, 1) * &t());
        let z0 = GaussianRational::from_ratios(1, 2, -1, 3);
        let shifted = p.shift(&z0);
        let zeta = Complex64::new(0.3, -0.7);
        let lhs = shifted.eval(zeta, 0.4);
        let rhs = p.eval(zeta + z0.to_complex64(), 0.4);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let p = &(&TriPoly::constant(GaussianRational::from_ratios(-1, 2, 3, 4)) * &z().pow(2))
            + &(&TriPoly::w() * &t());
        let s = p.to_text();
        assert_eq!(s, "0 1 1 1/1 0/1\n2 0 0 -1/2 3/4\n");
        assert_eq!(TriPoly::from_text(&s).unwrap(), p);
        assert!(TriPoly::from_text("1 2 3 1/1").is_err());
        assert_eq!(TriPoly::zero().to_text(), "");
    }
}
