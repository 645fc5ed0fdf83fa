use num_complex::Complex64;

use super::tripoly::{CompiledPoly, TriPoly, Var};
use crate::error::{Error, Result};

/// Smallest denominator magnitude accepted by [`RationalField::eval`].
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-300;

/// Exact quotient `num / den` of two [`TriPoly`] values. Not gcd-reduced.
#[derive(Clone, Debug)]
pub struct RationalField {
    num: TriPoly,
    den: TriPoly,
}

impl RationalField {
    pub fn new(num: TriPoly, den: TriPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if num.is_zero() {
            // the zero field is zero everywhere, including where `den` vanishes
            return Ok(Self::from_poly(num));
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: TriPoly) -> Self {
        Self {
            num: p,
            den: TriPoly::one(),
        }
    }

    pub fn num(&self) -> &TriPoly {
        &self.num
    }

    pub fn den(&self) -> &TriPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality as elements of the fraction field: `n1 d2 == n2 d1`.
    pub fn equivalent(&self, other: &RationalField) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Quotient rule; the result has denominator `den²`.
    pub fn derive(&self, v: Var) -> Self {
        let num = &(&self.num.derive(v) * &self.den) - &(&self.num * &self.den.derive(v));
        Self {
            num,
            den: &self.den * &self.den,
        }
    }

    /// Second derivative in `v` over `den³` (rather than the `den⁴` that two
    /// applications of [`Self::derive`] would produce).
    pub fn derive2(&self, v: Var) -> Self {
        let (n, d) = (&self.num, &self.den);
        let (n1, d1) = (n.derive(v), d.derive(v));
        let (n2, d2) = (n1.derive(v), d1.derive(v));
        let two = TriPoly::constant(2.into());
        let dd = d * d;
        let num = &(&(&n2 * &dd) - &(&(&two * &n1) * &(&d1 * d)))
            + &(&(&two * n) * &(&d1 * &d1))
            - &(&(n * &d2) * d);
        Self { num, den: &dd * d }
    }

    pub fn conj_involution(&self) -> Self {
        Self {
            num: self.num.conj_involution(),
            den: self.den.conj_involution(),
        }
    }

    pub fn eval(&self, z: Complex64, t: f64) -> Result<Complex64> {
        self.eval_with_floor(z, t, DEFAULT_DENOMINATOR_FLOOR)
    }

    pub fn eval_with_floor(&self, z: Complex64, t: f64, floor: f64) -> Result<Complex64> {
        self.compile_at(t).eval_with_floor(z, floor)
    }

    pub fn compile_at(&self, t: f64) -> CompiledField {
        CompiledField {
            num: self.num.compile_at(t),
            den: self.den.compile_at(t),
        }
    }
}

/// A [`RationalField`] frozen at one time value.
#[derive(Clone, Debug)]
pub struct CompiledField {
    num: CompiledPoly,
    den: CompiledPoly,
}

impl CompiledField {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with_floor(z, DEFAULT_DENOMINATOR_FLOOR)
    }

    pub fn eval_with_floor(&self, z: Complex64, floor: f64) -> Result<Complex64> {
        let d = self.den.eval(z);
        let magnitude = d.norm();
        if !(magnitude >= floor) {
            return Err(Error::DenominatorVanishes { magnitude, floor });
        }
        Ok(self.num.eval(z) / d)
    }
}
