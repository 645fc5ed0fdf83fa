//! Singular set of `U`: common zeros of `g` and `h`.
//!
//! `|g|² + |h|²` vanishes exactly where `g` and `h` do, so singular times are
//! the real roots of `Res_z(g, h)` and singular points at a fixed time are the
//! roots of `gcd(g(·, t0), h(·, t0))`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::aberth::{aberth_roots, relative_residual};
use super::realroots::{isolate_real_roots, simplest_between, RealRoot};
use super::resultant::resultant_in_z;
use crate::error::{Error, Result};
use crate::exactpoly::gaussian::GaussianRational;
use crate::exactpoly::unipoly::{slice_at_time, z_coefficients_in_t};
use crate::exactpoly::{TriPoly, UniPoly, Var};
use crate::moutard::MoutardTriple;

/// Width to which real roots of the resultant are isolated.
pub const ROOT_WIDTH: f64 = 1e-10;
/// Relative residual certifying a numerically found singular point.
pub const ROOT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub z0: Complex64,
    /// Exact position when it is a Gaussian rational.
    pub z0_exact: Option<GaussianRational>,
    pub t0: BigRational,
    pub ord_g: u32,
    pub ord_h: u32,
    /// Vanishing order of `f_z g - h`; `None` when it vanishes identically on the slice.
    pub ord_num: Option<u32>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SingularTimes {
    /// `Res_z(g, h)` as an exact polynomial in `t`.
    pub resultant: UniPoly,
    /// Real roots of the resultant, increasing.
    pub real_roots: Vec<RealRoot>,
}

pub fn singular_times(triple: &MoutardTriple) -> Result<SingularTimes> {
    let (g, h) = (triple.g(), triple.h());
    if g.degree_in(Var::Z) == 0 || h.degree_in(Var::Z) == 0 {
        return Err(Error::InvalidInput("g and h must be nonconstant in z".into()));
    }
    let resultant = resultant_in_z(&z_coefficients_in_t(g)?, &z_coefficients_in_t(h)?)?;
    if resultant.is_zero() {
        return Err(Error::ResultantZeroPolynomial);
    }
    // t is real, so R(t) = 0 iff both coefficient parts vanish.
    let (re, im) = resultant.split_real_imag();
    let common = if im.is_zero() {
        re
    } else if re.is_zero() {
        im
    } else {
        re.gcd(&im)
    };
    let real_roots = isolate_real_roots(&common, ROOT_WIDTH);
    Ok(SingularTimes {
        resultant,
        real_roots,
    })
}

/// Exact vanishing order of a holomorphic `p(·, t0)` at `z0`.
pub fn vanishing_order(p: &TriPoly, z0: &GaussianRational, t0: &BigRational) -> Result<u32> {
    slice_at_time(p, t0)?.root_multiplicity(z0)
}

/// As [`vanishing_order`], but `z0` must actually be a zero.
pub fn vanishing_order_required(p: &TriPoly, z0: &GaussianRational, t0: &BigRational) -> Result<u32> {
    match vanishing_order(p, z0, t0)? {
        0 => Err(Error::NotAZero),
        k => Ok(k),
    }
}

/// Splits the square-free `q` into coprime pieces on which the multiplicity
/// of each polynomial in `polys` is constant. `None` marks a polynomial that
/// vanishes identically.
fn partition_by_multiplicity(q: &UniPoly, polys: &[UniPoly]) -> Vec<(UniPoly, Vec<Option<u32>>)> {
    let mut pieces = vec![(q.clone(), Vec::new())];
    for p in polys {
        if p.is_zero() {
            for (_, ords) in pieces.iter_mut() {
                ords.push(None);
            }
            continue;
        }
        let parts = p.squarefree_decomposition();
        let mut next = Vec::new();
        for (piece, ords) in pieces {
            let mut rest = piece;
            for (j, s) in parts.iter().enumerate() {
                let d = rest.gcd(s);
                if !d.is_constant() {
                    rest = rest.div_rem(&d).0;
                    let mut o = ords.clone();
                    o.push(Some(j as u32 + 1));
                    next.push((d, o));
                }
            }
            if !rest.is_constant() {
                let mut o = ords;
                o.push(Some(0));
                next.push((rest.monic(), o));
            }
        }
        pieces = next;
    }
    pieces
}

fn rationalize(z: Complex64, piece: &UniPoly) -> Option<GaussianRational> {
    let near = |x: f64| {
        let lo = BigRational::from_float(x - 1e-9 * (1.0 + x.abs()))?;
        let hi = BigRational::from_float(x + 1e-9 * (1.0 + x.abs()))?;
        Some(simplest_between(&lo, &hi))
    };
    let cand = GaussianRational::new(near(z.re)?, near(z.im)?);
    piece.eval_exact(&cand).is_zero().then_some(cand)
}

pub fn singular_points_at(triple: &MoutardTriple, t0: &BigRational) -> Result<Vec<SingularPoint>> {
    let g0 = slice_at_time(triple.g(), t0)?;
    let h0 = slice_at_time(triple.h(), t0)?;
    let n0 = slice_at_time(&triple.numerator_factor(), t0)?;
    if g0.is_zero() && h0.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let common = g0.gcd(&h0);
    if common.is_constant() {
        return Ok(Vec::new());
    }
    let q = common.squarefree_part();
    let mut points = Vec::new();
    for (piece, ords) in partition_by_multiplicity(&q, &[g0, h0, n0]) {
        let coeffs = piece.to_complex();
        for z in aberth_roots(&coeffs, ROOT_RESIDUAL)? {
            let z0_exact = rationalize(z, &piece);
            let z0 = z0_exact.as_ref().map_or(z, |e| e.to_complex64());
            points.push(SingularPoint {
                z0,
                z0_exact,
                t0: t0.clone(),
                ord_g: ords[0].unwrap_or(0),
                ord_h: ords[1].unwrap_or(0),
                ord_num: ords[2],
                residual: relative_residual(&coeffs, z0),
            });
        }
    }
    points.sort_by(|a, b| {
        a.z0.re
            .total_cmp(&b.z0.re)
            .then(a.z0.im.total_cmp(&b.z0.im))
    });
    Ok(points)
}
