//! Resultants in `z` of polynomials whose coefficients are polynomials in `t`.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactpoly::{GaussianRational, UniPoly};

/// Determinant by fraction-free (Bareiss) elimination. Entries live in the
/// integral domain `ℚ(i)[t]`; every division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<UniPoly>>) -> Result<UniPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UniPoly::one());
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(UniPoly::zero());
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Sylvester matrix of `a` and `b`, given as coefficient lists in `z`
/// (lowest degree first), with entries in `ℚ(i)[t]`.
pub fn sylvester_matrix(a: &[UniPoly], b: &[UniPoly]) -> Vec<Vec<UniPoly>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let size = da + db;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..db {
        let mut row = vec![UniPoly::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..da {
        let mut row = vec![UniPoly::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res_z(a, b)` as a polynomial in `t`. Inputs are coefficient lists in `z`
/// with nonzero leading entries.
pub fn resultant_in_z(a: &[UniPoly], b: &[UniPoly]) -> Result<UniPoly> {
    bareiss_determinant(sylvester_matrix(a, b))
}

/// Resultant of two univariate polynomials over `ℚ(i)` by the Euclidean
/// recurrence `res(a, b) = (-1)^{deg a·deg b} lc(b)^{deg a - deg r} res(b, r)`.
pub fn resultant_univariate(a: &UniPoly, b: &UniPoly) -> GaussianRational {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return GaussianRational::zero();
    };
    if db == 0 {
        return b.lead().pow(da as u32);
    }
    if da == 0 {
        return a.lead().pow(db as u32);
    }
    let r = a.div_rem(b).1;
    let Some(dr) = r.degree() else {
        return GaussianRational::zero();
    };
    let sign = if (da * db) % 2 == 1 {
        -GaussianRational::one()
    } else {
        GaussianRational::one()
    };
    &(&sign * &b.lead().pow((da - dr) as u32)) * &resultant_univariate(b, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{poly, unipoly::z_coefficients_in_t, Var};
    use num_complex::Complex64;

    fn zp(s: &str) -> UniPoly {
        UniPoly::from_tripoly(&poly(s), Var::Z).unwrap()
    }

    #[test]
    fn univariate_matches_root_product() {
        // res(a, b) = lc(a)^deg b · Π b(α) over roots α of a
        let a = zp("2 (z - 1)(z + 2)(z - i)");
        let b = zp("z^2 + 3z - 1/2");
        let expected = {
            let lc = Complex64::new(4.0, 0.0); // 2^deg b
            [1.0, -2.0]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .chain([Complex64::new(0.0, 1.0)])
                .fold(lc, |acc, r| acc * b.eval(r))
        };
        let got = resultant_univariate(&a, &b).to_complex64();
        assert!((got - expected).norm() < 1e-12 * expected.norm());
        assert!(resultant_univariate(&zp("(z-1)(z+3)"), &zp("(z-1) z")).is_zero());
    }

    #[test]
    fn bareiss_agrees_with_euclid_on_constants() {
        let a = zp("3 z^3 - z + 7i");
        let b = zp("z^2 - 2i z + 5/3");
        let lift = |p: &UniPoly| -> Vec<UniPoly> {
            p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect()
        };
        let det = resultant_in_z(&lift(&a), &lift(&b)).unwrap();
        assert_eq!(det, UniPoly::constant(resultant_univariate(&a, &b)));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let c = |n: i64| UniPoly::constant(n.into());
        let m = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        assert_eq!(bareiss_determinant(m).unwrap(), c(-1));
        let singular = vec![vec![c(0), c(1)], vec![c(0), c(2)]];
        assert!(bareiss_determinant(singular).unwrap().is_zero());
    }

    #[test]
    fn parametric_resultant_specializes() {
        let g = poly("z^3 - 6itz - z");
        let h = poly("3/2 z^4 - z^3 - (1+6it) z^2 + (1+6it) z - 2it + 6t^2 - 1/2");
        let r = resultant_in_z(
            &z_coefficients_in_t(&g).unwrap(),
            &z_coefficients_in_t(&h).unwrap(),
        )
        .unwrap();
        for t0 in [0i64, 1, -2, 3] {
            let tq = num_rational::BigRational::from_integer(t0.into());
            let gs = crate::exactpoly::unipoly::slice_at_time(&g, &tq).unwrap();
            let hs = crate::exactpoly::unipoly::slice_at_time(&h, &tq).unwrap();
            assert_eq!(r.eval_exact(&tq.clone().into()), resultant_univariate(&gs, &hs));
        }
    }
}
