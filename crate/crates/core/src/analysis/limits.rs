//! Directional limits at indeterminacy points and large-|z| decay fits.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactpoly::{CompiledField, GaussianRational, RationalField, Var};
use crate::moutard::SolutionField;

/// Default extrapolation radii `10^-1 … 10^-5`.
pub const DEFAULT_RAY_RADII: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
/// Agreement required between the last two extrapolants.
pub const RAY_TOLERANCE: f64 = 1e-6;
/// Order of the Neville extrapolation polynomial.
pub const EXTRAPOLATION_ORDER: usize = 3;
const MIN_RADIUS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RayLimit {
    pub theta: f64,
    pub limit: Complex64,
    pub converged: bool,
    pub residual: f64,
}

/// `U` re-expanded around an exact base point: the numerator and denominator
/// are shifted to `ζ = z - z0` and frozen at `t0`, so values near `z0` are
/// computed without cancellation.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    field: CompiledField,
}

impl LocalExpansion {
    pub fn new(u: &RationalField, z0: &GaussianRational, t0: &BigRational) -> Self {
        let t = GaussianRational::real(t0.clone());
        let num = u.num().substitute(Var::T, &t).shift(z0);
        let den = u.den().substitute(Var::T, &t).shift(z0);
        let local = RationalField::new(num, den).expect("shift preserves a nonzero denominator");
        Self {
            field: local.compile_at(0.0),
        }
    }

    pub fn from_floats(u: &RationalField, z0: Complex64, t0: f64) -> Result<Self> {
        let z0 = GaussianRational::from_complex64(z0)?;
        let t0 = BigRational::from_float(t0)
            .ok_or_else(|| Error::InvalidInput("non-finite time".into()))?;
        Ok(Self::new(u, &z0, &t0))
    }

    /// `U(z0 + ζ, t0)`.
    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        self.field.eval(zeta)
    }
}

/// Value at `0` of the polynomial interpolating `(xs[k], ys[k])` (Neville).
fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xa, xb) = (xs[i], xs[i + level]);
            p[i] = (p[i] * (-xb) + p[i + 1] * xa) / (xa - xb);
        }
    }
    p[0]
}

pub fn ray_limit_local(local: &LocalExpansion, theta: f64, radii: &[f64]) -> Result<RayLimit> {
    if radii.is_empty()
        || radii.iter().any(|&r| !(r > 0.0))
        || radii.windows(2).any(|w| w[1] >= w[0])
        || *radii.last().unwrap() < MIN_RADIUS
    {
        return Err(Error::InvalidInput(
            "radii must be positive, strictly decreasing and at least 1e-6".into(),
        ));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let values = radii
        .iter()
        .map(|&eps| local.eval(dir * eps))
        .collect::<Result<Vec<_>>>()?;
    let extrapolants: Vec<Complex64> = (0..radii.len())
        .map(|k| {
            let start = k.saturating_sub(EXTRAPOLATION_ORDER);
            neville_at_zero(&radii[start..=k], &values[start..=k])
        })
        .collect();
    let last = *extrapolants.last().unwrap();
    let residual = if extrapolants.len() >= 2 {
        (last - extrapolants[extrapolants.len() - 2]).norm()
    } else {
        f64::INFINITY
    };
    let converged = residual < RAY_TOLERANCE * last.norm().max(1.0);
    if !converged {
        return Err(Error::NotConverged {
            sequence: extrapolants.iter().map(|c| (c.re, c.im)).collect(),
        });
    }
    Ok(RayLimit {
        theta,
        limit: last,
        converged,
        residual,
    })
}

/// Limit of `U(z0 + ε e^{iθ}, t0)` as `ε → 0`, extrapolated from `radii`.
pub fn ray_limit(s: &SolutionField, z0: Complex64, t0: f64, theta: f64, radii: &[f64]) -> Result<RayLimit> {
    let local = LocalExpansion::from_floats(s.u(), z0, t0)?;
    ray_limit_local(&local, theta, radii)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    /// Slowest (largest) slope over the sampled directions.
    pub exponent: f64,
    /// `(theta, slope, rms residual of the log-log fit)`.
    pub per_theta: Vec<(f64, f64, f64)>,
}

/// `n` logarithmically spaced radii from `lo` to `hi`.
pub fn log_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Least-squares slope of `log|U|` against `log|z|`. `None` when `U`
/// vanishes on the samples (decay is not applicable).
pub fn decay_exponent(s: &SolutionField, t0: f64, radii: &[f64], thetas: &[f64]) -> Result<Option<DecayFit>> {
    if s.is_trivial() {
        return Ok(None);
    }
    let field = s.u().compile_at(t0);
    let mut per_theta = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let mut pts = Vec::with_capacity(radii.len());
        for &r in radii {
            let u = field.eval(Complex64::from_polar(r, theta))?;
            if u.norm() == 0.0 {
                return Ok(None);
            }
            pts.push((r.ln(), u.norm().ln()));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let rms = (pts
            .iter()
            .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        per_theta.push((theta, slope, rms));
    }
    let exponent = per_theta
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Some(DecayFit {
        exponent,
        per_theta,
    }))
}
