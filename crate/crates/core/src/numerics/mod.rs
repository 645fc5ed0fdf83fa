//! Double-precision verification: grid sampling, mass quadrature, the
//! spectral solve for `V` and the Davey–Stewartson II residual.

mod mass;
mod residual;
mod spectral;

pub use mass::{mass, mass_scan, mass_with, MassOptions, MassReport, MassScan};
pub use residual::{conjugate_residual, ds2_residual, ResidualContext, ResidualReport, DEFAULT_WINDOW};
pub use spectral::{fft2, spectral_d, spectral_dbar, solve_v, wavenumbers};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactpoly::RationalField;

/// Largest tolerated fraction of masked (singular) nodes.
pub const MAX_MASKED_FRACTION: f64 = 1e-3;

/// Square periodic grid on `[-L, L)²` with `n` nodes per axis.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidInput("grid half-width must be positive".into()));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid size {n} must be a power of two >= 64"
            )));
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Node at column `ix`, row `iy`.
    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(self.coord(ix), self.coord(iy))
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indices of the nearest node to `z`.
    pub fn nearest(&self, z: Complex64) -> (usize, usize) {
        let idx = |x: f64| {
            (((x + self.half_width) / self.spacing()).round() as i64).clamp(0, self.n as i64 - 1) as usize
        };
        (idx(z.re), idx(z.im))
    }
}

/// Samples on a [`Grid`], row-major (`index = iy·n + ix`).
#[derive(Clone, Debug)]
pub struct GridField {
    pub values: Vec<Complex64>,
    pub mask: Vec<bool>,
    pub grid: Grid,
    pub t: f64,
}

impl GridField {
    pub fn from_values(values: Vec<Complex64>, grid: Grid, t: f64) -> Self {
        assert_eq!(values.len(), grid.len());
        let mask = vec![false; values.len()];
        Self {
            values,
            mask,
            grid,
            t,
        }
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.grid.n() + ix]
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> GridField {
        GridField {
            values: self.values.par_iter().map(|v| f(*v)).collect(),
            mask: self.mask.clone(),
            grid: self.grid,
            t: self.t,
        }
    }
}

/// Pointwise evaluation with `w := conj(node)`. Nodes where the denominator
/// vanishes are masked (value 0).
pub fn eval_grid(field: &RationalField, grid: &Grid, t: f64) -> Result<GridField> {
    let compiled = field.compile_at(t);
    let n = grid.n();
    let (values, mask): (Vec<Complex64>, Vec<bool>) = (0..grid.len())
        .into_par_iter()
        .map(|k| match compiled.eval(grid.node(k % n, k / n)) {
            Ok(v) => (v, false),
            Err(_) => (Complex64::new(0.0, 0.0), true),
        })
        .unzip();
    let masked = mask.iter().filter(|m| **m).count();
    if masked as f64 > MAX_MASKED_FRACTION * grid.len() as f64 {
        return Err(Error::TooManyMaskedNodes {
            masked,
            total: grid.len(),
            limit: MAX_MASKED_FRACTION,
        });
    }
    Ok(GridField {
        values,
        mask,
        grid: *grid,
        t,
    })
}
