use num_complex::Complex64;
use rayon::prelude::*;

use super::{eval_grid, solve_v, Grid, GridField};
use crate::error::Result;
use crate::exactpoly::RationalField;
use crate::moutard::{wirtinger_derivatives_of, SolutionField, WirtingerDerivatives};

/// Fraction of each axis covered by the centred window the norms use.
pub const DEFAULT_WINDOW: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub t: f64,
    /// `‖R‖₂ / ‖U_t‖₂` over the window; 0 when both vanish.
    pub rel_l2: f64,
    pub max_abs: f64,
    pub window: f64,
    pub half_width: f64,
    pub n: usize,
    pub masked: usize,
}

/// Exact derivative fields of `U` and `Ū`, built once and sampled per grid.
pub struct ResidualContext {
    u: RationalField,
    du: WirtingerDerivatives,
    ubar: RationalField,
    dubar: WirtingerDerivatives,
    trivial: bool,
}

struct Samples {
    u: GridField,
    u_t: GridField,
    lap: GridField,
}

impl ResidualContext {
    pub fn new(s: &SolutionField) -> Self {
        let ubar = s.conjugate();
        Self {
            u: s.u().clone(),
            du: s.wirtinger_derivatives(),
            dubar: wirtinger_derivatives_of(&ubar),
            ubar,
            trivial: s.is_trivial(),
        }
    }

    fn sample(u: &RationalField, d: &WirtingerDerivatives, grid: &Grid, t: f64) -> Result<Samples> {
        let u_zz = eval_grid(&d.u_zz, grid, t)?;
        let u_ww = eval_grid(&d.u_ww, grid, t)?;
        let mut lap = u_zz;
        lap.values.par_iter_mut().zip(&u_ww.values).for_each(|(a, b)| *a += b);
        lap.mask.iter_mut().zip(&u_ww.mask).for_each(|(a, b)| *a |= b);
        Ok(Samples {
            u: eval_grid(u, grid, t)?,
            u_t: eval_grid(&d.u_t, grid, t)?,
            lap,
        })
    }

    /// Residual of `U_t = σ i (U_zz + U_ww + 2(V + V̄) U)` where `V` comes
    /// from `|U|²` (always of the original field).
    fn residual(&self, conjugate: bool, grid: &Grid, t: f64) -> Result<ResidualReport> {
        if self.trivial {
            return Ok(ResidualReport {
                t,
                rel_l2: 0.0,
                max_abs: 0.0,
                window: DEFAULT_WINDOW,
                half_width: grid.half_width(),
                n: grid.n(),
                masked: 0,
            });
        }
        let base = Self::sample(&self.u, &self.du, grid, t)?;
        let usq = base.u.map(|v| Complex64::new(v.norm_sqr(), 0.0));
        let v = solve_v(&usq);
        let samples = if conjugate {
            Self::sample(&self.ubar, &self.dubar, grid, t)?
        } else {
            base
        };
        let sigma = if conjugate {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        let n = grid.n();
        let lo = ((1.0 - DEFAULT_WINDOW) * 0.5 * n as f64).round() as usize;
        let hi = n - lo;
        let mut masked = 0usize;
        let (mut r2, mut ut2, mut max_abs) = (0.0f64, 0.0f64, 0.0f64);
        for iy in lo..hi {
            for ix in lo..hi {
                let k = iy * n + ix;
                if samples.u.mask[k] || samples.u_t.mask[k] || samples.lap.mask[k] {
                    masked += 1;
                    continue;
                }
                let vv = v.values[k] + v.values[k].conj();
                let r = samples.u_t.values[k]
                    - sigma * (samples.lap.values[k] + 2.0 * vv * samples.u.values[k]);
                r2 += r.norm_sqr();
                ut2 += samples.u_t.values[k].norm_sqr();
                max_abs = max_abs.max(r.norm());
            }
        }
        let rel_l2 = if ut2 == 0.0 {
            if r2 == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (r2 / ut2).sqrt()
        };
        Ok(ResidualReport {
            t,
            rel_l2,
            max_abs,
            window: DEFAULT_WINDOW,
            half_width: grid.half_width(),
            n,
            masked,
        })
    }

    pub fn ds2(&self, grid: &Grid, t: f64) -> Result<ResidualReport> {
        self.residual(false, grid, t)
    }

    pub fn conjugate(&self, grid: &Grid, t: f64) -> Result<ResidualReport> {
        self.residual(true, grid, t)
    }
}

pub fn ds2_residual(s: &SolutionField, grid: &Grid, t: f64) -> Result<ResidualReport> {
    ResidualContext::new(s).ds2(grid, t)
}

pub fn conjugate_residual(s: &SolutionField, grid: &Grid, t: f64) -> Result<ResidualReport> {
    ResidualContext::new(s).conjugate(grid, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moutard::{assemble_u, Preset};

    #[test]
    fn trivial_solution_has_zero_residual() {
        let s = assemble_u(&Preset::Obs25 { m: 1, n: 3 }.build().unwrap()).unwrap();
        let grid = Grid::new(10.0, 64).unwrap();
        let r = ds2_residual(&s, &grid, 1.0).unwrap();
        assert_eq!((r.rel_l2, r.max_abs), (0.0, 0.0));
        let c = conjugate_residual(&s, &grid, 1.0).unwrap();
        assert_eq!((c.rel_l2, c.max_abs), (0.0, 0.0));
    }

    #[test]
    fn residual_shrinks_under_refinement() {
        let s = assemble_u(&Preset::Remark22.build().unwrap()).unwrap();
        let ctx = ResidualContext::new(&s);
        let coarse = ctx.ds2(&Grid::new(10.0, 512).unwrap(), 1.0).unwrap();
        let fine = ctx.ds2(&Grid::new(10.0, 1024).unwrap(), 1.0).unwrap();
        assert!(fine.rel_l2 < 0.25 * coarse.rel_l2, "{} vs {}", fine.rel_l2, coarse.rel_l2);
        let conj = ctx.conjugate(&Grid::new(10.0, 1024).unwrap(), 1.0).unwrap();
        assert!((conj.rel_l2 - fine.rel_l2).abs() < 1e-6 * fine.rel_l2, "{} vs {}", conj.rel_l2, fine.rel_l2);
        assert_eq!(conj.masked, fine.masked);
    }
}
