//! `‖U(·, t)‖²₂` by polar quadrature: adaptive Gauss–Kronrod in the radius,
//! periodic trapezoid (doubled until settled) in the angle, and a fitted
//! `C/r⁴` tail beyond the disk.

use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{ray_limit_local, LocalExpansion, DEFAULT_RAY_RADII};
use crate::error::{Error, Result};
use crate::exactpoly::{CompiledField, RationalField};
use crate::moutard::SolutionField;

// 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the
// Gauss 7-point rule uses the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Debug, PartialEq)]
pub struct MassReport {
    pub t: f64,
    pub mass: f64,
    pub quadrature_error: f64,
    pub tail_bound: f64,
    pub disk_radius: f64,
}

#[derive(Clone, Debug)]
pub struct MassOptions {
    pub rtol: f64,
    pub initial_radius: f64,
    pub max_radius: f64,
    pub max_panels: usize,
    pub min_angular: usize,
    pub max_angular: usize,
}

impl Default for MassOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-4,
            initial_radius: 16.0,
            max_radius: 1e5,
            max_panels: 4000,
            min_angular: 64,
            max_angular: 1 << 15,
        }
    }
}

struct Integrand {
    field: CompiledField,
    exact: RationalField,
    t: f64,
    min_angular: usize,
    max_angular: usize,
}

impl Integrand {
    /// `|U|²` at `z`; at a vanishing denominator the ray-limit modulus stands in.
    fn density(&self, z: Complex64) -> f64 {
        match self.field.eval(z) {
            Ok(v) => v.norm_sqr(),
            Err(_) => LocalExpansion::from_floats(&self.exact, z, self.t)
                .and_then(|local| ray_limit_local(&local, 0.0, &DEFAULT_RAY_RADII))
                .map(|r| r.limit.norm_sqr())
                .unwrap_or(0.0),
        }
    }

    /// `r ∫₀^{2π} |U(r e^{iφ})|² dφ` and an estimate of its angular error.
    fn ring(&self, r: f64) -> (f64, f64) {
        if r == 0.0 {
            return (0.0, 0.0);
        }
        let sum = |m: usize, offset: usize, stride: usize| -> f64 {
            (offset..m)
                .step_by(stride)
                .map(|k| {
                    let phi = std::f64::consts::TAU * k as f64 / m as f64;
                    self.density(Complex64::from_polar(r, phi))
                })
                .sum()
        };
        let mut m = self.min_angular;
        let mut total = sum(m, 0, 1);
        let mut value = std::f64::consts::TAU * total / m as f64 * r;
        loop {
            // new nodes of the doubled rule are the odd ones
            let fresh = sum(2 * m, 1, 2);
            total += fresh;
            m *= 2;
            let next = std::f64::consts::TAU * total / m as f64 * r;
            let err = (next - value).abs();
            value = next;
            if err <= 1e-12 * value.abs() || m >= self.max_angular {
                return (value, err);
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod(f: &Integrand, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let nodes: Vec<f64> = (0..15)
        .map(|k| {
            if k < 7 {
                c - h * XGK[k]
            } else if k == 7 {
                c
            } else {
                c + h * XGK[14 - k]
            }
        })
        .collect();
    let vals: Vec<(f64, f64)> = nodes.par_iter().map(|&r| f.ring(r)).collect();
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    let mut angular = 0.0;
    for (k, (v, e)) in vals.iter().enumerate() {
        let idx = if k <= 7 { k } else { 14 - k };
        kronrod += WGK[idx] * v;
        angular += WGK[idx] * e;
        if idx % 2 == 1 {
            gauss += WG[idx / 2] * v;
        } else if idx == 7 {
            gauss += WG[3] * v;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: (kronrod - gauss).abs() * h + angular * h,
    }
}

/// Initial radial breakpoints: unit-width panels near the origin, then geometric.
fn breakpoints(r_max: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut r = 0.0;
    while r < r_max {
        r = if r < 4.0 { r + 0.5 } else { r * 1.5 };
        pts.push(r.min(r_max));
    }
    pts
}

pub fn mass(s: &SolutionField, t: f64, rtol: f64) -> Result<MassReport> {
    mass_with(
        s,
        t,
        &MassOptions {
            rtol,
            ..MassOptions::default()
        },
    )
}

pub fn mass_with(s: &SolutionField, t: f64, opts: &MassOptions) -> Result<MassReport> {
    if s.is_trivial() {
        return Ok(MassReport {
            t,
            mass: 0.0,
            quadrature_error: 0.0,
            tail_bound: 0.0,
            disk_radius: 0.0,
        });
    }
    let f = Integrand {
        field: s.u().compile_at(t),
        exact: s.u().clone(),
        t,
        min_angular: opts.min_angular,
        max_angular: opts.max_angular,
    };

    let mut radius = opts.initial_radius;
    let mut heap: BinaryHeap<Panel> = breakpoints(radius)
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    loop {
        let disk: f64 = heap.iter().map(|p| p.value).sum();
        // |U|² ~ C(φ)/r⁴, so the ring integrand decays like K/r³
        let (edge, _) = f.ring(radius);
        let tail = 0.5 * edge * radius;
        let target = 0.5 * opts.rtol * (disk + tail);

        if tail > target {
            if radius >= opts.max_radius {
                return Err(Error::NoConvergence {
                    achieved: tail,
                    target,
                });
            }
            let next = radius * 2.0;
            let mid = radius * 1.5;
            heap.push(gauss_kronrod(&f, radius, mid));
            heap.push(gauss_kronrod(&f, mid, next));
            radius = next;
            continue;
        }

        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= target {
            return Ok(MassReport {
                t,
                mass: disk + tail,
                quadrature_error: error,
                tail_bound: tail,
                disk_radius: radius,
            });
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::NoConvergence {
                achieved: error,
                target,
            });
        }
        let worst = heap.pop().expect("nonempty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
    }
}

/// Masses at several times, with outliers flagged.
#[derive(Clone, Debug)]
pub struct MassScan {
    pub reports: Vec<MassReport>,
    pub median: f64,
    /// Times whose mass differs from the median by more than 1%.
    pub flagged: Vec<f64>,
}

pub fn mass_scan(s: &SolutionField, times: &[f64], rtol: f64) -> Result<MassScan> {
    let reports = times
        .iter()
        .map(|&t| mass(s, t, rtol))
        .collect::<Result<Vec<_>>>()?;
    let mut sorted: Vec<f64> = reports.iter().map(|r| r.mass).collect();
    sorted.sort_by(f64::total_cmp);
    let median = match sorted.len() {
        0 => 0.0,
        n if n % 2 == 1 => sorted[n / 2],
        n => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    };
    let flagged = reports
        .iter()
        .filter(|r| (r.mass - median).abs() > 0.01 * median.abs())
        .map(|r| r.t)
        .collect();
    Ok(MassScan {
        reports,
        median,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moutard::{assemble_u, Preset};
    use std::f64::consts::PI;

    fn solution(p: Preset) -> SolutionField {
        assemble_u(&p.build().unwrap()).unwrap()
    }

    #[test]
    fn remark22_at_singular_time() {
        // |U| = 1.5/(1 + 2.25|z|²) at t = 0, so the mass is π
        let r = mass(&solution(Preset::Remark22), 0.0, 1e-6).unwrap();
        assert!((r.mass - PI).abs() < 1e-5 * PI, "{}", r.mass);
    }

    #[test]
    fn obs25_32_at_singular_time() {
        // |U| = 3r/(1 + 2.25 r⁴) at t = 0, so the mass is 2π
        let r = mass(&solution(Preset::Obs25 { m: 3, n: 2 }), 0.0, 1e-6).unwrap();
        assert!((r.mass - 2.0 * PI).abs() < 1e-5 * PI, "{}", r.mass);
    }

    #[test]
    fn trivial_mass_is_zero() {
        let r = mass(&solution(Preset::Obs25 { m: 1, n: 4 }), 0.5, 1e-4).unwrap();
        assert_eq!(r.mass, 0.0);
    }

    #[test]
    fn scan_flags_the_drop() {
        let scan = mass_scan(&solution(Preset::Obs23), &[-1.0, 0.0, 1.0], 1e-4).unwrap();
        assert!((scan.median - 4.0 * PI).abs() < 1e-3);
        assert_eq!(scan.flagged, vec![0.0]);
    }

    #[test]
    fn panel_cap_is_reported() {
        let opts = MassOptions {
            rtol: 1e-12,
            max_panels: 40,
            ..MassOptions::default()
        };
        assert!(matches!(
            mass_with(&solution(Preset::Obs23), 1.0, &opts),
            Err(Error::NoConvergence { .. })
        ));
    }
}
