use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use super::{Grid, GridField};

/// In-place 2D FFT of a row-major `n × n` array. The inverse is normalized.
pub fn fft2(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(n, direction);
    data.par_chunks_mut(n).for_each(|row| fft.process(row));
    let mut col_major = transpose(data, n);
    col_major.par_chunks_mut(n).for_each(|col| fft.process(col));
    data.copy_from_slice(&transpose(&col_major, n));
    if direction == FftDirection::Inverse {
        let scale = 1.0 / (n * n) as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = data[j * n + i];
        }
    });
    out
}

/// Angular wavenumbers in FFT order for a grid of period `2L`.
pub fn wavenumbers(grid: &Grid) -> Vec<f64> {
    let n = grid.n();
    let base = std::f64::consts::PI / grid.half_width();
    (0..n)
        .map(|j| {
            let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
            base * m
        })
        .collect()
}

fn apply_multiplier(field: &GridField, mult: impl Fn(f64, f64) -> Complex64 + Sync) -> GridField {
    let grid = field.grid;
    let n = grid.n();
    let k = wavenumbers(&grid);
    let mut data = field.values.clone();
    fft2(&mut data, n, FftDirection::Forward);
    data.par_chunks_mut(n).enumerate().for_each(|(iy, row)| {
        for (ix, v) in row.iter_mut().enumerate() {
            *v *= mult(k[ix], k[iy]);
        }
    });
    fft2(&mut data, n, FftDirection::Inverse);
    GridField {
        values: data,
        mask: field.mask.clone(),
        grid,
        t: field.t,
    }
}

/// Solves `∂̄V = ∂F` on the periodic grid: `V̂ = (k_x - i k_y)/(k_x + i k_y) F̂`,
/// zero mode set to 0.
pub fn solve_v(usq: &GridField) -> GridField {
    apply_multiplier(usq, |kx, ky| {
        if kx == 0.0 && ky == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(kx, -ky) / Complex64::new(kx, ky)
        }
    })
}

/// Spectral `∂ = (∂_x - i ∂_y)/2`.
pub fn spectral_d(f: &GridField) -> GridField {
    apply_multiplier(f, |kx, ky| Complex64::new(0.0, 0.5) * Complex64::new(kx, -ky))
}

/// Spectral `∂̄ = (∂_x + i ∂_y)/2`.
pub fn spectral_dbar(f: &GridField) -> GridField {
    apply_multiplier(f, |kx, ky| Complex64::new(0.0, 0.5) * Complex64::new(kx, ky))
}
