//! Deterministic writers for CSV, PPM and JSON artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use moutard_core::numerics::GridField;
use serde::Serialize;

use crate::CliError;

/// 17 significant digits, so every value round-trips.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn field_csv(field: &GridField) -> String {
    let n = field.grid.n();
    let mut out = String::with_capacity(n * n * 110);
    out.push_str("x,y,re_u,im_u,abs_u\n");
    for iy in 0..n {
        for ix in 0..n {
            let z = field.grid.node(ix, iy);
            let k = iy * n + ix;
            let (re, im, abs) = if field.mask[k] {
                ("nan".to_string(), "nan".to_string(), "nan".to_string())
            } else {
                let v = field.values[k];
                (float(v.re), float(v.im), float(v.norm()))
            };
            let _ = writeln!(out, "{},{},{re},{im},{abs}", float(z.re), float(z.im));
        }
    }
    out
}

/// 99th percentile of `|U|` over unmasked nodes.
pub fn percentile99(field: &GridField) -> f64 {
    let mut mags: Vec<f64> = field
        .values
        .iter()
        .zip(&field.mask)
        .filter(|(_, m)| !**m)
        .map(|(v, _)| v.norm())
        .collect();
    if mags.is_empty() {
        return 0.0;
    }
    mags.sort_by(f64::total_cmp);
    mags[((mags.len() - 1) as f64 * 0.99).floor() as usize]
}

/// Binary PPM (P6) of `|U|`, top row at the largest `y`.
pub fn field_ppm(field: &GridField) -> Vec<u8> {
    let n = field.grid.n();
    let scale = percentile99(field);
    let mut out = format!("P6\n{n} {n}\n255\n").into_bytes();
    for row in 0..n {
        let iy = n - 1 - row;
        for ix in 0..n {
            let k = iy * n + ix;
            let level = if field.mask[k] {
                255
            } else if scale > 0.0 {
                ((field.values[k].norm() / scale).min(1.0) * 255.0).round() as u8
            } else {
                0
            };
            out.extend_from_slice(&[level, level, level]);
        }
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root).map_err(|e| CliError::Io(format!("{}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn write(&self, name: &str, bytes: impl AsRef<[u8]>) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
