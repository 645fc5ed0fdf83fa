use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::MoutardTriple;
use crate::error::{Error, Result};
use crate::exactpoly::GaussianRational;
use crate::heat::{realize_capped, HeatCombination, HeatSign, DEFAULT_DEGREE_CAP};

/// Heat-combination data for `f` and `g` plus the constant `c0`; `h` is
/// always recomputed from these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSpec {
    pub label: String,
    pub f: HeatCombination,
    pub g: HeatCombination,
    pub c0: GaussianRational,
}

impl TripleSpec {
    pub fn build(&self) -> Result<MoutardTriple> {
        self.build_capped(DEFAULT_DEGREE_CAP)
    }

    pub fn build_capped(&self, cap: u32) -> Result<MoutardTriple> {
        let f = realize_capped(&self.f, cap)?;
        let g = realize_capped(&self.g, cap)?;
        MoutardTriple::build(f, g, self.c0.clone(), self.label.clone())
    }
}

/// The compiled-in examples.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `f = z² + 2it`, `g = z³ − 6itz`, `c0 = 0`.
    Remark22,
    /// `f = z² + 2it − z`, `g = z³ − 6itz − z`, `c0 = −1/2`; singular at `z = ±1, t = 0`.
    Obs23,
    /// `f = f_m`, `g = g_n` generators with `h(0,0) = 0`.
    Obs25 { m: u32, n: u32 },
}

impl Preset {
    pub fn spec(&self) -> TripleSpec {
        let one = GaussianRational::one;
        let minus_one = || GaussianRational::from(-1);
        match *self {
            Preset::Remark22 => TripleSpec {
                label: self.to_string(),
                f: HeatCombination::generator(2, HeatSign::Plus),
                g: HeatCombination::generator(3, HeatSign::Minus),
                c0: GaussianRational::zero(),
            },
            Preset::Obs23 => TripleSpec {
                label: self.to_string(),
                f: HeatCombination::new(HeatSign::Plus, vec![(2, one()), (1, minus_one())]),
                g: HeatCombination::new(HeatSign::Minus, vec![(3, one()), (1, minus_one())]),
                c0: GaussianRational::from_ratios(-1, 2, 0, 1),
            },
            Preset::Obs25 { m, n } => TripleSpec {
                label: self.to_string(),
                f: HeatCombination::generator(m, HeatSign::Plus),
                g: HeatCombination::generator(n, HeatSign::Minus),
                c0: GaussianRational::zero(),
            },
        }
    }

    /// Validated build under the default degree cap.
    pub fn build(&self) -> Result<MoutardTriple> {
        self.build_capped(DEFAULT_DEGREE_CAP)
    }

    pub fn build_capped(&self, cap: u32) -> Result<MoutardTriple> {
        if let Preset::Obs25 { m, n } = *self {
            if m == 0 || n == 0 {
                return Err(Error::InvalidInput("obs25 requires m >= 1 and n >= 1".into()));
            }
        }
        self.spec().build_capped(cap)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Remark22 => write!(f, "remark22"),
            Preset::Obs23 => write!(f, "obs23"),
            Preset::Obs25 { m, n } => write!(f, "obs25({m},{n})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `remark22`, `obs23`, `obs25(m,n)` and `obs25:m,n`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "remark22" => return Ok(Preset::Remark22),
            "obs23" => return Ok(Preset::Obs23),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown preset '{s}'"));
        let args = s
            .strip_prefix("obs25")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .ok_or_else(bad)?;
        let (m, n) = args.split_once(',').ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Ok(Preset::Obs25 { m, n })
    }
}
