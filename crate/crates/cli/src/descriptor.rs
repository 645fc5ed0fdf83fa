//! JSON triple descriptors and input resolution.

use std::path::Path;

use moutard_core::exactpoly::gaussian::{format_ratio, parse_ratio};
use moutard_core::exactpoly::{GaussianRational, TriPoly, Var};
use moutard_core::heat::{realize_capped, HeatCombination, HeatSign, DEFAULT_DEGREE_CAP};
use moutard_core::moutard::{build_h, MoutardTriple, Preset, TripleSpec};
use moutard_core::Error;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinationDescriptor {
    pub sign: HeatSign,
    /// `[order, "re_num/re_den", "im_num/im_den"]`
    pub terms: Vec<(u32, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub label: String,
    pub f: CombinationDescriptor,
    pub g: CombinationDescriptor,
    pub c0: (String, String),
}

fn gaussian_strings(c: &GaussianRational) -> (String, String) {
    (format_ratio(&c.re), format_ratio(&c.im))
}

fn parse_gaussian(re: &str, im: &str) -> Result<GaussianRational, CliError> {
    let part = |s: &str| parse_ratio(s).map_err(|e| CliError::Input(e.to_string()));
    Ok(GaussianRational::new(part(re)?, part(im)?))
}

impl CombinationDescriptor {
    pub fn from_combination(c: &HeatCombination) -> Self {
        Self {
            sign: c.sign,
            terms: c
                .terms
                .iter()
                .map(|(k, coeff)| {
                    let (re, im) = gaussian_strings(coeff);
                    (*k, re, im)
                })
                .collect(),
        }
    }

    pub fn to_combination(&self) -> Result<HeatCombination, CliError> {
        let terms = self
            .terms
            .iter()
            .map(|(k, re, im)| Ok((*k, parse_gaussian(re, im)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(HeatCombination::new(self.sign, terms))
    }
}

impl Descriptor {
    pub fn from_spec(spec: &TripleSpec) -> Self {
        Self {
            label: spec.label.clone(),
            f: CombinationDescriptor::from_combination(&spec.f),
            g: CombinationDescriptor::from_combination(&spec.g),
            c0: gaussian_strings(&spec.c0),
        }
    }

    pub fn to_spec(&self) -> Result<TripleSpec, CliError> {
        Ok(TripleSpec {
            label: self.label.clone(),
            f: self.f.to_combination()?,
            g: self.g.to_combination()?,
            c0: parse_gaussian(&self.c0.0, &self.c0.1)?,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("descriptor: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes") + "\n"
    }

    /// SHA-256 of the compact canonical serialization.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("descriptor serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Where a run's triple comes from.
#[derive(Clone, Debug)]
pub struct Source {
    pub descriptor: Descriptor,
    pub preset: Option<Preset>,
}

impl Source {
    pub fn resolve(preset: Option<&str>, input: Option<&Path>) -> Result<Self, CliError> {
        match (preset, input) {
            (Some(name), None) => {
                let preset: Preset = name.parse().map_err(|e: Error| CliError::Input(e.to_string()))?;
                if let Preset::Obs25 { m, n } = preset {
                    if m == 0 || n == 0 {
                        return Err(CliError::Input(format!("preset {preset}: orders must be positive")));
                    }
                }
                Ok(Self {
                    descriptor: Descriptor::from_spec(&preset.spec()),
                    preset: Some(preset),
                })
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Ok(Self {
                    descriptor: Descriptor::from_json(&text)?,
                    preset: None,
                })
            }
            _ => Err(CliError::Input("exactly one of --preset or --input is required".into())),
        }
    }
}

/// A triple assembled without rejecting invalid data, so every identity can
/// be reported individually.
pub struct Assembled {
    pub triple: MoutardTriple,
    pub notes: Vec<String>,
}

pub fn assemble_unchecked(spec: &TripleSpec) -> Result<Assembled, CliError> {
    let cap = |e: Error| CliError::Input(e.to_string());
    let f = realize_capped(&spec.f, DEFAULT_DEGREE_CAP).map_err(cap)?;
    let g = realize_capped(&spec.g, DEFAULT_DEGREE_CAP).map_err(cap)?;
    let mut notes = Vec::new();
    if spec.f.sign != HeatSign::Plus {
        notes.push("f is declared with sign '-'; f must satisfy f_t = i f_zz".into());
    }
    if spec.g.sign != HeatSign::Minus {
        notes.push("g is declared with sign '+'; g must satisfy g_t = -i g_zz".into());
    }
    let h = match build_h(&f, &g, &spec.c0) {
        Ok(h) => h,
        Err(Error::CompatibilityFailure) => {
            notes.push("constraints on h are incompatible; h taken as the z-antiderivative of f_z g_z plus c0".into());
            &(&f.derive(Var::Z) * &g.derive(Var::Z)).antiderive(Var::Z) + &TriPoly::constant(spec.c0.clone())
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    Ok(Assembled {
        triple: MoutardTriple::from_parts(f, g, h, spec.c0.clone(), spec.label.clone()),
        notes,
    })
}
