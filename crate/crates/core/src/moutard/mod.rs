//! Moutard-transformation solutions built from the zero seed `U = V = 0`.
//!
//! Given `f` with `f_t = i f_zz` and `g` with `g_t = -i g_zz`, a potential
//! function `h` with
//!
//! ```text
//! h_z = f_z g_z,        i h_t = g_zz f_z - g_z f_zz
//! ```
//!
//! yields the solution `U = i conj(g_z) (f_z g - h) / (|g|² + |h|²)`.

mod presets;

pub use presets::{Preset, TripleSpec};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{GaussianRational, RationalField, TriPoly, Var};
use crate::heat::{verify_evolution, HeatSign};

/// Validated data `(f, g, h)`; `c0` is the additive constant folded into `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoutardTriple {
    f: TriPoly,
    g: TriPoly,
    h: TriPoly,
    c0: GaussianRational,
    provenance: String,
}

/// One exact boolean per hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub f_holomorphic: bool,
    pub g_holomorphic: bool,
    pub h_holomorphic: bool,
    pub f_evolution: bool,
    pub g_evolution: bool,
    pub h_z_constraint: bool,
    pub h_t_constraint: bool,
}

impl TripleReport {
    pub fn all_ok(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn checks(&self) -> [(&'static str, bool); 7] {
        [
            ("f holomorphic", self.f_holomorphic),
            ("g holomorphic", self.g_holomorphic),
            ("h holomorphic", self.h_holomorphic),
            ("f_t = i f_zz", self.f_evolution),
            ("g_t = -i g_zz", self.g_evolution),
            ("h_z = f_z g_z", self.h_z_constraint),
            ("i h_t = g_zz f_z - g_z f_zz", self.h_t_constraint),
        ]
    }
}

fn time_rhs(f: &TriPoly, g: &TriPoly) -> TriPoly {
    let (fz, gz) = (f.derive(Var::Z), g.derive(Var::Z));
    &(&gz.derive(Var::Z) * &fz) - &(&gz * &fz.derive(Var::Z))
}

/// `h_z - f_z g_z`; zero iff the spatial constraint holds.
pub fn space_constraint_defect(f: &TriPoly, g: &TriPoly, h: &TriPoly) -> TriPoly {
    &h.derive(Var::Z) - &(&f.derive(Var::Z) * &g.derive(Var::Z))
}

/// `i h_t - (g_zz f_z - g_z f_zz)`; zero iff the temporal constraint holds.
pub fn time_constraint_defect(f: &TriPoly, g: &TriPoly, h: &TriPoly) -> TriPoly {
    &h.derive(Var::T).scale(&GaussianRational::i()) - &time_rhs(f, g)
}

/// Integrates both constraints: `h = H + c(t) + c0` with `H = ∫ f_z g_z dz`
/// (zero constant term in `z`) and `c(t)` fixed by the time constraint at
/// `z = 0` (zero constant term in `t`).
pub fn build_h(f: &TriPoly, g: &TriPoly, c0: &GaussianRational) -> Result<TriPoly> {
    if !f.is_independent_of(Var::W) || !g.is_independent_of(Var::W) {
        return Err(Error::InvalidInput("f and g must be holomorphic (w-free)".into()));
    }
    let h_z = &f.derive(Var::Z) * &g.derive(Var::Z);
    let h_t = time_rhs(f, g).scale(&-GaussianRational::i());
    if h_z.derive(Var::T) != h_t.derive(Var::Z) {
        return Err(Error::CompatibilityFailure);
    }
    let big_h = h_z.antiderive(Var::Z);
    let origin = GaussianRational::zero();
    let c_rate = &h_t.substitute(Var::Z, &origin) - &big_h.derive(Var::T).substitute(Var::Z, &origin);
    let c_t = c_rate.antiderive(Var::T);
    Ok(&(&big_h + &c_t) + &TriPoly::constant(c0.clone()))
}

impl MoutardTriple {
    /// Builds `h` from `(f, g, c0)` and checks every hypothesis.
    pub fn build(f: TriPoly, g: TriPoly, c0: GaussianRational, provenance: impl Into<String>) -> Result<Self> {
        let h = build_h(&f, &g, &c0)?;
        let triple = Self::from_parts(f, g, h, c0, provenance);
        let report = triple.verify();
        if !report.all_ok() {
            let failed: Vec<&str> = report
                .checks()
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(name, _)| *name)
                .collect();
            return Err(Error::InvalidInput(format!("triple fails: {}", failed.join(", "))));
        }
        Ok(triple)
    }

    /// Unchecked constructor; pair with [`Self::verify`].
    pub fn from_parts(
        f: TriPoly,
        g: TriPoly,
        h: TriPoly,
        c0: GaussianRational,
        provenance: impl Into<String>,
    ) -> Self {
        Self {
            f,
            g,
            h,
            c0,
            provenance: provenance.into(),
        }
    }

    pub fn f(&self) -> &TriPoly {
        &self.f
    }

    pub fn g(&self) -> &TriPoly {
        &self.g
    }

    pub fn h(&self) -> &TriPoly {
        &self.h
    }

    pub fn c0(&self) -> &GaussianRational {
        &self.c0
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn verify(&self) -> TripleReport {
        verify_triple(self)
    }

    /// `f_z g - h`
    pub fn numerator_factor(&self) -> TriPoly {
        &(&self.f.derive(Var::Z) * &self.g) - &self.h
    }
}

pub fn verify_triple(t: &MoutardTriple) -> TripleReport {
    TripleReport {
        f_holomorphic: t.f.is_independent_of(Var::W),
        g_holomorphic: t.g.is_independent_of(Var::W),
        h_holomorphic: t.h.is_independent_of(Var::W),
        f_evolution: verify_evolution(&t.f, HeatSign::Plus),
        g_evolution: verify_evolution(&t.g, HeatSign::Minus),
        h_z_constraint: space_constraint_defect(&t.f, &t.g, &t.h).is_zero(),
        h_t_constraint: time_constraint_defect(&t.f, &t.g, &t.h).is_zero(),
    }
}

/// Exact solution `U = i conj(g_z) N₀ / (g ḡ + h h̄)` with `N₀ = f_z g - h`.
#[derive(Clone, Debug)]
pub struct SolutionField {
    u: RationalField,
    n0: TriPoly,
    triple: MoutardTriple,
}

/// Exact first and second Wirtinger derivatives and the time derivative of `U`.
#[derive(Clone, Debug)]
pub struct WirtingerDerivatives {
    pub u_z: RationalField,
    pub u_w: RationalField,
    pub u_zz: RationalField,
    pub u_ww: RationalField,
    pub u_t: RationalField,
}

pub fn assemble_u(triple: &MoutardTriple) -> Result<SolutionField> {
    let report = triple.verify();
    if !report.all_ok() {
        return Err(Error::InvalidInput("triple fails verification".into()));
    }
    let (g, h) = (&triple.g, &triple.h);
    let n0 = triple.numerator_factor();
    let gz_bar = g.derive(Var::Z).conj_involution();
    let num = (&gz_bar * &n0).scale(&GaussianRational::i());
    let den = &(g * &g.conj_involution()) + &(h * &h.conj_involution());
    let u = RationalField::new(num, den)
        .map_err(|_| Error::InvalidInput("g and h both vanish identically".into()))?;
    Ok(SolutionField {
        u,
        n0,
        triple: triple.clone(),
    })
}

impl SolutionField {
    pub fn u(&self) -> &RationalField {
        &self.u
    }

    pub fn triple(&self) -> &MoutardTriple {
        &self.triple
    }

    /// The holomorphic numerator factor `f_z g - h`.
    pub fn numerator_factor(&self) -> &TriPoly {
        &self.n0
    }

    /// `f_z g - h ≡ 0`, so `U ≡ 0`.
    pub fn is_trivial(&self) -> bool {
        self.n0.is_zero()
    }

    /// Exact `Ū` as a rational field (the denominator is already real).
    pub fn conjugate(&self) -> RationalField {
        self.u.conj_involution()
    }

    pub fn wirtinger_derivatives(&self) -> WirtingerDerivatives {
        wirtinger_derivatives_of(&self.u)
    }
}

pub fn wirtinger_derivatives_of(u: &RationalField) -> WirtingerDerivatives {
    WirtingerDerivatives {
        u_z: u.derive(Var::Z),
        u_w: u.derive(Var::W),
        u_zz: u.derive2(Var::Z),
        u_ww: u.derive2(Var::W),
        u_t: u.derive(Var::T),
    }
}
