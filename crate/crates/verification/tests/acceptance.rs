//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed, and exits non-zero if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;
use std::time::{Duration, Instant};

use moutard_core::analysis::{decay_exponent, log_radii, ray_limit, singular_points_at, singular_times, DEFAULT_RAY_RADII};
use moutard_core::exactpoly::unipoly::slice_at_time;
use moutard_core::exactpoly::{poly, GaussianRational, TriPoly, UniPoly, Var};
use moutard_core::heat::{realize, HeatCombination, HeatSign};
use moutard_core::moutard::{
    assemble_u, build_h, space_constraint_defect, time_constraint_defect, MoutardTriple, Preset, SolutionField,
};
use moutard_core::numerics::{eval_grid, mass, solve_v, spectral_d, spectral_dbar, Grid, ResidualContext};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solution(p: Preset) -> SolutionField {
    assemble_u(&p.build().expect("preset builds")).expect("preset assembles")
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn random_combination(rng: &mut ChaCha8Rng, sign: HeatSign) -> HeatCombination {
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let c = loop {
                let c = GaussianRational::from_ratios(
                    rng.gen_range(-9..=9),
                    rng.gen_range(1..=5),
                    rng.gen_range(-9..=9),
                    rng.gen_range(1..=5),
                );
                if !c.is_zero() {
                    break c;
                }
            };
            (rng.gen_range(0..=8), c)
        })
        .collect();
    HeatCombination::new(sign, terms)
}

fn exact_theorem_suite() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, TriPoly, TriPoly, GaussianRational)> = Vec::new();
    let mut presets = vec![Preset::Remark22, Preset::Obs23];
    for m in 1..=5 {
        for n in 1..=5 {
            presets.push(Preset::Obs25 { m, n });
        }
    }
    for p in presets {
        let spec = p.spec();
        cases.push((p.to_string(), realize(&spec.f), realize(&spec.g), spec.c0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..50 {
        let f = realize(&random_combination(&mut rng, HeatSign::Plus));
        let g = realize(&random_combination(&mut rng, HeatSign::Minus));
        let c0 = GaussianRational::from_ratios(rng.gen_range(-5..=5), 2, rng.gen_range(-5..=5), 3);
        cases.push((format!("random #{k}"), f, g, c0));
    }
    for (label, f, g, c0) in &cases {
        let h = build_h(f, g, c0).map_err(|e| format!("{label}: {e}"))?;
        if !space_constraint_defect(f, g, &h).is_zero() {
            return Err(format!("{label}: h_z != f_z g_z"));
        }
        if !time_constraint_defect(f, g, &h).is_zero() {
            return Err(format!("{label}: i h_t != g_zz f_z - g_z f_zz"));
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} triples exact in {:.2?}", cases.len(), start.elapsed()))
}

fn remark22_reproduction() -> Outcome {
    let h = build_h(&poly("z^2 + 2it"), &poly("z^3 - 6it z"), &GaussianRational::zero()).map_err(|e| e.to_string())?;
    let expected = poly("3/2 z^4 - 6i t z^2 + 6 t^2");
    ensure(h == expected, format!("h = {h}"))
}

fn at_t0(p: &TriPoly) -> UniPoly {
    slice_at_time(p, &BigRational::zero()).expect("w-free")
}

fn obs23_algebra() -> Outcome {
    let triple = Preset::Obs23.build().map_err(|e| e.to_string())?;
    let h0 = at_t0(triple.h());
    let printed = at_t0(&poly("3/2 z^4 - z^3 - z^2 + z - 1/2"));
    if h0 != printed {
        return Err(format!("h(z, 0) = {}", h0.to_tripoly(Var::Z)));
    }
    let (q, r) = h0.div_rem(&at_t0(&poly("z^2 - 1")));
    if !r.is_zero() || q != at_t0(&poly("3/2 z^2 - z + 1/2")) {
        return Err(format!("h(z, 0) / (z^2 - 1) leaves {}", r.to_tripoly(Var::Z)));
    }
    let num0 = at_t0(&triple.numerator_factor());
    let expected = at_t0(&poly("1/2 (z^2 - 1)^2"));
    ensure(
        num0 == expected,
        format!("(f_z g - h)(z, 0) = {}", num0.to_tripoly(Var::Z)),
    )
}

/// Multiplicity of `z0` as a root, by repeated exact differentiation.
fn order_at(p: &UniPoly, z0: &GaussianRational) -> Option<u32> {
    let mut d = p.clone();
    for k in 0.. {
        if d.is_zero() {
            return None;
        }
        if !d.eval_exact(z0).is_zero() {
            return Some(k);
        }
        d = d.derivative();
    }
    unreachable!()
}

fn check_geometry(preset: Preset, expected_points: &[GaussianRational], orders: (u32, u32, u32), common: &str) -> Outcome {
    let triple: MoutardTriple = preset.build().map_err(|e| e.to_string())?;
    let times = singular_times(&triple).map_err(|e| format!("{preset}: {e}"))?;
    let roots: Vec<_> = times.real_roots.iter().collect();
    if roots.len() != 1 || roots[0].exact.as_ref().is_none_or(|t| !t.is_zero()) {
        return Err(format!("{preset}: singular times {:?}", roots.iter().map(|r| r.approx).collect::<Vec<_>>()));
    }
    if (&roots[0].hi - &roots[0].lo).to_f64().unwrap_or(f64::INFINITY) > 1e-10 {
        return Err(format!("{preset}: root bracket wider than 1e-10"));
    }
    // independent check: the slices share a factor exactly when the resultant vanishes
    let res = &times.resultant;
    for (num, den) in [(0i64, 1i64), (1, 2), (-1, 2), (1, 1), (-1, 1), (3, 1), (-7, 3)] {
        let t = BigRational::new(num.into(), den.into());
        let gcd = slice_at_time(triple.g(), &t).unwrap().gcd(&slice_at_time(triple.h(), &t).unwrap());
        let vanishes = res.eval_exact(&GaussianRational::real(t.clone())).is_zero();
        if gcd.is_constant() == vanishes {
            return Err(format!("{preset}: resultant and gcd disagree at t = {t}"));
        }
    }
    let gcd0 = at_t0(triple.g()).gcd(&at_t0(triple.h())).monic();
    if gcd0 != at_t0(&poly(common)) {
        return Err(format!("{preset}: gcd at t = 0 is {}", gcd0.to_tripoly(Var::Z)));
    }
    let points = singular_points_at(&triple, &BigRational::zero()).map_err(|e| e.to_string())?;
    let mut found: Vec<GaussianRational> = points.iter().filter_map(|p| p.z0_exact.clone()).collect();
    if found.len() != points.len() || found.len() != expected_points.len() {
        return Err(format!("{preset}: {} singular points", points.len()));
    }
    for z in expected_points {
        let Some(k) = found.iter().position(|f| f == z) else {
            return Err(format!("{preset}: missing singular point {z}"));
        };
        found.remove(k);
        let p = points.iter().find(|p| p.z0_exact.as_ref() == Some(z)).unwrap();
        let reported = (p.ord_g, p.ord_h, p.ord_num);
        let independent = (
            order_at(&at_t0(triple.g()), z),
            order_at(&at_t0(triple.h()), z),
            order_at(&at_t0(&triple.numerator_factor()), z),
        );
        let want = (orders.0, orders.1, Some(orders.2));
        if reported != want || independent != (Some(orders.0), Some(orders.1), Some(orders.2)) {
            return Err(format!("{preset} at {z}: orders {reported:?}, independent {independent:?}"));
        }
    }
    Ok(format!("{preset}: t = 0 only, {} point(s), orders {orders:?}", expected_points.len()))
}

fn singularity_geometry() -> Outcome {
    let one = GaussianRational::from_int(1);
    let obs23 = check_geometry(Preset::Obs23, &[one.clone(), -&one], (1, 1, 2), "z^2 - 1")?;
    let r22 = check_geometry(Preset::Remark22, &[GaussianRational::zero()], (3, 4, 4), "z^3")?;
    Ok(format!("{obs23}; {r22}"))
}

fn mass_quantization() -> Outcome {
    let start = Instant::now();
    let rtol = 1e-4;
    let mut checks: Vec<(String, Preset, f64, f64, f64)> = Vec::new();
    for t in [-1.0, -0.1, 0.1, 1.0] {
        checks.push(("obs23".into(), Preset::Obs23, t, 4.0, 5e-3));
    }
    checks.push(("obs23".into(), Preset::Obs23, 0.0, 2.0, 5e-3));
    for (m, n) in [(2u32, 2u32), (3, 2), (2, 3), (4, 3)] {
        let p = Preset::Obs25 { m, n };
        checks.push((p.to_string(), p, 0.5, (m + n - 1) as f64, 5e-3));
        checks.push((p.to_string(), p, 0.0, (m - 1) as f64, 5e-3));
    }
    checks.push(("remark22".into(), Preset::Remark22, 0.0, 1.0, 2e-3));
    let mut worst = 0.0f64;
    for (label, preset, t, multiple, tol) in &checks {
        let s = solution(*preset);
        let m = mass(&s, *t, rtol).map_err(|e| format!("{label} at t = {t}: {e}"))?.mass;
        let rel = (m - multiple * PI).abs() / (multiple * PI);
        worst = worst.max(rel);
        if rel > *tol {
            return Err(format!("{label} at t = {t}: mass = {:.6} pi, expected {multiple} pi", m / PI));
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{} masses, worst relative deviation {worst:.1e}, {:.2?}",
        checks.len(),
        start.elapsed()
    ))
}

fn m1_triviality() -> Outcome {
    for n in 1..=3 {
        let p = Preset::Obs25 { m: 1, n };
        let triple = p.build().map_err(|e| e.to_string())?;
        if !triple.numerator_factor().is_zero() || !solution(p).is_trivial() {
            return Err(format!("{p}: f_z g - h = {}", triple.numerator_factor()));
        }
    }
    Ok("f_z g - h = 0 for n = 1, 2, 3".into())
}

fn indeterminacy_limits() -> Outcome {
    let thetas = [0.0, FRAC_PI_4, FRAC_PI_2, 2.0];
    let r22 = solution(Preset::Remark22);
    let mut worst = 0.0f64;
    for theta in thetas {
        let l = ray_limit(&r22, Complex64::new(0.0, 0.0), 0.0, theta, &DEFAULT_RAY_RADII).map_err(|e| e.to_string())?;
        let expected = Complex64::new(0.0, 1.5) * Complex64::from_polar(1.0, 2.0 * theta);
        worst = worst.max((l.limit - expected).norm());
    }
    if worst > 1e-3 {
        return Err(format!("remark22: max deviation from (3/2) i e^(2i theta) is {worst:.2e}"));
    }
    // directional constants at the two obs23 points, frozen from exact local expansions
    let obs23 = solution(Preset::Obs23);
    let sweep = [0.0, FRAC_PI_4, FRAC_PI_2, 2.0, 3.0, 5.0];
    for (z0, c) in [(1.0, Complex64::new(0.0, 0.5)), (-1.0, Complex64::new(0.0, 0.1))] {
        let limits = sweep
            .iter()
            .map(|&theta| ray_limit(&obs23, Complex64::new(z0, 0.0), 0.0, theta, &DEFAULT_RAY_RADII).map(|r| r.limit))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("obs23 at {z0}: {e}"))?;
        let modulus_spread = limits.iter().map(|l| (l.norm() - limits[0].norm()).abs()).fold(0.0, f64::max);
        let phase_error = sweep
            .iter()
            .zip(&limits)
            .map(|(theta, l)| {
                let d = (l / limits[0]).arg() - 2.0 * theta;
                (d - (d / (2.0 * PI)).round() * 2.0 * PI).abs()
            })
            .fold(0.0, f64::max);
        let regression = limits[0] - c;
        if modulus_spread > 1e-3 || phase_error > 1e-3 || regression.norm() > 1e-3 {
            return Err(format!(
                "obs23 at {z0}: modulus spread {modulus_spread:.1e}, phase error {phase_error:.1e}, limit(0) = {}",
                limits[0]
            ));
        }
        worst = worst.max(modulus_spread).max(phase_error);
    }
    Ok(format!("remark22 and obs23 (C = i/2 at +1, i/10 at -1), worst deviation {worst:.1e}"))
}

fn decay() -> Outcome {
    let radii = log_radii(1e2, 1e4, 21);
    let thetas: Vec<f64> = (0..8).map(|k| 0.1 + k as f64 * FRAC_PI_4).collect();
    let mut out = Vec::new();
    for p in [Preset::Remark22, Preset::Obs23] {
        let fit = decay_exponent(&solution(p), 1.0, &radii, &thetas)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{p}: no decay fit"))?;
        let spread = fit.per_theta.iter().map(|(_, s, _)| (s + 2.0).abs()).fold(0.0, f64::max);
        if (fit.exponent + 2.0).abs() > 0.05 || spread > 0.05 {
            return Err(format!("{p}: exponent {:.4}", fit.exponent));
        }
        out.push(format!("{p} {:.4}", fit.exponent));
    }
    Ok(out.join(", "))
}

fn pde_residual() -> Outcome {
    let start = Instant::now();
    let grids = [(20.0, 256), (40.0, 512), (80.0, 1024)];
    let bound_ratio = grids[0].0 / grids[2].0;
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [Preset::Remark22, Preset::Obs23] {
        let ctx = ResidualContext::new(&solution(p));
        let mut ds2 = Vec::new();
        let mut conj = Vec::new();
        for (l, n) in grids {
            let grid = Grid::new(l, n).unwrap();
            ds2.push(ctx.ds2(&grid, 1.0).map_err(|e| e.to_string())?.rel_l2);
            conj.push(ctx.conjugate(&grid, 1.0).map_err(|e| e.to_string())?.rel_l2);
        }
        for (name, seq) in [("U", &ds2), ("conj U", &conj)] {
            let decreasing = seq.windows(2).all(|w| w[1] < w[0]);
            let bound = seq[0] * bound_ratio;
            let met = seq[2] <= bound;
            ok &= decreasing && met;
            lines.push(format!(
                "{p} {name}: {:.4e} -> {:.4e} -> {:.4e} (bound {bound:.3e}, decreasing {decreasing}, bound met {met})",
                seq[0], seq[1], seq[2]
            ));
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    ensure(ok, lines.join("; "))
}

fn solve_v_identity() -> Result<f64, String> {
    let s = solution(Preset::Remark22);
    let grid = Grid::new(20.0, 256).unwrap();
    let u = eval_grid(s.u(), &grid, 1.0).map_err(|e| e.to_string())?;
    let usq = u.map(|v| Complex64::new(v.norm_sqr(), 0.0));
    let lhs = spectral_dbar(&solve_v(&usq));
    let rhs = spectral_d(&usq);
    let diff: f64 = lhs.values.iter().zip(&rhs.values).map(|(a, b)| (a - b).norm_sqr()).sum();
    let norm: f64 = rhs.values.iter().map(|b| b.norm_sqr()).sum();
    Ok((diff / norm).sqrt())
}

fn wirtinger_fd() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for p in [Preset::Remark22, Preset::Obs23] {
        let s = solution(p);
        let d = s.wirtinger_derivatives();
        let u = |z: Complex64, t: f64| s.u().eval(z, t);
        let mut checked = 0;
        while checked < 20 {
            let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let t = rng.gen_range(0.2..1.5);
            if u(z, t).map_or(true, |v| v.norm() < 1e-3) {
                continue;
            }
            let h = 1e-4;
            let f = |z: Complex64, t: f64| u(z, t).unwrap();
            let fx = (f(z + h, t) - f(z - h, t)) / (2.0 * h);
            let fy = (f(z + Complex64::new(0.0, h), t) - f(z - Complex64::new(0.0, h), t)) / (2.0 * h);
            let ft = (f(z, t + h) - f(z, t - h)) / (2.0 * h);
            let i = Complex64::new(0.0, 1.0);
            for (fd, exact) in [
                (0.5 * (fx - i * fy), &d.u_z),
                (0.5 * (fx + i * fy), &d.u_w),
                (ft, &d.u_t),
            ] {
                let e = exact.eval(z, t).map_err(|e| e.to_string())?;
                worst = worst.max((fd - e).norm() / e.norm().max(1e-6));
            }
            checked += 1;
        }
    }
    Ok(worst)
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let out = out.to_str().ok_or("non-UTF-8 path")?;
    let argv: Vec<&str> = ["moutard"].iter().chain(args).chain(&["--out", out]).copied().collect();
    let mut stdout = Vec::new();
    let code = moutard_cli::run_from_args(argv, &mut stdout);
    ensure(code == 0, format!("{args:?} exited with {code}")).map(|_| ())
}

fn deterministic_outputs() -> Result<usize, String> {
    let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::TempDir::new().unwrap()).collect();
    let runs: [(&[&str], &[&str]); 4] = [
        (&["build", "--preset", "obs23"], &["report.json", "descriptor.json"]),
        (&["field", "--preset", "obs23", "--t", "1", "--L", "8", "--n", "128"], &["field.csv", "field.ppm", "report.json"]),
        (&["mass", "--preset", "obs23", "--times=-1,0,1"], &["mass.csv", "mass.json"]),
        (&["singular", "--preset", "obs23"], &["singular.json"]),
    ];
    let mut compared = 0;
    for (k, (args, files)) in runs.iter().enumerate() {
        for d in &dirs {
            run_cli(args, &d.path().join(k.to_string()))?;
        }
        for f in *files {
            let read = |d: &tempfile::TempDir| std::fs::read(d.path().join(k.to_string()).join(f)).map_err(|e| e.to_string());
            if read(&dirs[0])? != read(&dirs[1])? {
                return Err(format!("{f} differs between runs"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

fn numerical_self_consistency() -> Outcome {
    let spectral = solve_v_identity()?;
    let fd = wirtinger_fd()?;
    let files = deterministic_outputs()?;
    ensure(
        spectral <= 1e-12 && fd <= 1e-6,
        format!("dbar identity {spectral:.1e}, finite differences {fd:.1e}, {files} files byte-identical"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact constraint suite", exact_theorem_suite),
        ("example triple reproduction", remark22_reproduction),
        ("two-point example algebra", obs23_algebra),
        ("singularity geometry", singularity_geometry),
        ("mass quantization", mass_quantization),
        ("m = 1 triviality", m1_triviality),
        ("indeterminacy limits", indeterminacy_limits),
        ("decay", decay),
        ("PDE residual", pde_residual),
        ("numerical self-consistency", numerical_self_consistency),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let id = format!("criterion {:>2}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} PASS {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("{id} FAIL {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
