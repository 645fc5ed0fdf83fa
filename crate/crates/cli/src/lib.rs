//! Command-line runs over the `moutard_core` pipeline.
//!
//! Exit codes: 0 when every exact identity and every requested numeric check
//! passed, 1 when some check failed, 2 for invalid input, refused
//! preconditions and I/O errors.

pub mod descriptor;
pub mod output;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use moutard_core::analysis::{
    decay_exponent, log_radii, ray_limit, singular_points_at, singular_times, DEFAULT_RAY_RADII,
};
use moutard_core::exactpoly::gaussian::format_ratio;
use moutard_core::exactpoly::poly;
use moutard_core::moutard::{assemble_u, time_constraint_defect, verify_triple, Preset, SolutionField};
use moutard_core::numerics::{eval_grid, mass_scan, Grid, ResidualContext, ResidualReport};
use moutard_core::Error;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use descriptor::{assemble_unchecked, Descriptor, Source};
use output::OutDir;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Refused(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Refused(m) => write!(f, "refused: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn core(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "moutard", version, about = "Build, sample and check Moutard-transformation solutions of DS-II")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// remark22, obs23 or obs25(m,n)
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON triple descriptor
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "moutard-out")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify every defining identity exactly and write the descriptor.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Sample U on a grid; writes field.csv and field.ppm.
    Field {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long = "L", default_value_t = 20.0)]
        half_width: f64,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Mass table over several times.
    Mass {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "-1,-0.1,0,0.1,1", allow_hyphen_values = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1e-4)]
        rtol: f64,
    },
    /// Singular times, singular points, ray limits and decay.
    Singular {
        #[command(flatten)]
        common: Common,
        /// Time of the decay fit.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// DS-II residual convergence table.
    Residual {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long = "L", value_delimiter = ',', default_value = "20,40,80")]
        half_widths: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024")]
        n: Vec<usize>,
        /// Extra grid sizes at the first half-width (refinement at fixed box).
        #[arg(long = "refine-n", value_delimiter = ',')]
        refine_n: Vec<usize>,
    },
}

#[derive(Serialize)]
struct Echo {
    command: &'static str,
    preset: Option<String>,
    input: Option<String>,
    parameters: serde_json::Value,
}

struct Timings(Vec<(String, f64)>);

impl Timings {
    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((label.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    fn write(&self, out: &OutDir) -> Result<(), CliError> {
        let map: serde_json::Map<String, serde_json::Value> =
            self.0.iter().map(|(k, v)| (k.clone(), (*v).into())).collect();
        out.write("timings.json", output::json(&map))?;
        Ok(())
    }
}

pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stdout, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stdout, "{e}");
            2
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Build { common } => cmd_build(common, stdout),
        Command::Field { common, t, half_width, n } => cmd_field(common, *t, *half_width, *n, stdout),
        Command::Mass { common, times, rtol } => cmd_mass(common, times, *rtol, stdout),
        Command::Singular { common, t } => cmd_singular(common, *t, stdout),
        Command::Residual {
            common,
            t,
            half_widths,
            n,
            refine_n,
        } => cmd_residual(common, *t, half_widths, n, refine_n, stdout),
    }
}

fn echo(command: &'static str, common: &Common, parameters: serde_json::Value) -> Echo {
    Echo {
        command,
        preset: common.preset.clone(),
        input: common.input.as_ref().map(|p| p.display().to_string()),
        parameters,
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Loads the source and assembles `U`; any failed identity is printed and
/// reported as `Err(1)`.
fn load_solution(common: &Common, stdout: &mut dyn Write) -> Result<Result<(Source, SolutionField), i32>, CliError> {
    let source = Source::resolve(common.preset.as_deref(), common.input.as_deref())?;
    let assembled = assemble_unchecked(&source.descriptor.to_spec()?)?;
    let report = verify_triple(&assembled.triple);
    if !report.all_ok() {
        for (name, ok) in report.checks() {
            if !ok {
                writeln!(stdout, "FAIL {name}").map_err(io)?;
            }
        }
        writeln!(stdout, "triple fails verification; run `build` for the full report").map_err(io)?;
        return Ok(Err(1));
    }
    let s = assemble_u(&assembled.triple).map_err(core)?;
    Ok(Ok((source, s)))
}

#[derive(Serialize)]
struct Check {
    identity: &'static str,
    pass: bool,
}

#[derive(Serialize)]
struct PublishedCheck {
    h: String,
    time_constraint_defect: String,
}

#[derive(Serialize)]
struct BuildReport {
    command: Echo,
    input_digest: String,
    label: String,
    f: String,
    g: String,
    h: String,
    checks: Vec<Check>,
    all_pass: bool,
    trivial_solution: bool,
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    published_h: Option<PublishedCheck>,
}

/// The obs23 `h` exactly as printed, with its disputed temporal term.
const OBS23_PUBLISHED_H: &str = "3/2 z^4 - z^3 - (1+6it) z^2 + (1+6it) z - i(t^2 + 4i t^3) - 1/2";

fn cmd_build(common: &Common, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut timings = Timings(Vec::new());
    let source = Source::resolve(common.preset.as_deref(), common.input.as_deref())?;
    let spec = source.descriptor.to_spec()?;
    let assembled = timings.time("assemble", || assemble_unchecked(&spec))?;
    let triple = &assembled.triple;
    let report = timings.time("verify", || verify_triple(triple));
    let checks: Vec<Check> = report
        .checks()
        .iter()
        .map(|(identity, pass)| Check {
            identity,
            pass: *pass,
        })
        .collect();
    for c in &checks {
        writeln!(stdout, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.identity).map_err(io)?;
    }
    let all_pass = report.all_ok();
    let mut notes = assembled.notes.clone();
    let trivial = all_pass && triple.numerator_factor().is_zero();
    if trivial {
        notes.push("f_z g - h vanishes identically: U is the trivial zero solution".into());
        writeln!(stdout, "NOTE trivial solution (U = 0)").map_err(io)?;
    }
    for n in &assembled.notes {
        writeln!(stdout, "NOTE {n}").map_err(io)?;
    }
    let published_h = (source.preset == Some(Preset::Obs23)).then(|| {
        let printed = poly(OBS23_PUBLISHED_H);
        PublishedCheck {
            time_constraint_defect: time_constraint_defect(triple.f(), triple.g(), &printed).to_string(),
            h: printed.to_string(),
        }
    });
    let out = OutDir::create(&common.out)?;
    let build = BuildReport {
        command: echo("build", common, serde_json::json!({})),
        input_digest: source.descriptor.digest(),
        label: source.descriptor.label.clone(),
        f: triple.f().to_string(),
        g: triple.g().to_string(),
        h: triple.h().to_string(),
        checks,
        all_pass,
        trivial_solution: trivial,
        notes,
        published_h,
    };
    out.write("descriptor.json", source.descriptor.to_json())?;
    out.write("report.json", output::json(&build))?;
    timings.write(&out)?;
    Ok(if all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct GridInfo {
    half_width: f64,
    n: usize,
    spacing: f64,
}

impl GridInfo {
    fn of(g: &Grid) -> Self {
        Self {
            half_width: g.half_width(),
            n: g.n(),
            spacing: g.spacing(),
        }
    }
}

#[derive(Serialize)]
struct FieldReport {
    command: Echo,
    input_digest: String,
    label: String,
    t: f64,
    grid: GridInfo,
    masked: usize,
    max_abs: f64,
    percentile99_abs: f64,
}

fn cmd_field(common: &Common, t: f64, half_width: f64, n: usize, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut timings = Timings(Vec::new());
    let (source, s) = match load_solution(common, stdout)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let grid = Grid::new(half_width, n).map_err(core)?;
    let field = timings.time("eval_grid", || eval_grid(s.u(), &grid, t)).map_err(core)?;
    let out = OutDir::create(&common.out)?;
    timings.time("write", || -> Result<(), CliError> {
        out.write("field.csv", output::field_csv(&field))?;
        out.write("field.ppm", output::field_ppm(&field))?;
        Ok(())
    })?;
    let max_abs = field
        .values
        .iter()
        .zip(&field.mask)
        .filter(|(_, m)| !**m)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    let report = FieldReport {
        command: echo("field", common, serde_json::json!({"t": t, "L": half_width, "n": n})),
        input_digest: source.descriptor.digest(),
        label: source.descriptor.label.clone(),
        t,
        grid: GridInfo::of(&grid),
        masked: field.masked_count(),
        max_abs,
        percentile99_abs: output::percentile99(&field),
    };
    out.write("report.json", output::json(&report))?;
    timings.write(&out)?;
    writeln!(stdout, "wrote field.csv and field.ppm ({n}x{n}, {} masked)", report.masked).map_err(io)?;
    Ok(0)
}

#[derive(Serialize)]
struct MassRow {
    t: f64,
    mass: f64,
    mass_over_pi: f64,
    quadrature_error: f64,
    tail_bound: f64,
    disk_radius: f64,
    flagged: bool,
}

#[derive(Serialize)]
struct MassTable {
    command: Echo,
    input_digest: String,
    label: String,
    rtol: f64,
    median: f64,
    /// Times deviating from the median by more than 1%.
    flagged: Vec<f64>,
    rows: Vec<MassRow>,
    error: Option<String>,
}

fn cmd_mass(common: &Common, times: &[f64], rtol: f64, stdout: &mut dyn Write) -> Result<i32, CliError> {
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(CliError::Input("--rtol must lie in (0, 1)".into()));
    }
    let mut timings = Timings(Vec::new());
    let (source, s) = match load_solution(common, stdout)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let scan = timings.time("mass_scan", || mass_scan(&s, times, rtol));
    let out = OutDir::create(&common.out)?;
    let (rows, median, flagged, error) = match scan {
        Ok(scan) => {
            let rows = scan
                .reports
                .iter()
                .map(|r| MassRow {
                    t: r.t,
                    mass: r.mass,
                    mass_over_pi: r.mass / std::f64::consts::PI,
                    quadrature_error: r.quadrature_error,
                    tail_bound: r.tail_bound,
                    disk_radius: r.disk_radius,
                    flagged: scan.flagged.contains(&r.t),
                })
                .collect();
            (rows, scan.median, scan.flagged, None)
        }
        Err(e) => (Vec::new(), f64::NAN, Vec::new(), Some(e.to_string())),
    };
    let mut csv = String::from("t,mass,mass_over_pi,quadrature_error,tail_bound,disk_radius,flagged\n");
    for r in &rows {
        csv += &format!(
            "{},{},{},{},{},{},{}\n",
            output::float(r.t),
            output::float(r.mass),
            output::float(r.mass_over_pi),
            output::float(r.quadrature_error),
            output::float(r.tail_bound),
            output::float(r.disk_radius),
            r.flagged
        );
        writeln!(
            stdout,
            "t = {:>8} mass = {:.8} = {:.6} pi{}",
            r.t,
            r.mass,
            r.mass_over_pi,
            if r.flagged { "  (flagged)" } else { "" }
        )
        .map_err(io)?;
    }
    let failed = error.is_some();
    if let Some(e) = &error {
        writeln!(stdout, "FAIL {e}").map_err(io)?;
    }
    let table = MassTable {
        command: echo("mass", common, serde_json::json!({"times": times, "rtol": rtol})),
        input_digest: source.descriptor.digest(),
        label: source.descriptor.label.clone(),
        rtol,
        median,
        flagged,
        rows,
        error,
    };
    out.write("mass.csv", csv)?;
    out.write("mass.json", output::json(&table))?;
    timings.write(&out)?;
    Ok(if failed { 1 } else { 0 })
}

#[derive(Serialize)]
struct RootReport {
    lo: f64,
    hi: f64,
    exact: Option<String>,
    approx: f64,
}

#[derive(Serialize)]
struct RayRow {
    theta: f64,
    re: f64,
    im: f64,
    modulus: f64,
    residual: f64,
    error: Option<String>,
}

#[derive(Serialize)]
struct PointReport {
    re: f64,
    im: f64,
    exact: Option<(String, String)>,
    ord_g: u32,
    ord_h: u32,
    ord_num: Option<u32>,
    root_residual: f64,
    ray_limits: Vec<RayRow>,
}

#[derive(Serialize)]
struct SliceReport {
    t0: String,
    points: Vec<PointReport>,
    /// Experimental: Σ min(ord_g, ord_h) over the slice, in units of π.
    predicted_mass_drop_over_pi: u32,
}

#[derive(Serialize)]
struct DecayReport {
    t: f64,
    radius_range: (f64, f64),
    samples: usize,
    exponent: Option<f64>,
    /// `[theta, slope, rms residual]`
    per_theta: Vec<(f64, f64, f64)>,
}

#[derive(Serialize)]
struct SingularReport {
    command: Echo,
    input_digest: String,
    label: String,
    /// Coefficients of Res_z(g, h) in t, lowest degree first, as `[re, im]`.
    resultant: Vec<(String, String)>,
    resultant_identically_zero: bool,
    root_width: f64,
    singular_times: Vec<RootReport>,
    slices: Vec<SliceReport>,
    ray_radii: Vec<f64>,
    decay: DecayReport,
    notes: Vec<String>,
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_singular(common: &Common, t_decay: f64, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut timings = Timings(Vec::new());
    let (source, s) = match load_solution(common, stdout)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let triple = s.triple();
    let mut notes = Vec::new();
    let mut roots = Vec::new();
    let mut slices = Vec::new();
    let mut resultant = Vec::new();
    let mut identically_zero = false;
    match timings.time("singular_times", || singular_times(triple)) {
        Ok(times) => {
            resultant = times
                .resultant
                .coeffs()
                .iter()
                .map(|c| (format_ratio(&c.re), format_ratio(&c.im)))
                .collect();
            for r in &times.real_roots {
                roots.push(RootReport {
                    lo: ratio_f64(&r.lo),
                    hi: ratio_f64(&r.hi),
                    exact: r.exact.as_ref().map(format_ratio),
                    approx: r.approx,
                });
                let Some(t0) = &r.exact else {
                    notes.push(format!("singular time near {} is irrational; points not computed", r.approx));
                    continue;
                };
                let points = timings
                    .time("singular_points", || singular_points_at(triple, t0))
                    .map_err(core)?;
                let t0f = ratio_f64(t0);
                let mut reports = Vec::new();
                for p in &points {
                    let ray_limits = (0..8)
                        .map(|k| {
                            let theta = k as f64 * std::f64::consts::FRAC_PI_4;
                            match ray_limit(&s, p.z0, t0f, theta, &DEFAULT_RAY_RADII) {
                                Ok(r) => RayRow {
                                    theta,
                                    re: r.limit.re,
                                    im: r.limit.im,
                                    modulus: r.limit.norm(),
                                    residual: r.residual,
                                    error: None,
                                },
                                Err(e) => RayRow {
                                    theta,
                                    re: f64::NAN,
                                    im: f64::NAN,
                                    modulus: f64::NAN,
                                    residual: f64::NAN,
                                    error: Some(e.to_string()),
                                },
                            }
                        })
                        .collect();
                    reports.push(PointReport {
                        re: p.z0.re,
                        im: p.z0.im,
                        exact: p.z0_exact.as_ref().map(|z| (format_ratio(&z.re), format_ratio(&z.im))),
                        ord_g: p.ord_g,
                        ord_h: p.ord_h,
                        ord_num: p.ord_num,
                        root_residual: p.residual,
                        ray_limits,
                    });
                    writeln!(
                        stdout,
                        "t0 = {} z0 = {:.12} orders (g, h, num) = ({}, {}, {})",
                        format_ratio(t0),
                        p.z0,
                        p.ord_g,
                        p.ord_h,
                        p.ord_num.map_or("inf".to_string(), |k| k.to_string())
                    )
                    .map_err(io)?;
                }
                slices.push(SliceReport {
                    t0: format_ratio(t0),
                    predicted_mass_drop_over_pi: points.iter().map(|p| p.ord_g.min(p.ord_h)).sum(),
                    points: reports,
                });
            }
        }
        Err(Error::ResultantZeroPolynomial) => {
            identically_zero = true;
            notes.push("Res_z(g, h) vanishes identically: g and h share a factor for every t".into());
        }
        Err(e) => notes.push(format!("singular times unavailable: {e}")),
    }
    for n in &notes {
        writeln!(stdout, "NOTE {n}").map_err(io)?;
    }
    if roots.is_empty() && !identically_zero {
        writeln!(stdout, "no real singular times").map_err(io)?;
    }
    let radii = log_radii(1e2, 1e4, 21);
    let thetas: Vec<f64> = (0..8).map(|k| 0.1 + k as f64 * std::f64::consts::FRAC_PI_4).collect();
    let fit = timings
        .time("decay", || decay_exponent(&s, t_decay, &radii, &thetas))
        .map_err(core)?;
    if let Some(f) = &fit {
        writeln!(stdout, "decay exponent at t = {t_decay}: {:.6}", f.exponent).map_err(io)?;
    }
    let report = SingularReport {
        command: echo("singular", common, serde_json::json!({"t": t_decay})),
        input_digest: source.descriptor.digest(),
        label: source.descriptor.label.clone(),
        resultant,
        resultant_identically_zero: identically_zero,
        root_width: moutard_core::analysis::singular::ROOT_WIDTH,
        singular_times: roots,
        slices,
        ray_radii: DEFAULT_RAY_RADII.to_vec(),
        decay: DecayReport {
            t: t_decay,
            radius_range: (1e2, 1e4),
            samples: radii.len(),
            exponent: fit.as_ref().map(|f| f.exponent),
            per_theta: fit.map(|f| f.per_theta).unwrap_or_default(),
        },
        notes,
    };
    let out = OutDir::create(&common.out)?;
    out.write("singular.json", output::json(&report))?;
    timings.write(&out)?;
    Ok(0)
}

#[derive(Serialize)]
struct ResidualRow {
    #[serde(rename = "L")]
    half_width: f64,
    n: usize,
    spacing: f64,
    rel_l2: f64,
    max_abs: f64,
    conjugate_rel_l2: f64,
    conjugate_max_abs: f64,
    masked: usize,
}

#[derive(Serialize)]
struct ConvergenceTable {
    rows: Vec<ResidualRow>,
    strictly_decreasing: bool,
    /// `rel_l2` allowed at the finest level by first-order decay from the first.
    first_order_bound: f64,
    first_order_met: bool,
    conjugate_strictly_decreasing: bool,
    conjugate_first_order_met: bool,
}

#[derive(Serialize)]
struct ResidualTable {
    command: Echo,
    input_digest: String,
    label: String,
    t: f64,
    window: f64,
    /// Grids of the requested sequence.
    sequence: ConvergenceTable,
    /// Grid-size refinement at the first half-width, when requested.
    fixed_box: Option<ConvergenceTable>,
    all_checks_pass: bool,
}

fn residual_row(ds2: &ResidualReport, conj: &ResidualReport, grid: &Grid) -> ResidualRow {
    ResidualRow {
        half_width: grid.half_width(),
        n: grid.n(),
        spacing: grid.spacing(),
        rel_l2: ds2.rel_l2,
        max_abs: ds2.max_abs,
        conjugate_rel_l2: conj.rel_l2,
        conjugate_max_abs: conj.max_abs,
        masked: ds2.masked,
    }
}

/// `ratio` is the first-order reduction factor from the first to the last grid.
fn convergence(rows: Vec<ResidualRow>, ratio: f64) -> ConvergenceTable {
    let check = |vals: Vec<f64>| {
        let zero = vals.iter().all(|v| *v == 0.0);
        let decreasing = zero || vals.windows(2).all(|w| w[1] < w[0]);
        let bound = vals.first().copied().unwrap_or(0.0) * ratio;
        let met = zero || vals.last().is_some_and(|v| *v <= bound);
        (decreasing, bound, met)
    };
    let (strictly_decreasing, first_order_bound, first_order_met) = check(rows.iter().map(|r| r.rel_l2).collect());
    let (conjugate_strictly_decreasing, _, conjugate_first_order_met) =
        check(rows.iter().map(|r| r.conjugate_rel_l2).collect());
    ConvergenceTable {
        rows,
        strictly_decreasing,
        first_order_bound,
        first_order_met,
        conjugate_strictly_decreasing,
        conjugate_first_order_met,
    }
}

impl ConvergenceTable {
    fn ok(&self) -> bool {
        self.strictly_decreasing
            && self.first_order_met
            && self.conjugate_strictly_decreasing
            && self.conjugate_first_order_met
    }
}

fn cmd_residual(
    common: &Common,
    t: f64,
    half_widths: &[f64],
    ns: &[usize],
    refine_n: &[usize],
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if half_widths.len() != ns.len() || half_widths.is_empty() {
        return Err(CliError::Input("--L and --n must list the same number of values".into()));
    }
    let grids = half_widths
        .iter()
        .zip(ns)
        .map(|(&l, &n)| Grid::new(l, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(core)?;
    let mut timings = Timings(Vec::new());
    let (source, s) = match load_solution(common, stdout)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let t_exact = BigRational::from_float(t).ok_or_else(|| CliError::Input("non-finite --t".into()))?;
    if !s.is_trivial() && !singular_points_at(s.triple(), &t_exact).map_err(core)?.is_empty() {
        return Err(CliError::Refused(format!(
            "t = {t} is a singular time; the residual is undefined there (see `moutard singular`)"
        )));
    }
    let ctx = timings.time("derivatives", || ResidualContext::new(&s));
    let run = |grid: &Grid, timings: &mut Timings, stdout: &mut dyn Write| -> Result<ResidualRow, CliError> {
        let label = format!("residual L={} n={}", grid.half_width(), grid.n());
        let (ds2, conj) = timings.time(&label, || (ctx.ds2(grid, t), ctx.conjugate(grid, t)));
        let (ds2, conj) = (ds2.map_err(core)?, conj.map_err(core)?);
        writeln!(
            stdout,
            "L = {:>6} n = {:>5} rel_l2 = {:.6e} conjugate rel_l2 = {:.6e}",
            grid.half_width(),
            grid.n(),
            ds2.rel_l2,
            conj.rel_l2
        )
        .map_err(io)?;
        Ok(residual_row(&ds2, &conj, grid))
    };
    let mut rows = Vec::new();
    for g in &grids {
        rows.push(run(g, &mut timings, stdout)?);
    }
    let l_ratio = grids[0].half_width() / grids[grids.len() - 1].half_width();
    let sequence = convergence(rows, l_ratio.min(1.0));
    let fixed_box = if refine_n.is_empty() {
        None
    } else {
        let l = grids[0].half_width();
        let refined = refine_n
            .iter()
            .map(|&n| Grid::new(l, n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(core)?;
        let mut rows = Vec::new();
        for g in &refined {
            rows.push(run(g, &mut timings, stdout)?);
        }
        let h_ratio = refined[refined.len() - 1].spacing() / refined[0].spacing();
        Some(convergence(rows, h_ratio.min(1.0)))
    };
    let all_checks_pass = sequence.ok() && fixed_box.as_ref().is_none_or(|t| t.ok());
    for (name, table) in [("sequence", Some(&sequence)), ("fixed box", fixed_box.as_ref())] {
        if let Some(table) = table {
            writeln!(
                stdout,
                "{} {name}: strictly decreasing = {}, first-order bound {:.3e} met = {}",
                if table.ok() { "PASS" } else { "FAIL" },
                table.strictly_decreasing && table.conjugate_strictly_decreasing,
                table.first_order_bound,
                table.first_order_met && table.conjugate_first_order_met
            )
            .map_err(io)?;
        }
    }
    let report = ResidualTable {
        command: echo(
            "residual",
            common,
            serde_json::json!({"t": t, "L": half_widths, "n": ns, "refine_n": refine_n}),
        ),
        input_digest: source.descriptor.digest(),
        label: source.descriptor.label.clone(),
        t,
        window: moutard_core::numerics::DEFAULT_WINDOW,
        sequence,
        fixed_box,
        all_checks_pass,
    };
    let out = OutDir::create(&common.out)?;
    out.write("residual.json", output::json(&report))?;
    timings.write(&out)?;
    Ok(if all_checks_pass { 0 } else { 1 })
}

/// Reloads a descriptor file written by `build`.
pub fn load_descriptor(path: &std::path::Path) -> Result<Descriptor, CliError> {
    let text = std::fs::read_to_string(path).map_err(io)?;
    Descriptor::from_json(&text)
}
