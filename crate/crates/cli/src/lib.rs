//! Command-line front end for `theta-atlas-core`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! numerical degeneracy or I/O failure, 3 on bad arguments.

pub mod args;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use theta_atlas_core::analytic::{self, EvalPoint, PrecisionContext, UnitCircle};
use theta_atlas_core::bounds::{self, AnnulusSpec};
use theta_atlas_core::{mp, qseries, Error, Extent};

use args::{Cli, Command, Format};
use report::Report;

/// Environment variable overriding the default precision.
pub const PREC_ENV: &str = "THETA_ATLAS_PREC_BITS";
pub const DEFAULT_BITS: usize = 256;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: u8, msg: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("theta-atlas: {msg}\n"),
        }
    }
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OutOfDomain { .. } | Error::InvalidAnnulus { .. } | Error::InvalidIndex(_) | Error::NonUnitConstant(_) => EXIT_USAGE,
        _ => EXIT_DEGENERATE,
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// renders its report. `env_bits` is the value of [`PREC_ENV`], if set.
pub fn dispatch<I, T>(args: I, env_bits: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let bits = match (cli.prec_bits, env_bits) {
        (Some(b), _) => b,
        (None, Some(v)) => match v.trim().parse() {
            Ok(b) => b,
            Err(_) => return Outcome::error(EXIT_USAGE, format!("{PREC_ENV} must be an integer, got `{v}`")),
        },
        (None, None) => DEFAULT_BITS,
    };
    let ctx = match PrecisionContext::with_bits(bits) {
        Ok(c) => c,
        Err(e) => return Outcome::error(EXIT_USAGE, e),
    };
    let start = Instant::now();
    let result = run(&cli, &ctx);
    let (mut report, csv) = match result {
        Ok(r) => r,
        Err(Failure::Core(e)) => return Outcome::error(exit_code(&e), e),
        Err(Failure::Usage(m)) => return Outcome::error(EXIT_USAGE, m),
        Err(Failure::Io(m)) => return Outcome::error(EXIT_DEGENERATE, m),
    };
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
    let body = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => match csv {
            Some(rows) => rows,
            None => return Outcome::error(EXIT_USAGE, format!("csv output is not available for `{}`", report.command)),
        },
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::error(EXIT_DEGENERATE, format!("{}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

type Run = Result<(Report, Option<String>), Failure>;

fn run(cli: &Cli, ctx: &PrecisionContext) -> Run {
    let bits = ctx.mantissa_bits;
    match &cli.command {
        Command::Eval { q, z } => eval(*q, *z, ctx),
        Command::Zeros { q, count } => zeros(*q, *count, ctx),
        Command::Count { q, n, radius } => count(*q, *n, *radius, ctx),
        Command::Certify {
            delta0,
            delta,
            grid_moduli,
            grid_phases,
            samples,
        } => certify(AnnulusSpec::new(*delta0, *delta)?, *grid_moduli, *grid_phases, *samples, ctx),
        Command::Lemma { n_max, j_max, nu_max } => {
            let r = qseries::verify_lemma1(*n_max, *j_max, *nu_max)?;
            let report = Report::new(
                "lemma",
                bits,
                json!({"n_max": n_max, "j_max": j_max, "nu_max": nu_max}),
                to_value(&r),
            )
            .order("q_order", r.order)
            .check("no_violations", r.success);
            Ok((report, None))
        }
        Command::Identity { zorder, qorder } => {
            let r = qseries::verify_product_identity(*zorder, *qorder)?;
            let report = Report::new("identity", bits, json!({"zorder": zorder, "qorder": qorder}), to_value(&r))
                .order("z_order", *zorder)
                .order("q_order", *qorder)
                .check("match", r.matched);
            Ok((report, None))
        }
        Command::Gamma { p, r, r_max, order } => gamma(*p, *r, *r_max, *order, bits),
        Command::Plot { q, count, svg: path } => plot(*q, *count, path, ctx),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payload serializes")
}

fn csv_rows<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn mp_pair(z: &mp::MpComplex) -> Value {
    json!({
        "value": z.to_c64(),
        "re": mp::to_decimal(&z.re),
        "im": mp::to_decimal(&z.im),
    })
}

fn eval(q: Complex64, z: Complex64, ctx: &PrecisionContext) -> Run {
    let pt = EvalPoint::new(q, z, ctx)?;
    let result = json!({
        "theta": mp_pair(&analytic::theta_eval(&pt, ctx)),
        "theta_prime": mp_pair(&analytic::theta_prime_eval(&pt, ctx)),
        "u": mp_pair(&analytic::u_eval(&pt, ctx)),
        "pochhammer_inf": mp_pair(&analytic::pochhammer_num(&pt.q, Extent::Infinite, ctx)),
    });
    let report = Report::new(
        "eval",
        ctx.mantissa_bits,
        json!({"q": q, "z": z, "eval_tolerance": ctx.eval_tolerance}),
        result,
    );
    Ok((report, None))
}

#[derive(Serialize)]
struct ZeroRow {
    index: usize,
    re: f64,
    im: f64,
    modulus: f64,
    multiplicity: usize,
    residual: f64,
    scaled_residual: f64,
}

fn zeros(q: Complex64, count: usize, ctx: &PrecisionContext) -> Run {
    let r = analytic::find_zeros(q, count, ctx)?;
    let rows: Vec<ZeroRow> = r
        .zeros
        .iter()
        .map(|z| ZeroRow {
            index: z.index,
            re: z.location.re,
            im: z.location.im,
            modulus: z.location.norm(),
            multiplicity: z.multiplicity,
            residual: z.residual,
            scaled_residual: z.scaled_residual,
        })
        .collect();
    let report = Report::new("zeros", ctx.mantissa_bits, json!({"q": q, "count": count}), to_value(&r))
        .order("quadrature_points", r.quadrature_points)
        .order("continuation_steps", r.continuation_steps)
        .check("contour_cross_check", r.cross_check)
        .check("residuals", r.residuals_within(ctx.eval_tolerance));
    Ok((report, Some(csv_rows(&rows))))
}

#[derive(Serialize)]
struct CountRow {
    q_re: f64,
    q_im: f64,
    radius: f64,
    count: i64,
    points: usize,
    residual: f64,
    precision_bits: usize,
}

fn count(q: Complex64, n: Option<usize>, radius: Option<f64>, ctx: &PrecisionContext) -> Run {
    let c = match (n, radius) {
        (Some(n), _) => analytic::count_zeros_in_theorem_disk(q, n, ctx)?,
        (None, Some(r)) => analytic::count_zeros(q, r, ctx)?,
        (None, None) => return Err(Failure::Usage("need --n or --radius".into())),
    };
    let row = CountRow {
        q_re: q.re,
        q_im: q.im,
        radius: c.radius,
        count: c.count,
        points: c.points,
        residual: c.residual,
        precision_bits: c.precision_bits,
    };
    let mut report = Report::new("count", ctx.mantissa_bits, json!({"q": q, "n": n, "radius": radius}), to_value(&c))
        .order("quadrature_points", c.points)
        .check("integer_residual", c.residual < 1e-3);
    if let Some(n) = n {
        report = report.check("count_equals_n", c.count == n as i64);
    }
    Ok((report, Some(csv_rows(&[row]))))
}

/// `moduli × phases` points of the closed annulus, endpoints of the modulus
/// range included, in row-major order.
pub fn annulus_grid(a: &AnnulusSpec, moduli: usize, phases: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(moduli * phases);
    for i in 0..moduli {
        let t = if moduli == 1 { 0.0 } else { i as f64 / (moduli - 1) as f64 };
        let r = a.delta0 + t * (a.delta - a.delta0);
        for k in 0..phases {
            out.push(Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / phases as f64));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub q: Complex64,
    pub margin: f64,
}

/// Sampled Rouché ratios at `n` over the grid.
pub fn rouche_witness(grid: &[Complex64], n: usize, samples: usize, ctx: &PrecisionContext) -> Result<Vec<WitnessPoint>, Error> {
    let circle = UnitCircle::new(samples, ctx);
    grid.iter()
        .map(|&q| {
            Ok(WitnessPoint {
                q,
                margin: bounds::rouche_margin_on(q, n, &circle, ctx)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalScan {
    /// `counts[n-1][i]`: count in `|z| < |q_i|^{-n-1/2}`, `None` when the
    /// contour passed too close to a zero.
    pub counts: Vec<Vec<Option<i64>>>,
    /// Smallest `n` such that every count from `n` to `n_max` equals its disk index.
    pub empirical_n: Option<usize>,
}

/// Zero counts on the grid for `n = 1..=n_max`.
pub fn empirical_scan(grid: &[Complex64], n_max: usize, ctx: &PrecisionContext) -> Result<EmpiricalScan, Error> {
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(grid.len());
        for &q in grid {
            match analytic::count_zeros_in_theorem_disk(q, n, ctx) {
                Ok(c) => row.push(Some(c.count)),
                Err(Error::ZeroNearContour { .. }) => row.push(None),
                Err(e) => return Err(e),
            }
        }
        counts.push(row);
    }
    let exact = |n: usize| counts[n - 1].iter().all(|c| *c == Some(n as i64));
    let mut empirical_n = None;
    for n in (1..=n_max).rev() {
        if !exact(n) {
            break;
        }
        empirical_n = Some(n);
    }
    Ok(EmpiricalScan { counts, empirical_n })
}

fn certify(a: AnnulusSpec, moduli: usize, phases: usize, samples: usize, ctx: &PrecisionContext) -> Run {
    if moduli == 0 || phases == 0 {
        return Err(Failure::Usage("witness grid needs at least one modulus and one phase".into()));
    }
    if samples < 16 {
        return Err(Failure::Usage("--samples must be at least 16".into()));
    }
    let cert = bounds::certify_threshold(&a)?;
    let grid = annulus_grid(&a, moduli, phases);
    let witness = rouche_witness(&grid, cert.n0, samples, ctx)?;
    let scan = empirical_scan(&grid, cert.n0, ctx)?;
    let max_margin = witness.iter().map(|w| w.margin).fold(0.0, f64::max);
    let result = json!({
        "certificate": cert,
        "certified_n0": cert.n0,
        "empirical": {
            "note": "smallest n with exact counts at the grid points only; not a certificate",
            "empirical_n": scan.empirical_n,
            "counts": scan.counts,
        },
        "rouche_witness": {
            "n": cert.n0,
            "samples": samples,
            "max_margin": max_margin,
            "points": witness,
        },
    });
    let report = Report::new(
        "certify",
        ctx.mantissa_bits,
        json!({"delta0": a.delta0, "delta": a.delta, "grid_moduli": moduli, "grid_phases": phases, "samples": samples}),
        result,
    )
    .order("bound_precision_bits", cert.precision_bits)
    .order("u_series_order", cert.suite_at_delta.u_order)
    .order("samples", samples)
    .check("certificate_conditions", cert.conditions_hold())
    .check("rouche_below_one", max_margin < 1.0)
    .check("counts_exact_at_n0", scan.empirical_n.is_some());
    Ok((report, None))
}

#[derive(Serialize)]
struct GammaRow {
    p: usize,
    r: usize,
    order: usize,
    checked: usize,
    equalities: usize,
    passed: bool,
}

fn gamma(p: Option<usize>, r: Option<usize>, r_max: usize, order: usize, bits: usize) -> Run {
    let pairs: Vec<(usize, usize)> = match (p, r) {
        (Some(p), Some(r)) => vec![(p, r)],
        _ => (1..=r_max).flat_map(|r| (1..=r).map(move |p| (p, r))).collect(),
    };
    let reports = pairs
        .iter()
        .map(|&(p, r)| qseries::verify_gamma_domination(p, r, order))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<GammaRow> = reports
        .iter()
        .map(|g| GammaRow {
            p: g.p,
            r: g.r,
            order: g.order,
            checked: g.checked,
            equalities: g.equalities,
            passed: g.passed,
        })
        .collect();
    let all = reports.iter().all(|g| g.passed);
    let report = Report::new(
        "gamma",
        bits,
        json!({"p": p, "r": r, "r_max": r_max, "order": order}),
        to_value(&reports),
    )
    .order("q_order", order)
    .check("domination", all);
    Ok((report, Some(csv_rows(&rows))))
}

fn plot(q: Complex64, count: usize, path: &std::path::Path, ctx: &PrecisionContext) -> Run {
    let r = analytic::find_zeros(q, count, ctx)?;
    let radii: Vec<f64> = (1..=count).map(|n| q.norm().powf(-(n as f64) - 0.5)).collect();
    svg::write_svg(&r, &radii, path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let report = Report::new(
        "plot",
        ctx.mantissa_bits,
        json!({"q": q, "count": count, "svg": path.display().to_string()}),
        to_value(&r),
    )
    .order("quadrature_points", r.quadrature_points)
    .check("contour_cross_check", r.cross_check);
    Ok((report, None))
}
