//! Command-line front end: curve export (CSV/SVG/JSON), period tables,
//! identity verification reports, and the closed-curve search.
//!
//! Output is deterministic: numbers are printed with 9 significant digits,
//! '.' decimal separator and '\n' line endings, and JSON reports use a fixed
//! (sorted) key order. Exit codes: 0 success, 2 usage error, 3 domain error,
//! 4 tolerance violation.

use crate::error::Error;
use crate::otsuki;
use crate::profile::{self, NeckParam};
use crate::simons;
use crate::spaceform::{clifford_sff, CliffordSpec, SpaceForm};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "catenoid",
    version,
    about = "Catenoids and Clifford minimal hypersurfaces in space forms: \
             generating curves, periods, closed-curve search, identity checks"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a generating curve (half-plane branches for c <= 0, closed
    /// disk curve for c > 0) and export it
    Curve(CurveArgs),
    /// Tabulate the oscillation period T(a) of spherical rotation
    /// hypersurfaces, with the upper turning value and first-integral constant
    Period(PeriodArgs),
    /// Verify curvature identities along a catenoid profile and on Clifford
    /// data; nonzero exit if any residual exceeds its tolerance
    Verify(VerifyArgs),
    /// Find initial values a whose generating curve closes up after p periods
    /// in q turns (period 2 pi p / q)
    FindClosed(FindClosedArgs),
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Ambient curvature
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    /// Hypersurface dimension
    #[arg(long)]
    pub n: u32,
    /// Neck parameter (c <= 0) or initial support value (c > 0)
    #[arg(long)]
    pub a: f64,
    /// Number of sample points
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Quadrature / ODE tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Upper radial limit for c <= 0 curves (default: a + 3)
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Number of full turns traced for c > 0 curves (theta in [0, q T])
    #[arg(long, default_value_t = 10)]
    pub q: u32,
    /// Output format
    #[arg(long, value_parser = ["csv", "svg", "json"], default_value = "csv")]
    pub format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PeriodArgs {
    /// Ambient curvature (must be positive; the period is c-invariant)
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Hypersurface dimension
    #[arg(long)]
    pub n: u32,
    /// Single initial value in (0, 1/sqrt(n))
    #[arg(long)]
    pub a: Option<f64>,
    /// Sweep range start
    #[arg(long)]
    pub a_min: Option<f64>,
    /// Sweep range end
    #[arg(long)]
    pub a_max: Option<f64>,
    /// Number of sweep points
    #[arg(long, default_value_t = 100)]
    pub a_steps: usize,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Ambient curvature
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    /// Hypersurface dimension (>= 3)
    #[arg(long)]
    pub n: u32,
    /// Neck parameter
    #[arg(long)]
    pub a: f64,
    /// Arclength horizon of the profile
    #[arg(long, default_value_t = 10.0)]
    pub s_max: f64,
    /// Profile grid points
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
    /// ODE tolerance
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Relative tolerance for the analytic elliptic residual
    #[arg(long, default_value_t = 1e-10)]
    pub tol_residual: f64,
    /// Absolute tolerance for the finite-difference residual (resolution-bound
    /// at the default grid; the convergence order is the sharper contract)
    #[arg(long, default_value_t = 1e-2)]
    pub tol_fd: f64,
    /// Tolerance for first-integral drift, relative to the cancelling terms
    #[arg(long, default_value_t = 1e-8)]
    pub tol_drift: f64,
    /// Seed for the random derivative-decomposition trials
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Testing aid: add this to dx1 at every profile point before checking
    #[arg(long, default_value_t = 0.0, hide = true, allow_hyphen_values = true)]
    pub perturb: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FindClosedArgs {
    /// Hypersurface dimension
    #[arg(long)]
    pub n: u32,
    /// Periods per closure
    #[arg(long)]
    pub p: u32,
    /// Turns per closure (need 1/2 < p/q < 1)
    #[arg(long)]
    pub q: u32,
    /// Scan resolution over the initial-value range
    #[arg(long, default_value_t = 2000)]
    pub a_steps: usize,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Outcome of a CLI run, carrying the mandated process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Tolerance(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Tolerance(m) => write!(f, "tolerance violation: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => e.exit_code(),
            CliError::Tolerance(_) => 4,
            CliError::Io(_) => 3,
        }
    }
}

pub fn run(config: RunConfig) -> std::result::Result<(), CliError> {
    match config.command {
        Command::Curve(args) => cmd_curve(args),
        Command::Period(args) => cmd_period(args),
        Command::Verify(args) => cmd_verify(args),
        Command::FindClosed(args) => cmd_find_closed(args),
    }
}

/// 9 significant digits, locale-independent.
fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

fn check_tol(tol: f64) -> std::result::Result<(), CliError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> std::result::Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(CliError::Io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn metadata_lines(c: f64, n: u32, a: f64, tol: f64) -> String {
    format!(
        "# schema=1\n# c={} n={n} a={} tol={} generator=catenoid-{}\n",
        fmt9(c),
        fmt9(a),
        fmt9(tol),
        env!("CARGO_PKG_VERSION")
    )
}

pub fn cmd_curve(args: CurveArgs) -> std::result::Result<(), CliError> {
    check_tol(args.tol)?;
    if args.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    // rows of (param, x, y), ordered by param
    let points: Vec<[f64; 3]> = if args.c > 0.0 {
        let t = otsuki::period(args.n, args.a, args.tol)?;
        let theta_max = args.q as f64 * t;
        let support = otsuki::integrate_support(args.n, args.a, theta_max, args.tol, args.grid)?;
        let disk = otsuki::disk_coords(&support);
        support
            .iter()
            .zip(&disk)
            .map(|(s, xy)| [s.theta, xy[0], xy[1]])
            .collect()
    } else {
        let sf = SpaceForm::new(args.c, args.n)?;
        let a = NeckParam::new(args.a)?;
        let y_max = args.y_max.unwrap_or(args.a + 3.0);
        let branch = profile::generating_curve(&sf, &a, y_max, args.grid, args.tol)?;
        // both symmetric branches, parametrized by the signed radial value
        let mut rows: Vec<[f64; 3]> =
            branch.iter().rev().map(|p| [-p.y, -p.x, p.y]).collect();
        rows.extend(branch.iter().skip(1).map(|p| [p.y, p.x, p.y]));
        rows
    };
    for row in &points {
        if !row.iter().all(|v| v.is_finite()) {
            return Err(CliError::Lib(Error::Numerics("non-finite curve point".into())));
        }
    }
    let content = match args.format.as_str() {
        "csv" => {
            let mut s = metadata_lines(args.c, args.n, args.a, args.tol);
            s.push_str("param,x,y\n");
            for row in &points {
                let _ = writeln!(s, "{},{},{}", fmt9(row[0]), fmt9(row[1]), fmt9(row[2]));
            }
            s
        }
        "svg" => render_svg(args.c, &points),
        "json" => {
            let v = json!({
                "metadata": {
                    "a": args.a,
                    "c": args.c,
                    "generator": format!("catenoid-{}", env!("CARGO_PKG_VERSION")),
                    "n": args.n,
                    "tol": args.tol,
                },
                "points": points.iter().map(|r| json!([r[0], r[1], r[2]])).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("static schema");
            s.push('\n');
            s
        }
        _ => unreachable!("clap restricts the format values"),
    };
    emit(&args.out, &content)
}

/// SVG 1.1 polyline with a reference frame: the unit circle for c > 0, the
/// half-plane boundary axis for c < 0, nothing for c = 0. 5% viewport padding.
fn render_svg(c: f64, points: &[[f64; 3]]) -> String {
    // y grows upward in our coordinates, downward in SVG: flip it
    let pts: Vec<(f64, f64)> = points.iter().map(|r| (r[1], -r[2])).collect();
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if c > 0.0 {
        // frame is the unit disk
        x0 = x0.min(-1.0);
        x1 = x1.max(1.0);
        y0 = y0.min(-1.0);
        y1 = y1.max(1.0);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (vx, vy, vw, vh) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = 0.004 * vw.max(vh);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        fmt9(vx),
        fmt9(vy),
        fmt9(vw),
        fmt9(vh)
    );
    if c > 0.0 {
        let _ = writeln!(
            s,
            "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"gray\" stroke-width=\"{}\"/>",
            fmt9(stroke)
        );
    } else if c < 0.0 {
        let _ = writeln!(
            s,
            "  <line x1=\"{}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"gray\" stroke-width=\"{}\"/>",
            fmt9(vx),
            fmt9(vx + vw),
            fmt9(stroke)
        );
    }
    s.push_str("  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"");
    s.push_str(&fmt9(stroke));
    s.push_str("\" points=\"");
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", fmt9(*x), fmt9(*y));
    }
    s.push_str("\"/>\n</svg>\n");
    s
}

pub fn cmd_period(args: PeriodArgs) -> std::result::Result<(), CliError> {
    check_tol(args.tol)?;
    if !(args.c > 0.0) {
        return Err(CliError::Usage(format!(
            "period tables require c > 0 (the angle period is c-invariant), got {}",
            args.c
        )));
    }
    let sweep: Vec<f64> = match (args.a, args.a_min, args.a_max) {
        (Some(a), None, None) => vec![a],
        (None, Some(lo), Some(hi)) => {
            if args.a_steps < 2 || !(hi > lo) {
                return Err(CliError::Usage("need --a-min < --a-max and --a-steps >= 2".into()));
            }
            (0..args.a_steps)
                .map(|i| lo + (hi - lo) * i as f64 / (args.a_steps - 1) as f64)
                .collect()
        }
        _ => {
            return Err(CliError::Usage(
                "pass either --a or the sweep triple --a-min/--a-max/--a-steps".into(),
            ))
        }
    };
    let single = sweep.len() == 1;
    let mut s = format!(
        "# schema=1\n# n={} tol={} generator=catenoid-{}\n",
        args.n,
        fmt9(args.tol),
        env!("CARGO_PKG_VERSION")
    );
    s.push_str("a,a1,C,T,T_over_pi,error\n");
    for a in sweep {
        let row = otsuki::upper_root_a1(args.n, a).and_then(|a1| {
            let c_const = otsuki::capital_c(args.n, a)?;
            let t = otsuki::period(args.n, a, args.tol)?;
            Ok((a1, c_const, t))
        });
        match row {
            Ok((a1, c_const, t)) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},",
                    fmt9(a),
                    fmt9(a1),
                    fmt9(c_const),
                    fmt9(t),
                    fmt9(t / std::f64::consts::PI)
                );
            }
            Err(e) if single => return Err(e.into()),
            Err(e) => {
                let msg = e.to_string().replace([',', '\n'], ";");
                let _ = writeln!(s, "{},,,,,{msg}", fmt9(a));
            }
        }
    }
    emit(&args.out, &s)
}

pub fn cmd_verify(args: VerifyArgs) -> std::result::Result<(), CliError> {
    check_tol(args.tol)?;
    if args.n < 3 {
        return Err(CliError::Usage(format!("verification requires n >= 3, got {}", args.n)));
    }
    if args.grid < 3 {
        return Err(CliError::Usage("--grid must be at least 3".into()));
    }
    let sf = SpaceForm::new(args.c, args.n)?;
    let a = NeckParam::new(args.a)?;
    let mut pts = profile::integrate_profile(&sf, &a, args.s_max, args.tol, args.grid)?;
    for p in pts.iter_mut() {
        p.dx1 += args.perturb;
    }

    let mut drift = 0.0f64;
    let mut trace = 0.0f64;
    for p in &pts {
        // drift relative to the cancelling terms: for c < 0 they grow like
        // e^{2s} and their difference saturates at round-off of that size
        let scale = 1.0 + (args.c * p.x1 * p.x1).abs() + p.dx1 * p.dx1;
        drift = drift.max(profile::first_integral_residual(&sf, &a, p).abs() / scale);
        trace = trace.max(simons::principal_curvatures(&sf, p)?.trace().abs());
    }
    let residuals = simons::simons_residual(&sf, &a, &pts)?;
    let mut res_rel = 0.0f64;
    for (p, r) in pts.iter().zip(&residuals) {
        let scale = simons::sff_norm_sq(&sf, &a, p.x1)?.powi(2).max(1.0);
        res_rel = res_rel.max(r.abs() / scale);
    }
    let res_fd = simons::simons_residual_fd(&sf, &a, &pts)?
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));

    // Clifford |A|^2 = n c over every splitting (reference curvature 1 when
    // the ambient space is not spherical)
    let c_ref = if args.c > 0.0 { args.c } else { 1.0 };
    let mut clifford_gap = 0.0f64;
    for m in 1..args.n {
        let sff = clifford_sff(&CliffordSpec::new(m, args.n, c_ref)?);
        clifford_gap = clifford_gap.max((sff.norm_sq - args.n as f64 * c_ref).abs());
        clifford_gap = clifford_gap.max(sff.trace().abs());
    }

    // random rotation-structured derivative tensors: decomposition identity
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut identity_gap = 0.0f64;
    for _ in 0..args.trials {
        let data = simons::random_rotation_admissible(args.n as usize, &mut rng)?;
        let (lhs, rhs) = simons::identity_check(&data)?;
        identity_gap = identity_gap.max((lhs - rhs).abs() / lhs.max(1.0));
    }

    let checks = [
        ("clifford_norm_gap", clifford_gap, 1e-12),
        ("first_integral_drift", drift, args.tol_drift),
        ("identity_max_rel_gap", identity_gap, 1e-10),
        ("minimality_trace", trace, 1e-10),
        ("simons_residual_fd", res_fd, args.tol_fd),
        ("simons_residual_rel", res_rel, args.tol_residual),
    ];
    let all_pass = checks.iter().all(|(_, v, t)| v <= t);
    let mut check_map = serde_json::Map::new();
    for (name, value, threshold) in checks {
        check_map.insert(
            name.to_string(),
            json!({ "pass": value <= threshold, "threshold": threshold, "value": value }),
        );
    }
    let report = json!({
        "checks": check_map,
        "config": {
            "a": args.a,
            "c": args.c,
            "grid": args.grid,
            "n": args.n,
            "s_max": args.s_max,
            "seed": args.seed,
            "tol": args.tol,
            "trials": args.trials,
        },
        "pass": all_pass,
    });
    let mut s = serde_json::to_string_pretty(&report).expect("static schema");
    s.push('\n');
    emit(&args.out, &s)?;
    if !all_pass {
        let failed: Vec<&str> = [
            ("clifford_norm_gap", clifford_gap, 1e-12),
            ("first_integral_drift", drift, args.tol_drift),
            ("identity_max_rel_gap", identity_gap, 1e-10),
            ("minimality_trace", trace, 1e-10),
            ("simons_residual_fd", res_fd, args.tol_fd),
            ("simons_residual_rel", res_rel, args.tol_residual),
        ]
        .iter()
        .filter(|(_, v, t)| v > t)
        .map(|(n, _, _)| *n)
        .collect();
        return Err(CliError::Tolerance(failed.join(", ")));
    }
    Ok(())
}

pub fn cmd_find_closed(args: FindClosedArgs) -> std::result::Result<(), CliError> {
    check_tol(args.tol)?;
    if args.p == 0 || args.q == 0 {
        return Err(CliError::Usage("--p and --q must be positive".into()));
    }
    let ratio = args.p as f64 / args.q as f64;
    if !(ratio > 0.5 && ratio < 1.0) {
        return Err(CliError::Usage(format!(
            "winding ratio p/q = {}/{} must lie strictly between 1/2 and 1",
            args.p, args.q
        )));
    }
    let roots = otsuki::find_closed(args.n, args.p, args.q, args.a_steps, args.tol)?;
    let mut s = format!(
        "# schema=1\n# n={} p={} q={} a_steps={} tol={} generator=catenoid-{}\n",
        args.n,
        args.p,
        args.q,
        args.a_steps,
        fmt9(args.tol),
        env!("CARGO_PKG_VERSION")
    );
    s.push_str("a,T,T_over_pi\n");
    for a in roots {
        let t = otsuki::period(args.n, a, args.tol)?;
        let _ = writeln!(s, "{},{},{}", fmt9(a), fmt9(t), fmt9(t / std::f64::consts::PI));
    }
    emit(&args.out, &s)
}
