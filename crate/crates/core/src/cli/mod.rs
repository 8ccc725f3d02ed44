//! The `spincat` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid flags, 2 degenerate cat, 3 verification
//! failure, 4 I/O failure, 5 no Heisenberg-limited point found.

mod args;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;
use serde::Serialize;

pub use args::{parse_angle, Cli, Command, Config, Format};
use args::{CrbArgs, FindHlArgs, ScanArgs, VerifyArgs};

use crate::catstate::{normalization, CatAngles, CatParams};
use crate::closedform::{verify, ClosedFormCase, Verification};
use crate::dicke::SpinJ;
use crate::error::Error;
use crate::metrology::{crb, Generator};
use crate::scan::{
    find_hl, format_sig, grid_scan, CellValue, HlPoint, HlSearchSpec, ScanSpec, DEFAULT_CAP,
    DEFAULT_HL_TOLERANCE, DEFAULT_RESOLUTION, DEFAULT_SEEDS,
};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_NO_HL: u8 = 5;

const JSON_DIGITS: usize = 15;
const DEFAULT_VERIFY_RES: usize = 50;
const DEFAULT_VERIFY_TOL: f64 = 1e-9;

/// A failed run: exit code plus the message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, message)
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateCat { .. } => EXIT_DEGENERATE,
            Error::NoHlFound { .. } => EXIT_NO_HL,
            _ => EXIT_INVALID,
        };
        Self::new(code, e.to_string())
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spincat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Runs a parsed command line, writing the report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| {
            if e.kind() == io::ErrorKind::InvalidData {
                Failure::invalid(format!("{}: {e}", p.display()))
            } else {
                Failure::io(p, e)
            }
        })?,
        None => Config::default(),
    };
    let ctx = Context {
        pi_units: cli.pi_units || config.pi_units().map_err(Failure::invalid)?,
        config,
    };
    match cli.command {
        Command::Crb(a) => cmd_crb(&ctx, &a, out),
        Command::Verify(a) => cmd_verify(&ctx, &a, out),
        Command::Scan(a) => cmd_scan(&ctx, &a, out),
        Command::FindHl(a) => cmd_find_hl(&ctx, &a, out),
    }
}

struct Context {
    config: Config,
    pi_units: bool,
}

impl Context {
    fn raw<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Option<&'a str> {
        flag.as_deref().or_else(|| self.config.get(key))
    }

    fn required<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Result<&'a str, Failure> {
        self.raw(flag, key)
            .ok_or_else(|| Failure::invalid(format!("missing required --{key}")))
    }

    fn spin(&self, flag: &Option<String>) -> Result<SpinJ, Failure> {
        let s = self.required(flag, "j")?;
        parse_spin(s).map_err(|_| Failure::invalid(format!("--j: invalid spin `{s}`")))
    }

    fn generator(&self, flag: &Option<String>) -> Result<Generator, Failure> {
        let s = self.required(flag, "gen")?;
        Generator::from_str(s).map_err(|e| Failure::invalid(format!("--gen: {e}")))
    }

    fn angle(
        &self,
        flag: &Option<String>,
        key: &str,
        default: Option<f64>,
    ) -> Result<f64, Failure> {
        match self.raw(flag, key) {
            Some(s) => {
                parse_angle(s, self.pi_units).map_err(|e| Failure::invalid(format!("--{key}: {e}")))
            }
            None => default.ok_or_else(|| Failure::invalid(format!("missing required --{key}"))),
        }
    }

    fn number<T: FromStr>(
        &self,
        flag: &Option<String>,
        key: &str,
        default: T,
    ) -> Result<T, Failure> {
        match self.raw(flag, key) {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::invalid(format!("--{key}: cannot parse `{s}`"))),
            None => Ok(default),
        }
    }

    fn output<'a>(&'a self, flag: &'a Option<std::path::PathBuf>) -> Option<&'a Path> {
        flag.as_deref()
            .or_else(|| self.config.get("output").map(Path::new))
            .filter(|p| p.as_os_str() != "-")
    }
}

/// Accepts `0.5`, `1`, `3/2` and similar.
fn parse_spin(s: &str) -> Result<SpinJ, Error> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| Error::InvalidSpin(-1))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::InvalidSpin(-1))?;
            n / d
        }
        None => s.parse().map_err(|_| Error::InvalidSpin(-1))?,
    };
    SpinJ::from_f64(value)
}

/// Rounds to 15 significant digits so JSON reports diff cleanly.
fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", JSON_DIGITS - 1, x).parse().unwrap_or(x)
}

fn fmt(x: f64) -> String {
    format_sig(x, JSON_DIGITS)
}

fn write_err(e: io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("write failed: {e}"))
}

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CrbReport {
    j: f64,
    generator: Generator,
    theta1: f64,
    theta2: f64,
    phi1: f64,
    phi2: f64,
    qfi: f64,
    crb: Option<f64>,
    divergent: bool,
    normalization: f64,
    overlap: Complex,
}

fn cmd_crb(ctx: &Context, a: &CrbArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let j = ctx.spin(&a.j)?;
    let g = ctx.generator(&a.generator)?;
    let angles = CatAngles::new(
        ctx.angle(&a.theta1, "theta1", None)?,
        ctx.angle(&a.theta2, "theta2", None)?,
        ctx.angle(&a.phi1, "phi1", Some(0.0))?,
        ctx.angle(&a.phi2, "phi2", Some(0.0))?,
    );
    let format = match (a.format, ctx.config.get("format")) {
        (Some(f), _) => f,
        (None, None) => Format::Text,
        (None, Some(s)) => match s.to_ascii_lowercase().as_str() {
            "text" => Format::Text,
            "json" => Format::Json,
            _ => {
                return Err(Failure::invalid(format!(
                    "format: expected text or json, got `{s}`"
                )))
            }
        },
    };
    let params = CatParams::from_angles(j, &angles)?;
    let n = normalization(&params)?;
    let result = crb(&crate::catstate::cat_state(&params)?, g);
    let overlap = params.overlap();
    let divergent = result.is_divergent();

    let text = match format {
        Format::Json => {
            let report = CrbReport {
                j: j.value(),
                generator: g,
                theta1: round_sig(angles.theta1),
                theta2: round_sig(angles.theta2),
                phi1: round_sig(angles.phi1),
                phi2: round_sig(angles.phi2),
                qfi: round_sig(result.qfi),
                crb: (!divergent).then(|| round_sig(result.crb)),
                divergent,
                normalization: round_sig(n),
                overlap: Complex {
                    re: round_sig(overlap.re),
                    im: round_sig(overlap.im),
                },
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Text => {
            let crb_text = if divergent {
                "divergent".to_string()
            } else {
                fmt(result.crb)
            };
            let rows = [
                ("j", j.to_string()),
                ("generator", g.to_string()),
                ("theta1", fmt(angles.theta1)),
                ("theta2", fmt(angles.theta2)),
                ("phi1", fmt(angles.phi1)),
                ("phi2", fmt(angles.phi2)),
                ("qfi", fmt(result.qfi)),
                ("crb", crb_text),
                ("normalization", fmt(n)),
                (
                    "overlap",
                    format!("{} {:+}i", fmt(overlap.re), round_sig(overlap.im)),
                ),
            ];
            let mut s = String::new();
            for (k, v) in rows {
                let _ = writeln!(s, "{k:<14}{v}");
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(write_err)
}

fn cmd_verify(ctx: &Context, a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let res: usize = ctx.number(&a.res, "res", DEFAULT_VERIFY_RES)?;
    if res < 2 {
        return Err(Failure::invalid("--res must be at least 2"));
    }
    let tol: f64 = ctx.number(&a.tol, "tol", DEFAULT_VERIFY_TOL)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Failure::invalid("--tol must be non-negative"));
    }
    let cases: Vec<ClosedFormCase> = if a.all {
        ClosedFormCase::ALL.to_vec()
    } else if a.family.is_empty() {
        return Err(Failure::invalid(
            "select families with --family NAME or --all",
        ));
    } else {
        a.family
            .iter()
            .map(|name| {
                ClosedFormCase::from_name(name)
                    .ok_or_else(|| Failure::invalid(format!("unknown family `{name}`")))
            })
            .collect::<Result<_, _>>()?
    };

    let results = cases
        .iter()
        .map(|&c| verify(c, res))
        .collect::<Result<Vec<Verification>, _>>()?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<26}{:>8}{:>6}{:>8}{:>10}{:>14}  {:<8}printed_dev",
        "family", "samples", "degen", "events", "mismatch", "max_dev", "status"
    );
    let mut failing = Vec::new();
    for v in &results {
        let ok = v.passes(tol);
        if !ok {
            failing.push(v.case.name());
        }
        let printed = match v.printed {
            Some((dev, mism)) => format!("{dev:.3e} ({mism} mismatched events)"),
            None => "-".into(),
        };
        let _ = writeln!(
            s,
            "{:<26}{:>8}{:>6}{:>8}{:>10}{:>14.3e}  {:<8}{}",
            v.case.name(),
            v.samples,
            v.degenerate,
            v.divergent_events,
            v.event_mismatches,
            v.max_abs_dev,
            if ok { "ok" } else { "FAIL" },
            printed
        );
    }
    out.write_all(s.as_bytes()).map_err(write_err)?;
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_VERIFY_FAILED,
            format!("tolerance {tol:e} exceeded by: {}", failing.join(", ")),
        ))
    }
}

fn write_to(
    path: Option<&Path>,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::io(p, e))?;
            let mut w = BufWriter::new(f);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::io(p, e))
        }
        None => body(out).map_err(write_err),
    }
}

/// Summaries go to stdout when data goes to a file, to stderr otherwise.
fn summary(to_file: bool, out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    if to_file {
        out.write_all(text.as_bytes()).map_err(write_err)
    } else {
        eprint!("{text}");
        Ok(())
    }
}

fn cmd_scan(ctx: &Context, a: &ScanArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = ScanSpec::new(
        ctx.spin(&a.j)?,
        ctx.generator(&a.generator)?,
        ctx.angle(&a.phi1, "phi1", Some(0.0))?,
        ctx.angle(&a.phi2, "phi2", Some(0.0))?,
    )
    .with_resolution(ctx.number(&a.res, "res", DEFAULT_RESOLUTION)?)
    .with_cap(ctx.number(&a.cap, "cap", DEFAULT_CAP)?);
    let grid = grid_scan(&spec)?;
    let path = ctx.output(&a.output);
    write_to(path, out, |w| grid.write_csv(w))?;

    let mut s = String::new();
    let degenerate = grid.count(|v| *v == CellValue::Degenerate);
    let divergent = grid.count(|v| *v == CellValue::Divergent);
    match grid.min() {
        Some((ia, ib, m)) => {
            let argmin = grid.argmin_set(1e-9);
            let _ = writeln!(
                s,
                "min crb {} at theta1={} theta2={} ({} cells within 1e-9)",
                fmt(m),
                fmt(spec.theta_at(ia)),
                fmt(spec.theta_at(ib)),
                argmin.len()
            );
        }
        None => {
            let _ = writeln!(s, "no finite cells");
        }
    }
    let _ = writeln!(
        s,
        "divergent cells {divergent}, degenerate cells {degenerate}"
    );
    summary(path.is_some(), out, &s)
}

fn cmd_find_hl(ctx: &Context, a: &FindHlArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut spec = HlSearchSpec::new(ctx.spin(&a.j)?, ctx.generator(&a.generator)?);
    spec.tolerance = ctx.number(&a.tolerance, "tolerance", DEFAULT_HL_TOLERANCE)?;
    spec.seeds = ctx.number(&a.seeds, "seeds", DEFAULT_SEEDS)?;
    let points: Vec<HlPoint> = find_hl(&spec)?
        .into_iter()
        .map(|p| HlPoint {
            theta1: round_sig(p.theta1),
            theta2: round_sig(p.theta2),
            phi1: round_sig(p.phi1),
            phi2: round_sig(p.phi2),
            crb: round_sig(p.crb),
        })
        .collect();
    let path = ctx.output(&a.output);
    write_to(path, out, |w| {
        serde_json::to_writer_pretty(&mut *w, &points).map_err(io::Error::other)?;
        w.write_all(b"\n")
    })?;
    let text = format!(
        "{} point(s) within {} of the limit {}\n",
        points.len(),
        spec.tolerance,
        fmt(spec.j.heisenberg_limit())
    );
    summary(path.is_some(), out, &text)
}
