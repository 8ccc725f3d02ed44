//! Flag definitions, angle tokens and the `key=value` config file.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "spincat",
    version,
    about = "Cramér–Rao bounds for spin coherent-state cats"
)]
pub struct Cli {
    /// File of `key=value` defaults; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Read bare angle numbers as multiples of π.
    #[arg(long, global = true)]
    pub pi_units: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CRB of a single cat state.
    Crb(CrbArgs),
    /// Compare closed-form families against the numeric engine.
    Verify(VerifyArgs),
    /// CRB density grid over (θ1, θ2) as CSV.
    Scan(ScanArgs),
    /// Multistart search for Heisenberg-limited configurations.
    FindHl(FindHlArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CrbArgs {
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long = "gen")]
    pub generator: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Every family.
    #[arg(long, conflicts_with = "family")]
    pub all: bool,
    /// Family name; repeatable.
    #[arg(long)]
    pub family: Vec<String>,
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long = "gen")]
    pub generator: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<String>,
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long)]
    pub cap: Option<String>,
    /// Output path; `-` or absent writes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FindHlArgs {
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long = "gen")]
    pub generator: Option<String>,
    #[arg(long)]
    pub tolerance: Option<String>,
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "j",
    "gen",
    "theta1",
    "theta2",
    "phi1",
    "phi2",
    "format",
    "res",
    "tol",
    "cap",
    "output",
    "tolerance",
    "seeds",
    "pi-units",
];

/// Defaults read from a config file.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> std::io::Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    /// Blank lines and `#` comments are skipped; keys use the long flag names.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key `{}`", n + 1, k.trim()));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn pi_units(&self) -> Result<bool, String> {
        match self.get("pi-units") {
            None => Ok(false),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "1" | "true" | "yes" | "on" => Ok(true),
                "0" | "false" | "no" | "off" => Ok(false),
                _ => Err(format!("pi-units: expected a boolean, got `{v}`")),
            },
        }
    }
}

/// Parses an angle such as `0.75pi`, `3pi/4`, `-pi`, `π/2` or `1.2`.
///
/// Bare numbers are radians, or multiples of π when `pi_units` is set.
pub fn parse_angle(token: &str, pi_units: bool) -> Result<f64, String> {
    let t = token.trim().replace('π', "pi").to_ascii_lowercase();
    let bad = || format!("invalid angle `{token}`");
    let value = if let Some(pos) = t.find("pi") {
        let coef = match t[..pos].trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        let rest = t[pos + 2..].trim();
        let den = if rest.is_empty() {
            1.0
        } else {
            let d = rest.strip_prefix('/').ok_or_else(bad)?;
            d.trim().parse::<f64>().map_err(|_| bad())?
        };
        if den == 0.0 {
            return Err(bad());
        }
        coef * PI / den
    } else {
        let x = t.parse::<f64>().map_err(|_| bad())?;
        if pi_units {
            x * PI
        } else {
            x
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
