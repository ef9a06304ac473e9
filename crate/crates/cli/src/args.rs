use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "fractal-fdm",
    version,
    about = "Finite differences on the Minkowski curve"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Vertex table of the level-m graph.
    Curve(CurveArgs),
    /// Laplacian matrix of the level-m graph.
    Laplacian(LaplacianArgs),
    /// Explicit heat scheme.
    Heat(HeatArgs),
    /// Leapfrog wave scheme.
    Wave(WaveArgs),
    /// Dirichlet benchmark error E_m for harmonic exact data.
    DirichletError(DirichletArgs),
    /// Theoretical step bound for Hölder-continuous solutions.
    Bound(BoundArgs),
    /// Re-run the command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curve(_) => "curve",
            Command::Laplacian(_) => "laplacian",
            Command::Heat(_) => "heat",
            Command::Wave(_) => "wave",
            Command::DirichletError(_) => "dirichlet-error",
            Command::Bound(_) => "bound",
            Command::Replay(_) => "replay",
        }
    }

    /// Output settings; `None` for `replay`.
    pub fn output_mut(&mut self) -> Option<&mut Output> {
        match self {
            Command::Curve(a) => Some(&mut a.output),
            Command::Laplacian(a) => Some(&mut a.output),
            Command::Heat(a) => Some(&mut a.run.output),
            Command::Wave(a) => Some(&mut a.run.output),
            Command::DirichletError(a) => Some(&mut a.output),
            Command::Bound(a) => Some(&mut a.output),
            Command::Replay(_) => None,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Args, Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted. A `<out>.manifest.json` is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveArgs {
    /// Graph level.
    #[arg(long)]
    pub m: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplacianArgs {
    #[arg(long)]
    pub m: u32,
    /// Multiply by 64^m.
    #[arg(long)]
    pub renormalized: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(long)]
    pub m: u32,
    /// Horizon T.
    #[arg(long = "T", value_name = "T")]
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Number of time steps N.
    #[arg(long = "N", value_name = "N")]
    #[serde(rename = "N")]
    pub steps: usize,
    /// zero | impulse[:j] | harmonic:a,b | sine:f | samples:path (impulse defaults to the midpoint)
    #[arg(long, default_value = "impulse")]
    pub initial: InitialSpec,
    /// Comma-separated step indices to record; steps beyond N are dropped.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Vec<usize>,
    /// Abort when the max-norm exceeds this factor times max(|U(0)|, 1); 0 disables.
    #[arg(long, default_value_t = 1e12)]
    pub blowup_factor: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
    /// Initial velocity, same syntax as --initial.
    #[arg(long, default_value = "zero")]
    pub velocity: InitialSpec,
    /// Also run N steps backward and report the recovery error of U(0).
    #[arg(long)]
    pub check_reverse: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletArgs {
    /// Level, or inclusive range `lo..hi` for a sweep.
    #[arg(long)]
    pub m: LevelRange,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Harmonic boundary value at P_0.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Harmonic boundary value at P_1.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Heat,
    Wave,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Hölder exponent (> 0).
    #[arg(long)]
    pub alpha: f64,
    /// Hölder constant (> 0).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub m: u32,
    /// Time step.
    #[arg(long)]
    pub h: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by a previous run.
    pub manifest: PathBuf,
    /// Write to this path instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Textual initial-condition descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum InitialSpec {
    Zero,
    /// `None` means the chain midpoint.
    Impulse(Option<usize>),
    Harmonic(f64, f64),
    Sine(f64),
    Samples(PathBuf),
}

impl FromStr for InitialSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
        match (kind, rest) {
            ("zero", None) => Ok(InitialSpec::Zero),
            ("impulse", None) => Ok(InitialSpec::Impulse(None)),
            ("impulse", Some(j)) => j
                .parse()
                .map(|j| InitialSpec::Impulse(Some(j)))
                .map_err(|e| format!("impulse index {j:?}: {e}")),
            ("harmonic", Some(ab)) => {
                let (a, b) = ab.split_once(',').ok_or("harmonic expects a,b")?;
                Ok(InitialSpec::Harmonic(num(a)?, num(b)?))
            }
            ("sine", Some(f)) => Ok(InitialSpec::Sine(num(f)?)),
            ("samples", Some(p)) if !p.is_empty() => Ok(InitialSpec::Samples(PathBuf::from(p))),
            _ => Err(format!(
                "unknown initial condition {s:?} (expected zero, impulse[:j], harmonic:a,b, sine:f, samples:path)"
            )),
        }
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialSpec::Zero => f.write_str("zero"),
            InitialSpec::Impulse(None) => f.write_str("impulse"),
            InitialSpec::Impulse(Some(j)) => write!(f, "impulse:{j}"),
            InitialSpec::Harmonic(a, b) => write!(f, "harmonic:{a:?},{b:?}"),
            InitialSpec::Sine(v) => write!(f, "sine:{v:?}"),
            InitialSpec::Samples(p) => write!(f, "samples:{}", p.display()),
        }
    }
}

impl From<InitialSpec> for String {
    fn from(s: InitialSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for InitialSpec {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// `m` or `lo..hi` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct LevelRange {
    pub lo: u32,
    pub hi: u32,
}

impl LevelRange {
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }

    pub fn is_sweep(&self) -> bool {
        self.lo != self.hi
    }
}

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|e| format!("level {v:?}: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let m = parse(s)?;
                (m, m)
            }
        };
        if lo > hi {
            return Err(format!("empty level range {s:?}"));
        }
        Ok(LevelRange { lo, hi })
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sweep() {
            write!(f, "{}..{}", self.lo, self.hi)
        } else {
            write!(f, "{}", self.lo)
        }
    }
}

impl From<LevelRange> for String {
    fn from(r: LevelRange) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for LevelRange {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}
