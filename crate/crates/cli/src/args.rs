//! Command-line flags and the key = value config file that mirrors them.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "anharmonic", version, about = "Eigenvalues of quartic and sextic anharmonic oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lowest eigenvalues of one potential.
    #[command(args_override_self = true)]
    Solve(Job),
    /// Sample the quantization function W(E) on a grid.
    #[command(args_override_self = true)]
    Scan(Job),
    /// Regenerate the double-well reference table.
    #[command(args_override_self = true)]
    Table1(Job),
    /// Regenerate the sextic (s, J) reference table.
    #[command(args_override_self = true)]
    Table2(Job),
    /// Eigenvalues from the shooting oracle only.
    #[command(args_override_self = true)]
    Oracle(Job),
    /// Wronskian eigenvalues side by side with the oracle.
    #[command(args_override_self = true)]
    Compare(Job),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Scan(_) => "scan",
            Command::Table1(_) => "table1",
            Command::Table2(_) => "table2",
            Command::Oracle(_) => "oracle",
            Command::Compare(_) => "compare",
        }
    }

    pub fn job(&self) -> &Job {
        match self {
            Command::Solve(j)
            | Command::Scan(j)
            | Command::Table1(j)
            | Command::Table2(j)
            | Command::Oracle(j)
            | Command::Compare(j) => j,
        }
    }
}

pub const SUBCOMMANDS: [&str; 6] = ["solve", "scan", "table1", "table2", "oracle", "compare"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    /// Line problem, even states.
    Even,
    /// Line problem, odd states.
    Odd,
    /// Even and odd merged.
    Both,
    /// Radial problem, larger indicial exponent.
    Radial,
    /// Radial problem, smaller indicial exponent.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummationArg {
    Truncated,
    Levin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn parse_num(s: &str) -> Result<f64, String> {
    anharmonic::expr::eval(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct Job {
    /// V = A4 r^4 + A2 r^2 + Am2 r^-2.
    #[arg(long, conflicts_with = "sextic")]
    pub quartic: bool,
    /// V = A6 r^6 + A4 r^4 + A2 r^2 + Am2 r^-2.
    #[arg(long)]
    pub sextic: bool,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub a6: Option<f64>,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub a4: Option<f64>,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    /// Centrifugal coefficient of r^-2.
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub am2: Option<f64>,
    /// Sextic QES family parameter s (expressions like "(2+sqrt3)/4").
    #[arg(long = "qes-s", value_parser = parse_num, allow_hyphen_values = true)]
    pub qes_s: Option<f64>,
    /// Sextic QES family parameter J.
    #[arg(long = "qes-j", value_parser = parse_num, allow_hyphen_values = true)]
    pub qes_j: Option<f64>,

    /// Boundary condition at the origin [default: both if Am2 = 0, else radial].
    #[arg(long, value_enum)]
    pub sector: Option<SectorArg>,
    /// Explicit indicial exponent instead of a sector.
    #[arg(long, value_parser = parse_num, conflicts_with = "sector", allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Number of levels.
    #[arg(long, default_value_t = 4)]
    pub count: usize,

    /// Lower end of the energy window [default: bottom of the potential].
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    /// Upper end of the energy window [default: grown until enough levels].
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    /// Energy grid step.
    #[arg(long, value_parser = parse_num, default_value = "0.01")]
    pub step: f64,
    /// Absolute root tolerance.
    #[arg(long, value_parser = parse_num, default_value = "1e-11")]
    pub root_tolerance: f64,

    /// Highest h_m index kept (the b series is carried as far as needed).
    #[arg(long, visible_alias = "truncation-order")]
    pub h_terms: Option<usize>,
    /// Index n of the reported closed form.
    #[arg(long)]
    pub n_ref: Option<usize>,
    /// Indices compared for the spread (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub n_set: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub precision: Option<PrecisionArg>,
    #[arg(long, value_enum)]
    pub summation: Option<SummationArg>,

    /// Oracle grid points.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Oracle cutoff radius [default: 6 quartic, 4 sextic, extended as needed].
    #[arg(long, value_parser = parse_num)]
    pub r_max: Option<f64>,
    /// Allowed |E_wronskian - E_oracle| for compare.
    #[arg(long, value_parser = parse_num, default_value = "1e-6")]
    pub tolerance: f64,

    /// Run everything on the calling thread.
    #[arg(long)]
    pub sequential: bool,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file [default: stdout, or <command>.<ext> in $ANHARMONIC_OUT_DIR].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Omit the metadata block.
    #[arg(long)]
    pub no_meta: bool,
    /// key = value file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn scalar(key: &str, v: &toml::Value) -> Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        _ => bail!("config key {key}: unsupported value {v}"),
    })
}

/// Flags read from a config file, as command-line tokens.
pub fn config_tokens(path: &Path, cli_has_family: bool) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing config {}", path.display()))?;
    let mut out = Vec::new();
    for (key, value) in &table {
        let flag = key.replace('_', "-");
        if flag == "config" {
            bail!("config files cannot include other config files");
        }
        if cli_has_family && (flag == "quartic" || flag == "sextic") {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => out.push(format!("--{flag}").into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts: Result<Vec<String>> = items.iter().map(|v| scalar(key, v)).collect();
                out.push(format!("--{flag}={}", parts?.join(",")).into());
            }
            v => out.push(format!("--{flag}={}", scalar(key, v)?).into()),
        }
    }
    Ok(out)
}

/// Inserts config-file flags right after the subcommand so that explicit
/// command-line flags, which come later, take precedence.
pub fn merged_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        return Ok(args);
    };
    let has_family = args.iter().any(|a| a == "--quartic" || a == "--sextic");
    let tokens = config_tokens(&path, has_family)?;
    let mut out: Vec<OsString> = args[..=pos].to_vec();
    out.extend(tokens);
    out.extend(args[pos + 1..].iter().cloned());
    Ok(out)
}
