use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use ruled::audit::TheoremId;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "slant",
    version,
    about = "Frame, curvature and slant analysis of ruled surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the frame and curvatures and write a full report.
    Analyze(AnalyzeArgs),
    /// Report q-, h-, a- and Darboux-slant verdicts.
    Classify(AnalyzeArgs),
    /// Tabulate a catalog or prescribed-κ surface into a sampled spec file.
    Generate(GenerateArgs),
    /// Audit one theorem, or all of them.
    Verify(VerifyArgs),
    /// Write a triangle mesh of the surface strip.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Surface spec file (JSON).
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Verdict tolerance; 1e-6 by default, 1e-3 for sampled surfaces.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Smallest |cos θ| accepted as a slant angle.
    #[arg(long, default_value_t = ruled::slant::DEFAULT_ANGLE_TOL)]
    pub angle_tol: f64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the sample table as CSV next to the report.
    #[arg(long, requires = "out")]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: AnalyzeArgs,
    #[arg(long, default_value = "all")]
    pub theorem: TheoremChoice,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Catalog or prescribed-κ spec file.
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    pub surface: Option<PathBuf>,
    /// Catalog surface name, as an alternative to --surface.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameter as KEY=VALUE; VALUE is a number or a comma-separated list.
    #[arg(long = "param", value_name = "KEY=VALUE", requires = "catalog")]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long, default_value = "-1:1", allow_hyphen_values = true)]
    pub v_range: VRange,
    /// NxM: N u-values by M v-values.
    #[arg(long, default_value = "64x8")]
    pub grid: Grid,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TheoremChoice {
    One(TheoremId),
    All,
}

impl TheoremChoice {
    pub fn theorems(&self) -> Vec<TheoremId> {
        match self {
            TheoremChoice::One(t) => vec![*t],
            TheoremChoice::All => TheoremId::ALL.to_vec(),
        }
    }
}

impl FromStr for TheoremChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(TheoremChoice::All);
        }
        s.parse().map(TheoremChoice::One).map_err(|_| {
            let ids: Vec<_> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
            format!("expected one of {}, all", ids.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VRange {
    pub min: f64,
    pub max: f64,
}

impl FromStr for VRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected MIN:MAX")?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        Ok(VRange {
            min: parse(a)?,
            max: parse(b)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub columns: usize,
    pub rows: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(['x', 'X']).ok_or("expected NxM")?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Grid {
            columns: parse(a)?,
            rows: parse(b)?,
        })
    }
}

/// Parses `argv` (including the program name).
///
/// Help and version requests come back as [`CliError::Help`].
pub fn parse_cli<I, T>(argv: I) -> CliResult<Command>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
        .map(|cli| cli.command)
        .map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                CliError::Help(e.render().to_string())
            }
            _ => CliError::Usage(e.render().to_string()),
        })
}
