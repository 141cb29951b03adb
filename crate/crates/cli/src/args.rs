//! Command-line flags and their merge onto a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deformed_spectra::BoundaryKind;

use crate::config::{parse_pi_fraction, Command, Format, OmegaSpec, OperatorName, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "deformed-spectra",
    version,
    about = "Spectra of deformed position operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
}

#[derive(Debug, Subcommand)]
pub enum CommandArg {
    /// Eigenvalues of one operator at one frequency.
    Spectrum(Options),
    /// Spectra over the grid ω = pπ/q_grid, p = 1..=q_grid.
    Butterfly(Options),
    /// Band and gap structure of one spectrum.
    Bands(Options),
    /// Levels that move when the chain is resized or closed.
    EdgeStates(Options),
    /// Residuals of the phase-basis map onto Harper's operator.
    VerifyMap(Options),
    /// Diagonal energies E_n of the deformed oscillator.
    EnergyLevels(Options),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    #[value(name = "X")]
    X,
    #[value(name = "Xnu")]
    Xnu,
    #[value(name = "Harper")]
    Harper,
    #[value(name = "GeneralLambda")]
    GeneralLambda,
    #[value(name = "Momentum")]
    Momentum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// JSON file with RunConfig fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, ignore_case = true)]
    pub operator: Option<OperatorArg>,
    /// ω as a fraction of π, e.g. 1/3.
    #[arg(long, value_name = "P/Q", value_parser = parse_pi_fraction, conflicts_with = "omega")]
    pub omega_pi: Option<OmegaSpec>,
    /// ω in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Second chain size for edge-states.
    #[arg(long)]
    pub n_max_b: Option<usize>,
    #[arg(long)]
    pub q_grid: Option<i64>,
    #[arg(long, value_enum, ignore_case = true)]
    pub boundary: Option<BoundaryArg>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<FormatArg>,
    /// Worker threads, 0 for automatic. DEFORMED_SPECTRA_THREADS wins when set.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Number of levels for energy-levels.
    #[arg(long)]
    pub count: Option<usize>,
    /// Size K of the k window for verify-map.
    #[arg(long)]
    pub k_window: Option<usize>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, options) = match self.command {
            CommandArg::Spectrum(o) => (Command::Spectrum, o),
            CommandArg::Butterfly(o) => (Command::Butterfly, o),
            CommandArg::Bands(o) => (Command::Bands, o),
            CommandArg::EdgeStates(o) => (Command::EdgeStates, o),
            CommandArg::VerifyMap(o) => (Command::VerifyMap, o),
            CommandArg::EnergyLevels(o) => (Command::EnergyLevels, o),
        };
        options.apply(command)
    }
}

impl Options {
    /// Start from the config file (or defaults) and overwrite every field
    /// given on the command line.
    pub fn apply(self, command: Command) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        c.command = command;
        if let Some(op) = self.operator {
            c.operator = Some(match op {
                OperatorArg::X => OperatorName::X,
                OperatorArg::Xnu => OperatorName::Xnu,
                OperatorArg::Harper => OperatorName::Harper,
                OperatorArg::GeneralLambda => OperatorName::GeneralLambda,
                OperatorArg::Momentum => OperatorName::Momentum,
            });
        }
        if let Some(w) = self.omega_pi {
            c.omega_spec = w;
        }
        if let Some(w) = self.omega {
            c.omega_spec = OmegaSpec::Radians(w);
        }
        if let Some(b) = self.boundary {
            c.boundary = match b {
                BoundaryArg::Open => BoundaryKind::Open,
                BoundaryArg::Periodic => BoundaryKind::Periodic,
            };
        }
        if !self.format.is_empty() {
            c.formats = self
                .format
                .iter()
                .map(|f| match f {
                    FormatArg::Csv => Format::Csv,
                    FormatArg::Json => Format::Json,
                    FormatArg::Svg => Format::Svg,
                })
                .collect();
        }
        c.nu = self.nu.unwrap_or(c.nu);
        c.lambda = self.lambda.unwrap_or(c.lambda);
        c.n_max = self.n_max.or(c.n_max);
        c.n_max_b = self.n_max_b.or(c.n_max_b);
        c.q_grid = self.q_grid.unwrap_or(c.q_grid);
        c.output_dir = self.output_dir.unwrap_or(c.output_dir);
        c.threads = self.threads.unwrap_or(c.threads);
        c.count = self.count.unwrap_or(c.count);
        c.k_window = self.k_window.or(c.k_window);
        Ok(c)
    }
}
