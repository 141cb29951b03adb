//! Run configuration, loadable from JSON and overridable from flags.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use deformed_spectra::{BoundaryKind, Omega, OperatorKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[default]
    Spectrum,
    Butterfly,
    Bands,
    EdgeStates,
    VerifyMap,
    EnergyLevels,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Butterfly => "butterfly",
            Command::Bands => "bands",
            Command::EdgeStates => "edge-states",
            Command::VerifyMap => "verify-map",
            Command::EnergyLevels => "energy-levels",
        }
    }

    /// File stem shared by every output of the command.
    pub fn stem(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Butterfly => "butterfly",
            Command::Bands => "bands",
            Command::EdgeStates => "edge_states",
            Command::VerifyMap => "verify_map",
            Command::EnergyLevels => "energy_levels",
        }
    }

    pub fn supported_formats(&self) -> &'static [Format] {
        match self {
            Command::Spectrum | Command::Butterfly => &[Format::Csv, Format::Json, Format::Svg],
            Command::Bands | Command::EdgeStates | Command::EnergyLevels => {
                &[Format::Csv, Format::Json]
            }
            Command::VerifyMap => &[Format::Json],
        }
    }

    pub fn default_formats(&self) -> BTreeSet<Format> {
        let formats: &[Format] = match self {
            Command::Spectrum | Command::EnergyLevels => &[Format::Csv],
            Command::Butterfly => &[Format::Csv, Format::Svg],
            Command::Bands | Command::EdgeStates | Command::VerifyMap => &[Format::Json],
        };
        formats.iter().copied().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorName {
    X,
    Xnu,
    Harper,
    GeneralLambda,
    Momentum,
}

/// ω as an exact fraction of π or a float in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaSpec {
    PiRational { p: i64, q: i64 },
    Radians(f64),
}

impl OmegaSpec {
    pub fn to_omega(self) -> Result<Omega, CliError> {
        let omega = match self {
            OmegaSpec::PiRational { p, q } => Omega::pi_rational(p, q),
            OmegaSpec::Radians(w) => Omega::radians(w),
        };
        omega.map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Parse `p/q` or a bare integer `p` (meaning p/1).
pub fn parse_pi_fraction(s: &str) -> Result<OmegaSpec, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: i64 = q.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if q <= 0 {
        return Err(format!("denominator must be positive in {s:?}"));
    }
    Ok(OmegaSpec::PiRational { p, q })
}

/// Full description of one run. Field names are the JSON config keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Defaults to X_ν for `edge-states` and to X otherwise.
    pub operator: Option<OperatorName>,
    pub omega_spec: OmegaSpec,
    pub nu: f64,
    pub lambda: f64,
    pub n_max: Option<usize>,
    pub q_grid: i64,
    pub boundary: BoundaryKind,
    pub output_dir: PathBuf,
    /// Command defaults when empty.
    pub formats: BTreeSet<Format>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Number of energy levels for `energy-levels`.
    pub count: usize,
    /// Second chain size for `edge-states`.
    pub n_max_b: Option<usize>,
    /// Size K of the k window for `verify-map`; 4q at rational ω.
    pub k_window: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Spectrum,
            operator: None,
            omega_spec: OmegaSpec::PiRational { p: 1, q: 3 },
            nu: 0.0,
            lambda: 1.0,
            n_max: None,
            q_grid: 200,
            boundary: BoundaryKind::Open,
            output_dir: PathBuf::from("."),
            formats: BTreeSet::new(),
            threads: 0,
            count: 10,
            n_max_b: None,
            k_window: None,
        }
    }
}

pub const DEFAULT_N_MAX: usize = 200;
pub const DEFAULT_N_MAX_B: usize = 210;

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn operator_name(&self) -> OperatorName {
        self.operator.unwrap_or(match self.command {
            Command::EdgeStates => OperatorName::Xnu,
            _ => OperatorName::X,
        })
    }

    pub fn operator_kind(&self) -> OperatorKind {
        match self.operator_name() {
            OperatorName::X => OperatorKind::Position,
            OperatorName::Xnu => OperatorKind::Xnu { nu: self.nu },
            OperatorName::Harper => OperatorKind::Harper { nu: self.nu },
            OperatorName::GeneralLambda => OperatorKind::GeneralLambda {
                nu: self.nu,
                lambda: self.lambda,
            },
            OperatorName::Momentum => OperatorKind::Momentum,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max.unwrap_or(DEFAULT_N_MAX)
    }

    pub fn n_max_b(&self) -> usize {
        self.n_max_b.unwrap_or(DEFAULT_N_MAX_B)
    }

    pub fn effective_formats(&self) -> BTreeSet<Format> {
        if self.formats.is_empty() {
            self.command.default_formats()
        } else {
            self.formats.clone()
        }
    }

    /// Fill command-dependent defaults and check the invariants.
    pub fn resolved(mut self) -> Result<Self, CliError> {
        self.operator = Some(self.operator_name());
        self.n_max = Some(self.n_max());
        self.formats = self.effective_formats();
        if self.command == Command::EdgeStates {
            self.n_max_b = Some(self.n_max_b());
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_max() < 2 {
            return Err(CliError::Usage(format!(
                "n_max must be at least 2, got {}",
                self.n_max()
            )));
        }
        self.omega_spec.to_omega()?;
        if !self.nu.is_finite() {
            return Err(CliError::Usage(format!(
                "nu must be finite, got {}",
                self.nu
            )));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(CliError::Usage(format!(
                "lambda must be finite and non-negative, got {}",
                self.lambda
            )));
        }
        let supported = self.command.supported_formats();
        if let Some(f) = self
            .effective_formats()
            .iter()
            .find(|f| !supported.contains(f))
        {
            return Err(CliError::Usage(format!(
                "format {} is not available for {}",
                f.extension(),
                self.command.name()
            )));
        }
        match self.command {
            Command::Butterfly | Command::EdgeStates if self.q_grid < 2 => Err(CliError::Usage(
                format!("q_grid must be at least 2, got {}", self.q_grid),
            )),
            Command::EdgeStates if self.n_max_b() == self.n_max() || self.n_max_b() < 2 => {
                Err(CliError::Usage(format!(
                    "n_max_b must differ from n_max and be at least 2, got {} and {}",
                    self.n_max_b(),
                    self.n_max()
                )))
            }
            Command::EnergyLevels if self.count == 0 => {
                Err(CliError::Usage("count must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(
            parse_pi_fraction("1/2"),
            Ok(OmegaSpec::PiRational { p: 1, q: 2 })
        );
        assert_eq!(
            parse_pi_fraction(" 3 / 8 "),
            Ok(OmegaSpec::PiRational { p: 3, q: 8 })
        );
        assert_eq!(
            parse_pi_fraction("2"),
            Ok(OmegaSpec::PiRational { p: 2, q: 1 })
        );
        assert!(parse_pi_fraction("1/0").is_err());
        assert!(parse_pi_fraction("a/2").is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = RunConfig {
            command: Command::Butterfly,
            operator: Some(OperatorName::GeneralLambda),
            omega_spec: OmegaSpec::Radians(0.3),
            formats: [Format::Csv, Format::Svg].into(),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn partial_json_uses_defaults() {
        let c: RunConfig = serde_json::from_str(
            r#"{"command":"edge-states","omega_spec":{"pi_rational":{"p":2,"q":5}}}"#,
        )
        .unwrap();
        assert_eq!(c.operator_name(), OperatorName::Xnu);
        assert_eq!(c.n_max(), 200);
        assert_eq!(c.n_max_b(), 210);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn invariants() {
        let small = RunConfig {
            n_max: Some(1),
            ..RunConfig::default()
        };
        assert!(matches!(small.validate(), Err(CliError::Usage(_))));
        let svg_bands = RunConfig {
            command: Command::Bands,
            formats: [Format::Svg].into(),
            ..RunConfig::default()
        };
        assert!(svg_bands.validate().is_err());
        let same = RunConfig {
            command: Command::EdgeStates,
            n_max: Some(210),
            ..RunConfig::default()
        };
        assert!(same.validate().is_err());
        assert!(RunConfig::default().resolved().is_ok());
    }
}
