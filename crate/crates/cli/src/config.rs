//! Experiment configuration files.

use std::fmt;
use std::path::{Path, PathBuf};

use hhi_forge_core::Tolerances;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The subcommands a run can execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    ValidateModel,
    SpectralProjectors,
    CylinderProjectors,
    CompareCalderon,
    StatesCheck,
    Hhi,
    DivergenceCheck,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::ValidateModel,
        Check::SpectralProjectors,
        Check::CylinderProjectors,
        Check::CompareCalderon,
        Check::StatesCheck,
        Check::Hhi,
        Check::DivergenceCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ValidateModel => "validate-model",
            Check::SpectralProjectors => "spectral-projectors",
            Check::CylinderProjectors => "cylinder-projectors",
            Check::CompareCalderon => "compare-calderon",
            Check::StatesCheck => "states-check",
            Check::Hhi => "hhi",
            Check::DivergenceCheck => "divergence-check",
        }
    }

    /// Independent random stream per check, so results do not depend on
    /// which other checks ran or in which order.
    pub fn stream(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// Slice length `L`; the Dirichlet wall sits at `y = L`.
    pub length: f64,
    pub n_y: usize,
    pub kappa: f64,
    /// Shift amplitude `ε` in `w = ε y³`.
    #[serde(default)]
    pub epsilon: f64,
    /// `m₀²`, the constant part of the potential.
    #[serde(default = "default_mass_sq")]
    pub mass_sq: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_mass_sq() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Beta {
    Value(f64),
    Named(BetaName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaName {
    Hawking,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSection {
    pub beta: Beta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderSection {
    /// Number of `s` lines at each refinement level.
    pub n_s: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSection {
    /// Slice points per wedge at each refinement level.
    #[serde(default = "default_disk_levels")]
    pub n_y: Vec<usize>,
    /// Support of the gluing test data as fractions of `L`.
    #[serde(default = "default_support")]
    pub support: [f64; 2],
}

fn default_disk_levels() -> Vec<usize> {
    vec![32, 64]
}

fn default_support() -> [f64; 2] {
    [0.1, 0.5]
}

impl Default for DiskSection {
    fn default() -> Self {
        Self { n_y: default_disk_levels(), support: default_support() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Checks executed by `all`.
    #[serde(default = "default_checks")]
    pub checks: Vec<Check>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn default_checks() -> Vec<Check> {
    Check::ALL.to_vec()
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunSection {
    fn default() -> Self {
        Self { checks: default_checks(), out: default_out(), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub thermal: ThermalSection,
    pub cylinder: CylinderSection,
    #[serde(default)]
    pub disk: DiskSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::ConfigInvalid { field, message, .. } => {
                CliError::ConfigInvalid { path: path.display().to_string(), field, message }
            }
            other => other,
        })
    }

    /// Parses and validates a config. Syntax errors carry the line and column
    /// reported by the TOML parser.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| {
            let field = match e.span() {
                Some(span) => {
                    let line = text[..span.start].lines().count().max(1);
                    format!("line {line}")
                }
                None => "document".to_string(),
            };
            CliError::ConfigInvalid { path: String::new(), field, message: e.message().to_string() }
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Inverse temperature, resolving `"hawking"` to `2π/κ`.
    pub fn beta(&self) -> f64 {
        match self.thermal.beta {
            Beta::Value(b) => b,
            Beta::Named(BetaName::Hawking) => 2.0 * std::f64::consts::PI / self.model.kappa,
        }
    }

    pub fn is_hawking(&self) -> bool {
        matches!(self.thermal.beta, Beta::Named(BetaName::Hawking))
    }

    fn validate(&self) -> Result<(), CliError> {
        let invalid = |field: &str, message: String| {
            Err(CliError::ConfigInvalid { path: String::new(), field: field.to_string(), message })
        };
        let m = &self.model;
        for (field, value) in [("model.length", m.length), ("model.kappa", m.kappa), ("model.mass_sq", m.mass_sq)] {
            if !(value > 0.0 && value.is_finite()) {
                return invalid(field, format!("must be positive, got {value}"));
            }
        }
        if !(m.delta > 0.0 && m.delta < 1.0) {
            return invalid("model.delta", format!("must lie in (0, 1), got {}", m.delta));
        }
        if !m.epsilon.is_finite() {
            return invalid("model.epsilon", "must be finite".into());
        }
        if m.n_y < 2 {
            return invalid("model.n_y", format!("needs at least 2 points, got {}", m.n_y));
        }
        if let Beta::Value(b) = self.thermal.beta {
            if !(b > 0.0 && b.is_finite()) {
                return invalid("thermal.beta", format!("must be positive or \"hawking\", got {b}"));
            }
        }
        if self.cylinder.n_s.is_empty() {
            return invalid("cylinder.n_s", "needs at least one level".into());
        }
        if let Some(bad) = self.cylinder.n_s.iter().find(|&&n| n < 4 || n % 2 != 0) {
            return invalid("cylinder.n_s", format!("entries must be even and at least 4, got {bad}"));
        }
        if let Some(bad) = self.disk.n_y.iter().find(|&&n| n < 4) {
            return invalid("disk.n_y", format!("entries must be at least 4, got {bad}"));
        }
        let [a, b] = self.disk.support;
        if !(0.0 < a && a < b && b < 1.0) {
            return invalid("disk.support", format!("need 0 < a < b < 1, got [{a}, {b}]"));
        }
        if self.run.checks.contains(&Check::Hhi) && !self.is_hawking() {
            return invalid("thermal.beta", "disk runs need beta = \"hawking\"".into());
        }
        let mut seen = self.run.checks.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.run.checks.len() {
            return invalid("run.checks", "each check may be listed once".into());
        }
        Ok(())
    }
}
