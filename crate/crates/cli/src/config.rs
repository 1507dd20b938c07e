use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use freeplate_core::bounds::BoundInput;
use freeplate_core::exact::OracleSpec;
use freeplate_core::{DomainSpec, Method, Operator};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_ORACLE_TOL: f64 = 1e-6;
pub const DEFAULT_SLACK_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Bounds,
    Fourier,
    Oracle,
}

/// One experiment, as read from a JSON config file.
///
/// ```json
/// {
///   "domain": {"kind": "rectangle", "extents": [1.0, 1.0]},
///   "operator": "plate",
///   "tau": 0.0,
///   "count": 12,
///   "m_max": 10,
///   "checks": ["bounds", "fourier"]
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub operator: Operator,
    #[serde(default)]
    pub tau: f64,
    pub count: usize,
    #[serde(default)]
    pub m_max: usize,
    #[serde(default)]
    pub checks: BTreeSet<Check>,
    #[serde(default = "ritz")]
    pub method: Method,
    /// Refinement tolerance for the Ritz degree loop. Defaults to 1e-8 for
    /// the membrane and 1e-6 for the plate.
    #[serde(default)]
    pub refine_tol: Option<f64>,
    #[serde(default)]
    pub oracle_tol: Option<f64>,
    #[serde(default)]
    pub slack_tol: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub spectrum_out: Option<PathBuf>,
    #[serde(default)]
    pub report_out: Option<PathBuf>,
    #[serde(default)]
    pub fourier_out: Option<PathBuf>,
}

fn ritz() -> Method {
    Method::Ritz
}

impl ExperimentConfig {
    pub fn new(domain: DomainSpec, operator: Operator, tau: f64, count: usize) -> Self {
        Self {
            domain,
            operator,
            tau,
            count,
            m_max: 0,
            checks: BTreeSet::new(),
            method: Method::Ritz,
            refine_tol: None,
            oracle_tol: None,
            slack_tol: None,
            grid_points: None,
            spectrum_out: None,
            report_out: None,
            fourier_out: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn refine_tol(&self) -> f64 {
        self.refine_tol.unwrap_or(match self.operator {
            Operator::Membrane => 1e-8,
            Operator::Plate => 1e-6,
        })
    }

    pub fn oracle_tol(&self) -> f64 {
        self.oracle_tol.unwrap_or(DEFAULT_ORACLE_TOL)
    }

    pub fn slack_tol(&self) -> f64 {
        self.slack_tol.unwrap_or(DEFAULT_SLACK_TOL)
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points.unwrap_or(DEFAULT_GRID_POINTS)
    }

    pub fn bound_input(&self) -> Result<BoundInput, CliError> {
        Ok(BoundInput::new(
            self.domain.dimension(),
            self.domain.volume(),
            self.tau,
            0,
        )?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return bad(format!("tau must be finite and nonnegative, got {}", self.tau));
        }
        if self.operator == Operator::Membrane && self.tau != 0.0 {
            return bad("the membrane takes no tension".into());
        }
        for (name, tol) in [
            ("refine_tol", self.refine_tol),
            ("oracle_tol", self.oracle_tol),
            ("slack_tol", self.slack_tol),
        ] {
            if let Some(t) = tol {
                if !(t > 0.0) || !t.is_finite() {
                    return bad(format!("{name} must be positive, got {t}"));
                }
            }
        }
        if self.grid_points == Some(0) {
            return bad("grid_points must be at least 1".into());
        }
        if self.method == Method::Exact || self.checks.contains(&Check::Oracle) {
            OracleSpec::new(self.domain.clone(), self.operator, self.tau)?;
        }
        if self.checks.contains(&Check::Bounds) && self.m_max > self.count {
            return bad(format!(
                "m_max = {} exceeds count = {}",
                self.m_max, self.count
            ));
        }
        if self.checks.contains(&Check::Fourier) {
            if self.operator != Operator::Plate {
                return bad("the fourier check needs the plate operator".into());
            }
            if self.method != Method::Ritz {
                return bad("the fourier check needs Ritz eigenfunctions".into());
            }
            if self.count < self.m_max + 1 {
                return bad(format!(
                    "fourier check needs count >= m_max + 1 = {}",
                    self.m_max + 1
                ));
            }
        }
        Ok(())
    }
}
