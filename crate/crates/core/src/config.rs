//! Run configuration shared by the library entry points and the CLI.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Tolerances, Monte Carlo budget, seeding and threading knobs.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Tolerance for exact criteria and quadrature classification.
    pub tolerance: f64,
    /// Walk count for Monte Carlo backed criteria.
    pub mc_walks: u64,
    /// Base seed; per-walk streams are derived deterministically.
    pub seed: u64,
    /// Initial truncation length of improper integrals.
    pub cutoff_start: f64,
    pub output_format: OutputFormat,
    /// Worker threads for Monte Carlo walks; `0` = use all cores.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            mc_walks: 100_000,
            seed: 7,
            cutoff_start: 16.0,
            output_format: OutputFormat::Json,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.mc_walks < 1_000 {
            return Err(Error::invalid(
                "Monte Carlo criteria need at least 1000 walks",
            ));
        }
        if !(self.cutoff_start > 0.0) {
            return Err(Error::invalid("cutoff_start must be positive"));
        }
        Ok(())
    }

    pub(crate) fn improper_policy(&self) -> crate::quad::ImproperPolicy<f64> {
        crate::quad::ImproperPolicy {
            tol: self.tolerance,
            cutoff_start: self.cutoff_start,
            ..Default::default()
        }
    }
}
