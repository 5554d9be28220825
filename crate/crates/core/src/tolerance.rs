use serde::{Deserialize, Serialize};

use crate::error::{RbaError, Result};

/// Numerical thresholds shared by every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Comparisons against zero and rational snapping.
    pub eps_zero: f64,
    /// Relative gap for merging eigenvalues and singular-value rank cuts.
    pub eps_cluster: f64,
    /// Matrix-identity residuals.
    pub eps_residual: f64,
    pub rng_seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps_zero: 1e-9,
            eps_cluster: 1e-6,
            eps_residual: 1e-8,
            rng_seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn with_seed(seed: u64) -> Self {
        ToleranceConfig {
            rng_seed: seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_zero", self.eps_zero),
            ("eps_cluster", self.eps_cluster),
            ("eps_residual", self.eps_residual),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RbaError::Tolerance(format!("{name} must be positive, got {v}")));
            }
        }
        if self.eps_zero > self.eps_cluster {
            return Err(RbaError::Tolerance(format!(
                "eps_zero ({}) must not exceed eps_cluster ({})",
                self.eps_zero, self.eps_cluster
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let mut t = ToleranceConfig::default();
        t.eps_residual = 0.0;
        assert!(t.validate().is_err());
        let mut t = ToleranceConfig::default();
        t.eps_zero = 1e-3;
        assert!(t.validate().is_err());
    }
}
