use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::WindowRule;
use crate::spectrum::RANK_REL_TOL;

/// Horizon and tolerances shared by the orbit-based tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub n_max: usize,
    pub rule: WindowRule,
    /// Relative factor of the rank threshold `rank_rel * dim * sigma_max`.
    pub rank_rel: f64,
    /// Seed of the random probe vectors.
    pub probe_seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            n_max: 2000,
            rule: WindowRule::default(),
            rank_rel: RANK_REL_TOL,
            probe_seed: 0,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        if self.rule.window == 0 || self.rule.window >= self.n_max {
            return Err(Error::InvalidInput(format!(
                "window: must satisfy 0 < window < n_max, got window {} and n_max {}",
                self.rule.window, self.n_max
            )));
        }
        if !(self.rule.tol.is_finite() && self.rule.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol_conv: must be positive, got {}", self.rule.tol)));
        }
        if !(self.rank_rel.is_finite() && self.rank_rel > 0.0) {
            return Err(Error::InvalidInput(format!("tol_rank: must be positive, got {}", self.rank_rel)));
        }
        Ok(())
    }
}
