//! Stopping criteria for solver runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A run budget. Wall-clock budgets match how long benchmark runs are
/// configured in practice; the count-based kinds make runs exactly
/// reproducible, which wall-clock stopping can never be.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "amount")]
pub enum Budget {
    WallClockSeconds(f64),
    /// Number of generations (or restarts, for multistart).
    Generations(u64),
    /// Number of perturbation rounds inside an ILS run.
    IlsIterations(u64),
    /// Total number of local-search passes, summed across every
    /// intensification performed by the run.
    EvaluationSweeps(u64),
}

impl Budget {
    pub fn is_time_based(&self) -> bool {
        matches!(self, Budget::WallClockSeconds(_))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = match *self {
            Budget::WallClockSeconds(s) => s > 0.0,
            Budget::Generations(k) | Budget::IlsIterations(k) | Budget::EvaluationSweeps(k) => {
                k > 0
            }
        };
        if positive {
            Ok(())
        } else {
            Err(Error::config(format!("budget amount must be positive: {self:?}")))
        }
    }
}
