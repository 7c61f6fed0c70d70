//! Common output of a simulation run.

use crate::ledger::{Algorithm, MessageLedger};
use nalgebra::DVector;

/// Support indicator of a vector (exact comparison with zero).
pub fn support_of(x: &DVector<f64>) -> Vec<bool> {
    x.iter().map(|&xi| xi != 0.0).collect()
}

/// Component signs as -1 / 0 / +1.
pub fn signs_of(x: &DVector<f64>) -> Vec<i8> {
    x.iter()
        .map(|&xi| {
            if xi > 0.0 {
                1
            } else if xi < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Support stabilization summary: the round from which no indicator changed
/// again, plus the final supports and their signs.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    /// First round index from which the network support stayed constant;
    /// `None` when the run ended before it could be certified.
    pub t1: Option<u32>,
    /// Final per-node support estimates.
    pub supports: Vec<Vec<bool>>,
    /// Final per-node signs (0 off support).
    pub signs: Vec<Vec<i8>>,
}

/// Per-run output: final estimates, support report, message ledger and
/// solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    /// Final per-node estimates.
    pub estimates: Vec<DVector<f64>>,
    /// Number of executed rounds.
    pub rounds: u32,
    /// Whether every node met its stopping rule before the iteration cap.
    pub converged: bool,
    pub ledger: MessageLedger,
    pub report: StabilizationReport,
    /// Largest zero-to-non-zero switch count over all components.
    pub max_switches: u32,
    /// Last round in which any component switched from zero to non-zero.
    pub last_activation_round: Option<u32>,
    /// Rounds x components at which `alpha*|x| + mean_indicator >= beta`
    /// (the contraction regime was left). Diagnostic only, never fatal.
    pub assumption_violations: u64,
}

impl RunResult {
    pub fn supports(&self) -> &[Vec<bool>] {
        &self.report.supports
    }

    pub fn t1(&self) -> Option<u32> {
        self.report.t1
    }

    pub fn total_bits(&self) -> u64 {
        self.ledger.total_bits()
    }

    pub fn total_messages(&self) -> usize {
        self.ledger.total_messages()
    }

    /// Size of node `v`'s estimated support.
    pub fn support_size(&self, v: usize) -> usize {
        self.report.supports[v].iter().filter(|&&b| b).count()
    }
}
