//! Ground-truth engines: an exhaustive game solver over positional-game
//! semantics and a search-based QBF evaluator, plus the cross-check that
//! runs a game through the encoders and compares both answers.

mod check;
mod game_solver;
mod qbf_solver;

pub use check::{check_equisat, EquisatReport, EquisatVerdict};
pub use game_solver::{optimal_depth, solve_game, GameLimits, OracleError};
pub use qbf_solver::{solve_qbf, solve_qbf_with_model, QbfLimits};

use std::time::Duration;

use serde::Serialize;

/// Three-valued answer of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::True => write!(f, "TRUE"),
            Verdict::False => write!(f, "FALSE"),
            Verdict::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Why a run came back [`Verdict::Unknown`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum UnknownReason {
    NodeBudget,
    Timeout,
    UnmappedExit(i32),
    SpawnFailure(String),
}

/// Outcome of a solver run with its search statistics.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub verdict: Verdict,
    /// Minimal depth at which the verdict holds, when it was requested.
    pub optimal_depth: Option<usize>,
    pub nodes: u64,
    pub decisions: u64,
    #[serde(with = "duration_secs")]
    pub wall: Duration,
    pub unknown_reason: Option<UnknownReason>,
}

impl SolveResult {
    pub fn decided(verdict: Verdict) -> Self {
        SolveResult {
            verdict,
            optimal_depth: None,
            nodes: 0,
            decisions: 0,
            wall: Duration::ZERO,
            unknown_reason: None,
        }
    }
}

mod duration_secs {
    use serde::Serializer;
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }
}
