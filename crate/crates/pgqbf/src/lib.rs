//! Toolkit for turning positional-game descriptions into quantified
//! Boolean formulas.
//!
//! The pipeline reads a game (`.pg` text or one of the built-in
//! generators), folds pre-placed stones into the hypergraph, and lowers
//! the result to prenex-CNF QDIMACS through one of two encodings. Desk-scale
//! oracles — an exhaustive game solver and a small QBF evaluator — let the
//! whole chain be cross-validated end to end, and a harness drives external
//! solvers and the per-depth deepening loop.

pub mod encode;
pub mod game;
pub mod gens;
pub mod harness;
pub mod oracle;
pub mod pg;
pub mod qbf;
pub mod qdimacs;
pub mod suite;

pub use encode::{encode, EncodeError, EncodeOptions, Encoded, EncodingVariant, FirstmovesMode};
pub use game::{
    default_depth, merge_consecutive_turns, reduce_initials, GameError, GameSpec, Player,
    ReducedGame, TimePoint, TrivialOutcome, Turn, TurnStructure,
};
pub use oracle::{
    check_equisat, optimal_depth, solve_game, solve_qbf, GameLimits, QbfLimits, SolveResult,
    Verdict,
};
pub use pg::{parse_pg, write_pg, PgDocument, PgError};
pub use qbf::{stats, FormulaStats, QbfFormula, VarDesc, VarTable};
pub use qdimacs::{parse_qdimacs, write_qdimacs, write_qdimacs_opts, QdimacsError};
