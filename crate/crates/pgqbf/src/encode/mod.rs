//! Translation of positional games into prenex-CNF QBF.
//!
//! Two encodings are provided: [`cor`] quantifies White's choices
//! logarithmically and silently repairs illegal universal assignments,
//! while [`enc2`] spends one universal variable per vertex and round and
//! flags rule violations through indicator variables.

pub mod cor;
pub mod enc2;

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameError, GameSpec, Player};
use crate::qbf::{QbfFormula, VarTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EncodingVariant {
    Cor,
    Enc2,
}

impl std::fmt::Display for EncodingVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EncodingVariant::Cor => write!(f, "cor"),
            EncodingVariant::Enc2 => write!(f, "enc2"),
        }
    }
}

/// Whether a `#firstmoves` section is honored or ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstmovesMode {
    Auto,
    Off,
}

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    pub variant: EncodingVariant,
    /// Truncate the timeline to this many individual moves.
    pub depth_override: Option<usize>,
    /// Substitute the time-zero boundary instead of emitting unit clauses.
    pub fold_t0: bool,
    /// Emit the optional search-pruning clauses of the monotonic encoding.
    pub enc2_improvements: bool,
    /// Dispatch the Maker-Breaker special case when White has no winning
    /// sets.
    pub maker_breaker_auto: bool,
    /// Insist on the Maker-Breaker special case; an error when White has
    /// winning sets.
    pub enc2_force_mb: bool,
    pub firstmoves: FirstmovesMode,
    /// Ordered-tuple enumeration guard for the monotonic encoding.
    pub tuple_cap: usize,
    pub emit_comments: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            variant: EncodingVariant::Cor,
            depth_override: None,
            fold_t0: true,
            enc2_improvements: false,
            maker_breaker_auto: true,
            enc2_force_mb: false,
            firstmoves: FirstmovesMode::Auto,
            tuple_cap: 1_000_000,
            emit_comments: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Invalid(#[from] GameError),
    #[error("depth override {requested} exceeds the timeline length {depth}")]
    DepthOverrideTooLarge { requested: usize, depth: usize },
    #[error("firstmoves restriction requires Black to move first")]
    FirstmovesWithWhiteFirst,
    #[error("firstmoves set is empty after initial-position reduction")]
    FirstmovesEmptyAfterReduction,
    #[error("the monotonic encoding requires Black to move first")]
    Enc2RequiresBlackFirst,
    #[error("tuple enumeration needs {needed} tuples, above the cap {cap}")]
    TupleCapExceeded { needed: u128, cap: usize },
    #[error("the Maker-Breaker special case requires White to have no winning sets")]
    MakerBreakerRequiresEmptyWhiteWins,
    #[error("formula construction failed: {0}")]
    Formula(String),
}

impl From<crate::qbf::QbfError> for EncodeError {
    fn from(e: crate::qbf::QbfError) -> Self {
        EncodeError::Formula(e.to_string())
    }
}

/// Size bookkeeping recorded while encoding; used by the stats report and
/// the size-bound checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct EncodeMeta {
    pub variant: Option<EncodingVariant>,
    pub vertices: usize,
    pub depth: usize,
    pub black_edges: usize,
    pub white_edges: usize,
    /// Individual White move time points (logarithmic encoding only).
    pub white_moves: usize,
    pub move_bits: u32,
    pub time_vars: usize,
    pub ladder_vars: usize,
    pub counter_vars: usize,
    /// Variables other than indicator auxiliaries (monotonic encoding).
    pub primary_vars: usize,
    pub constant: Option<bool>,
}

/// A finished encoding with its variable table and bookkeeping.
#[derive(Debug)]
pub struct Encoded {
    pub formula: QbfFormula,
    pub table: VarTable,
    pub warnings: Vec<String>,
    pub meta: EncodeMeta,
}

impl Encoded {
    pub(crate) fn constant(value: bool, warnings: Vec<String>, meta: EncodeMeta) -> Self {
        Encoded {
            formula: QbfFormula::constant(value),
            table: VarTable::new(),
            warnings,
            meta: EncodeMeta {
                constant: Some(value),
                ..meta
            },
        }
    }
}

/// Encodes a game with the variant selected in the options.
pub fn encode(game: &GameSpec, opts: &EncodeOptions) -> Result<Encoded, EncodeError> {
    match opts.variant {
        EncodingVariant::Cor => cor::encode_cor(game, opts),
        EncodingVariant::Enc2 => enc2::encode_enc2(game, opts),
    }
}

/// Number of bits in the logarithmic move encoding: the width needed to
/// index vertices as 0-based numbers.
pub(crate) fn move_bits(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Bit positions of `value` over `bits` bits that are one, then zero.
pub(crate) fn bit_split(value: usize, bits: u32) -> (Vec<u32>, Vec<u32>) {
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for i in 0..bits {
        if value >> i & 1 == 1 {
            ones.push(i);
        } else {
            zeros.push(i);
        }
    }
    (ones, zeros)
}

/// Shared front of both encoders: validation, initial-position reduction,
/// depth truncation and the firstmoves bookkeeping.
pub(crate) struct Prepared {
    pub game: GameSpec,
    pub trivial: Option<bool>,
    pub firstmoves: Option<Vec<crate::game::VertexId>>,
    pub warnings: Vec<String>,
}

pub(crate) fn prepare(game: &GameSpec, opts: &EncodeOptions) -> Result<Prepared, EncodeError> {
    let mut warnings = game.validate()?;
    let reduced = crate::game::reduce_initials(game);
    warnings.extend(reduced.warnings.iter().cloned());
    let mut spec = reduced.game;

    match reduced.trivial_outcome {
        crate::game::TrivialOutcome::BlackAlreadyWon => {
            return Ok(Prepared {
                game: spec,
                trivial: Some(true),
                firstmoves: None,
                warnings,
            })
        }
        crate::game::TrivialOutcome::WhiteAlreadyWon => {
            return Ok(Prepared {
                game: spec,
                trivial: Some(false),
                firstmoves: None,
                warnings,
            })
        }
        crate::game::TrivialOutcome::None => {}
    }

    if let Some(depth) = opts.depth_override {
        if depth > spec.depth() {
            return Err(EncodeError::DepthOverrideTooLarge {
                requested: depth,
                depth: spec.depth(),
            });
        }
        spec.timeline.truncate(depth);
        if let Some(last) = spec.timeline.last() {
            if last.player == Player::White {
                warnings.push(format!(
                    "depth override {depth} ends on a White move; sound but wasteful"
                ));
            }
        }
    }

    // Black cannot win without winning sets or without any move to make.
    if spec.ewins_black.is_empty() || spec.timeline.is_empty() {
        return Ok(Prepared {
            game: spec,
            trivial: Some(false),
            firstmoves: None,
            warnings,
        });
    }

    let firstmoves = match (&spec.firstmoves, opts.firstmoves) {
        (Some(fm), FirstmovesMode::Auto) => {
            if spec.timeline[0].player != Player::Black {
                return Err(EncodeError::FirstmovesWithWhiteFirst);
            }
            if fm.is_empty() {
                return Err(EncodeError::FirstmovesEmptyAfterReduction);
            }
            Some(fm.iter().copied().collect())
        }
        _ => None,
    };

    Ok(Prepared {
        game: spec,
        trivial: None,
        firstmoves,
        warnings,
    })
}
