//! Cross-validation of the encoders against game-tree search: a game is
//! solved directly and through each requested encoding, and the verdicts
//! must coincide.

use serde::Serialize;

use crate::encode::{encode, EncodeError, EncodeOptions, EncodingVariant};
use crate::game::GameSpec;
use crate::oracle::{solve_game, solve_qbf, GameLimits, OracleError, QbfLimits, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquisatVerdict {
    Agree(Verdict),
    Disagree,
    Inconclusive,
}

/// One compared encoding inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct ComparedEncoding {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquisatReport {
    pub game_verdict: Verdict,
    pub encodings: Vec<ComparedEncoding>,
    pub verdict: EquisatVerdict,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Solves the game directly and through the corrective encoding, and
/// optionally through the monotonic encoding variants, then compares. Any
/// side hitting a resource limit makes the report inconclusive rather than
/// a disagreement. The `#firstmoves` restriction is ignored here: it prunes
/// symmetric strategies in the formula but the game solver knows nothing
/// about it.
pub fn check_equisat(
    spec: &GameSpec,
    depth: Option<usize>,
    include_enc2: bool,
    game_limits: &GameLimits,
    qbf_limits: &QbfLimits,
) -> Result<EquisatReport, CheckError> {
    let game_verdict = solve_game(spec, depth, game_limits)?.verdict;

    let mut encodings = Vec::new();
    let mut run = |label: &str, opts: &EncodeOptions| -> Result<(), CheckError> {
        let encoded = encode(spec, opts)?;
        let verdict = solve_qbf(&encoded.formula, qbf_limits).verdict;
        encodings.push(ComparedEncoding {
            label: label.to_string(),
            verdict,
        });
        Ok(())
    };

    let base = EncodeOptions {
        depth_override: depth,
        firstmoves: crate::encode::FirstmovesMode::Off,
        ..EncodeOptions::default()
    };
    run("cor", &base)?;
    if include_enc2 {
        run(
            "enc2",
            &EncodeOptions {
                variant: EncodingVariant::Enc2,
                maker_breaker_auto: false,
                ..base.clone()
            },
        )?;
        run(
            "enc2+improvements",
            &EncodeOptions {
                variant: EncodingVariant::Enc2,
                maker_breaker_auto: false,
                enc2_improvements: true,
                ..base.clone()
            },
        )?;
        if spec.ewins_white.is_empty() {
            run(
                "enc2-mb",
                &EncodeOptions {
                    variant: EncodingVariant::Enc2,
                    maker_breaker_auto: true,
                    ..base.clone()
                },
            )?;
        }
    }

    let inconclusive = game_verdict == Verdict::Unknown
        || encodings.iter().any(|e| e.verdict == Verdict::Unknown);
    let verdict = if inconclusive {
        EquisatVerdict::Inconclusive
    } else if encodings.iter().all(|e| e.verdict == game_verdict) {
        EquisatVerdict::Agree(game_verdict)
    } else {
        EquisatVerdict::Disagree
    };
    Ok(EquisatReport {
        game_verdict,
        encodings,
        verdict,
    })
}
