//! The desk-scale validation suite: a fixed set of small games spanning
//! k-in-a-row boards, polyomino achievement games and Hex, in plain and
//! `(p, q)` variants, each with a few timeline truncation depths.

use crate::game::GameSpec;
use crate::gens::{self, Polyomino};

pub struct SuiteGame {
    pub name: String,
    pub spec: GameSpec,
    /// Truncation depths to test, always including the full timeline.
    pub depths: Vec<usize>,
}

fn entry(name: &str, spec: GameSpec) -> SuiteGame {
    let full = spec.depth();
    let mut depths = vec![full];
    if full > 2 {
        depths.push(full - 2);
    }
    if full > 4 {
        depths.push(3.min(full));
    }
    depths.sort_unstable();
    depths.dedup();
    SuiteGame {
        name: name.to_string(),
        spec,
        depths,
    }
}

fn lines(rows: usize, cols: usize, k: usize, p: usize, q: usize, mb: bool) -> GameSpec {
    gens::gen_lines_game(rows, cols, k, p, q, mb).expect("suite lines game")
}

fn harary(n: usize, poly: &Polyomino, p: usize, q: usize) -> GameSpec {
    gens::gen_polyomino_game(n, poly, p, q).expect("suite polyomino game")
}

/// Builds the whole suite. Everything stays within the exhaustive game
/// solver's default vertex limit.
pub fn desk_suite() -> Vec<SuiteGame> {
    let domino = gens::domino();
    let tromino_l = gens::tromino_l();
    let tromino_i = gens::tromino_i();
    vec![
        entry("lines-1x2-k2", lines(1, 2, 2, 1, 1, false)),
        entry("lines-2x2-k2", lines(2, 2, 2, 1, 1, false)),
        entry("lines-2x3-k2", lines(2, 3, 2, 1, 1, false)),
        entry("lines-2x3-k3", lines(2, 3, 3, 1, 1, false)),
        entry("lines-3x3-k2", lines(3, 3, 2, 1, 1, false)),
        entry("lines-3x3-k3", lines(3, 3, 3, 1, 1, false)),
        entry("lines-3x3-k3-p1q2", lines(3, 3, 3, 1, 2, false)),
        entry("lines-3x3-k3-p2q1", lines(3, 3, 3, 2, 1, false)),
        entry("lines-3x3-k2-p2q1", lines(3, 3, 2, 2, 1, false)),
        entry("lines-2x2-k2-p1q2", lines(2, 2, 2, 1, 2, false)),
        entry("lines-3x3-k2-mb", lines(3, 3, 2, 1, 1, true)),
        entry("harary-domino-2", harary(2, &domino, 1, 1)),
        entry("harary-domino-3", harary(3, &domino, 1, 1)),
        entry("harary-domino-2-p1q2", harary(2, &domino, 1, 2)),
        entry("harary-domino-3-p2q1", harary(3, &domino, 2, 1)),
        entry("harary-ltromino-3", harary(3, &tromino_l, 1, 1)),
        entry("harary-ltromino-3-p1q2", harary(3, &tromino_l, 1, 2)),
        entry("harary-itromino-3", harary(3, &tromino_i, 1, 1)),
        entry("hex-1", gens::gen_hex(1, 5).expect("suite hex")),
        entry("hex-2", gens::gen_hex(2, 5).expect("suite hex")),
        entry("hex-3", gens::gen_hex(3, 5).expect("suite hex")),
    ]
}
