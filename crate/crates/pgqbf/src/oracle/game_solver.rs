//! Exhaustive minimax over positional-game play.
//!
//! The timeline is walked one individual move at a time; the player owning
//! the current time point claims any unclaimed vertex. A claim that
//! completes one of the claimer's winning sets ends the game immediately,
//! so a player closing a set with the first stone of a multi-claim turn
//! wins on the spot. The game also ends when the board fills up or the
//! timeline runs out; in a Maker-Maker game that is a draw, in a
//! Maker-Breaker game it is Breaker's win. The verdict is always stated for
//! Black: TRUE means Black forces a win.
//!
//! States are memoized by their claim sets alone; the move number is
//! implied by the number of stones, so transpositions across differently
//! ordered claims within a turn collapse.

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

use crate::game::{GameError, GameSpec, Player};
use crate::oracle::{SolveResult, UnknownReason, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("game has {0} vertices, above the exhaustive-search limit {1}")]
    TooManyVertices(usize, usize),
    #[error(transparent)]
    Invalid(#[from] GameError),
}

/// Resource limits for the exhaustive game solver.
#[derive(Debug, Clone)]
pub struct GameLimits {
    pub max_vertices: usize,
    pub max_nodes: u64,
}

impl Default for GameLimits {
    fn default() -> Self {
        GameLimits {
            max_vertices: 16,
            max_nodes: 100_000_000,
        }
    }
}

struct Searcher {
    timeline: Vec<Player>,
    depth: usize,
    full_mask: u64,
    /// Stones already on the board before move 1; the move cursor is the
    /// total claim count minus this.
    preplaced: usize,
    edges: [Vec<u64>; 2],
    edges_by_vertex: [Vec<Vec<usize>>; 2],
    memo: HashMap<(u64, u64), bool>,
    nodes: u64,
    decisions: u64,
    max_nodes: u64,
}

struct Exhausted;

impl Searcher {
    fn player_index(player: Player) -> usize {
        match player {
            Player::Black => 0,
            Player::White => 1,
        }
    }

    /// Does claiming `v` complete one of `player`'s winning sets?
    fn completes(&self, player: Player, claimed: u64, v: usize) -> bool {
        let pi = Self::player_index(player);
        self.edges_by_vertex[pi][v]
            .iter()
            .any(|&e| self.edges[pi][e] & !claimed == 0)
    }

    /// True iff Black forces a win from this position.
    fn black_wins(&mut self, black: u64, white: u64) -> Result<bool, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        let occupied = black | white;
        let cursor = occupied.count_ones() as usize - self.preplaced;
        if cursor >= self.depth || occupied == self.full_mask {
            return Ok(false);
        }
        if let Some(&value) = self.memo.get(&(black, white)) {
            return Ok(value);
        }
        let player = self.timeline[cursor];
        let mut free = self.full_mask & !occupied;
        let mut value = player == Player::White; // neutral element of the fold
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            self.decisions += 1;
            let bit = 1u64 << v;
            let (nb, nw) = match player {
                Player::Black => (black | bit, white),
                Player::White => (black, white | bit),
            };
            let claimed = if player == Player::Black { nb } else { nw };
            let child = if self.completes(player, claimed, v) {
                player == Player::Black
            } else {
                self.black_wins(nb, nw)?
            };
            match player {
                Player::Black if child => {
                    value = true;
                    break;
                }
                Player::White if !child => {
                    value = false;
                    break;
                }
                _ => {}
            }
        }
        self.memo.insert((black, white), value);
        Ok(value)
    }
}

fn build_searcher(
    spec: &GameSpec,
    depth_limit: Option<usize>,
    limits: &GameLimits,
) -> Result<(Searcher, u64, u64), OracleError> {
    spec.validate()?;
    let n = spec.n();
    if n > limits.max_vertices {
        return Err(OracleError::TooManyVertices(n, limits.max_vertices));
    }
    let edge_masks = |edges: &[Vec<usize>]| -> Vec<u64> {
        edges
            .iter()
            .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << (v - 1)))
            .collect()
    };
    let by_vertex = |masks: &[u64]| -> Vec<Vec<usize>> {
        (0..n)
            .map(|v| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m & (1 << v) != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    };
    let black_masks = edge_masks(&spec.ewins_black);
    let white_masks = edge_masks(&spec.ewins_white);
    let black_by_v = by_vertex(&black_masks);
    let white_by_v = by_vertex(&white_masks);
    let black0 = spec
        .black_initials
        .iter()
        .fold(0u64, |m, &v| m | 1 << (v - 1));
    let white0 = spec
        .white_initials
        .iter()
        .fold(0u64, |m, &v| m | 1 << (v - 1));
    let depth = depth_limit
        .unwrap_or(spec.depth())
        .min(spec.depth());
    let searcher = Searcher {
        timeline: spec.timeline.iter().map(|t| t.player).collect(),
        depth,
        full_mask: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        preplaced: (black0 | white0).count_ones() as usize,
        edges: [black_masks, white_masks],
        edges_by_vertex: [black_by_v, white_by_v],
        memo: HashMap::new(),
        nodes: 0,
        decisions: 0,
        max_nodes: limits.max_nodes,
    };
    Ok((searcher, black0, white0))
}

/// Solves a game exhaustively, optionally truncating the timeline after
/// `depth_limit` individual moves. Pre-placed stones are put on the board
/// first; a winning set already covered by them decides the game before any
/// move, Black's sets checked first.
pub fn solve_game(
    spec: &GameSpec,
    depth_limit: Option<usize>,
    limits: &GameLimits,
) -> Result<SolveResult, OracleError> {
    let start = Instant::now();
    let (mut searcher, black0, white0) = build_searcher(spec, depth_limit, limits)?;

    // Stones on the board before the first move.
    let pre_win = |edges: &[u64], claimed: u64| edges.iter().any(|&m| m & !claimed == 0);
    if pre_win(&searcher.edges[0], black0) {
        return Ok(SolveResult {
            optimal_depth: Some(0),
            wall: start.elapsed(),
            ..SolveResult::decided(Verdict::True)
        });
    }
    if pre_win(&searcher.edges[1], white0) {
        return Ok(SolveResult {
            wall: start.elapsed(),
            ..SolveResult::decided(Verdict::False)
        });
    }

    let outcome = searcher.black_wins(black0, white0);
    let (verdict, unknown_reason) = match outcome {
        Ok(true) => (Verdict::True, None),
        Ok(false) => (Verdict::False, None),
        Err(Exhausted) => (Verdict::Unknown, Some(UnknownReason::NodeBudget)),
    };
    Ok(SolveResult {
        verdict,
        optimal_depth: None,
        nodes: searcher.nodes,
        decisions: searcher.decisions,
        wall: start.elapsed(),
        unknown_reason,
    })
}

/// Finds the minimal truncation depth at which Black still forces a win,
/// trying only depths whose last time point belongs to Black. Returns the
/// full-depth result when Black cannot win at all.
pub fn optimal_depth(spec: &GameSpec, limits: &GameLimits) -> Result<SolveResult, OracleError> {
    let full = solve_game(spec, None, limits)?;
    if full.verdict != Verdict::True {
        return Ok(full);
    }
    if full.optimal_depth == Some(0) {
        return Ok(full);
    }
    let mut total_nodes = full.nodes;
    let mut total_decisions = full.decisions;
    let mut wall = full.wall;
    for d in 1..=spec.depth() {
        if spec.timeline[d - 1].player != Player::Black {
            continue;
        }
        let result = solve_game(spec, Some(d), limits)?;
        total_nodes += result.nodes;
        total_decisions += result.decisions;
        wall += result.wall;
        if result.verdict == Verdict::True {
            return Ok(SolveResult {
                verdict: Verdict::True,
                optimal_depth: Some(d),
                nodes: total_nodes,
                decisions: total_decisions,
                wall,
                unknown_reason: None,
            });
        }
        if result.verdict == Verdict::Unknown {
            return Ok(SolveResult {
                verdict: Verdict::Unknown,
                optimal_depth: None,
                nodes: total_nodes,
                decisions: total_decisions,
                wall,
                unknown_reason: result.unknown_reason,
            });
        }
    }
    Ok(SolveResult {
        optimal_depth: Some(spec.depth()),
        nodes: total_nodes,
        decisions: total_decisions,
        wall,
        ..full
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{TimePoint, Player::*};
    use std::collections::BTreeSet;

    fn spec(vertices: usize, players: &[Player], black_edges: Vec<Vec<usize>>, white_edges: Vec<Vec<usize>>) -> GameSpec {
        GameSpec {
            version: "1.0".into(),
            vertices: (1..=vertices).map(|i| format!("v{i}")).collect(),
            timeline: players
                .iter()
                .enumerate()
                .map(|(i, &player)| TimePoint { label: format!("t{}", i + 1), player })
                .collect(),
            ewins_black: black_edges,
            ewins_white: white_edges,
            black_initials: BTreeSet::new(),
            white_initials: BTreeSet::new(),
            firstmoves: None,
        }
    }

    fn tic_tac_toe() -> GameSpec {
        let lines = vec![
            vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9],
            vec![1, 4, 7], vec![2, 5, 8], vec![3, 6, 9],
            vec![1, 5, 9], vec![3, 5, 7],
        ];
        spec(
            9,
            &[Black, White, Black, White, Black, White, Black, White, Black],
            lines.clone(),
            lines,
        )
    }

    #[test]
    fn single_vertex_game_is_won_at_depth_one() {
        let g = spec(1, &[Black], vec![vec![1]], vec![]);
        let result = optimal_depth(&g, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::True);
        assert_eq!(result.optimal_depth, Some(1));
    }

    #[test]
    fn tic_tac_toe_is_a_draw() {
        let result = solve_game(&tic_tac_toe(), None, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::False);
    }

    #[test]
    fn small_hex_is_a_first_player_win() {
        // 2x2 hex: three minimal top-bottom paths, Breaker cannot cut them all.
        let g = spec(
            4,
            &[Black, White, Black, White],
            vec![vec![1, 3], vec![2, 4], vec![2, 3]],
            vec![],
        );
        let result = solve_game(&g, None, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::True);
    }

    #[test]
    fn depth_limit_can_hide_the_win() {
        // A fork: after v1, White can block only one of v2/v3. Black needs
        // three moves on the clock, so a depth-1 truncation hides the win.
        let g = spec(3, &[Black, White, Black], vec![vec![1, 2], vec![1, 3]], vec![]);
        assert_eq!(
            solve_game(&g, Some(1), &GameLimits::default()).unwrap().verdict,
            Verdict::False
        );
        assert_eq!(
            solve_game(&g, Some(3), &GameLimits::default()).unwrap().verdict,
            Verdict::True
        );
    }

    #[test]
    fn preplaced_stones_decide_immediately() {
        let mut g = spec(3, &[Black, White, Black], vec![vec![1, 2]], vec![vec![3]]);
        g.black_initials = [1, 2].into_iter().collect();
        let result = solve_game(&g, None, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::True);
        assert_eq!(result.optimal_depth, Some(0));

        let mut g = spec(3, &[Black, White, Black], vec![vec![1, 2]], vec![vec![3]]);
        g.white_initials = [3].into_iter().collect();
        let result = solve_game(&g, None, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::False);
    }

    #[test]
    fn mid_turn_completion_wins() {
        // Black claims twice in a row and completes on the first of them
        // even though the second claim has no legal vertex left.
        let g = spec(2, &[Black, Black, White], vec![vec![1]], vec![vec![2]]);
        let result = solve_game(&g, None, &GameLimits::default()).unwrap();
        assert_eq!(result.verdict, Verdict::True);
    }

    #[test]
    fn node_budget_returns_unknown() {
        let limits = GameLimits { max_nodes: 3, ..GameLimits::default() };
        let result = solve_game(&tic_tac_toe(), None, &limits).unwrap();
        assert_eq!(result.verdict, Verdict::Unknown);
        assert_eq!(result.unknown_reason, Some(UnknownReason::NodeBudget));
    }

    #[test]
    fn vertex_limit_is_enforced() {
        let g = spec(3, &[Black], vec![vec![1]], vec![]);
        let limits = GameLimits { max_vertices: 2, ..GameLimits::default() };
        assert_eq!(
            solve_game(&g, None, &limits).unwrap_err(),
            OracleError::TooManyVertices(3, 2)
        );
    }
}
