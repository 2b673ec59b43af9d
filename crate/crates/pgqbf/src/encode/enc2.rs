//! The monotonic encoding.
//!
//! Play is grouped into rounds: Black claims a set of vertices, then White
//! answers with her own set of universally quantified per-vertex choice
//! variables. Ownership is summarized once, in final-position variables,
//! and the goal is tested there. Illegal universal assignments are not
//! repaired; instead, indicator variables (`excess` for claiming one vertex
//! too many, `stack` for claiming an already claimed vertex) let the
//! existential player point at the violation and discharge the goal through
//! the `cheat` escape.
//!
//! Two timing details matter for the winning test. White's claims in round
//! `t` count toward her final position only while the game is still running
//! at round `t + 1`: Black moves first within a round, so a White answer
//! played after Black's completing claim must not outrace it, and her claims
//! in the very last round can never decide the game. Second, White can stack
//! on a vertex Black claimed earlier in the same round, including round 0,
//! so stack indicators exist for every round in which White moves.
//!
//! Round `r`'s claim variables live at slots `2r` (Black) and `2r + 1`
//! (White) of the move descriptor space.

use crate::game::{merge_consecutive_turns, GameSpec, Player, VertexId};
use crate::qbf::{neg, pos, DLit, FormulaBuilder, Quant, VarDesc};

use super::{prepare, EncodeError, EncodeMeta, EncodeOptions, Encoded, EncodingVariant};

/// Claim sizes per round. In a `(p, q)` game the Black sizes are
/// `q, p, p, ...`; a truncated timeline may leave the last round without a
/// White answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enc2TurnPlan {
    pub black_claims: Vec<usize>,
    pub white_claims: Vec<usize>,
}

impl Enc2TurnPlan {
    /// Number of rounds.
    pub fn rounds(&self) -> usize {
        self.black_claims.len()
    }

    /// Groups the game's merged turns into Black-then-White rounds.
    pub fn from_game(spec: &GameSpec) -> Result<Enc2TurnPlan, EncodeError> {
        let turns = merge_consecutive_turns(spec);
        if turns.turns.is_empty() || turns.turns[0].player != Player::Black {
            return Err(EncodeError::Enc2RequiresBlackFirst);
        }
        let mut black_claims = Vec::new();
        let mut white_claims = Vec::new();
        for turn in &turns.turns {
            match turn.player {
                Player::Black => {
                    black_claims.push(turn.claim_count());
                    white_claims.push(0);
                }
                Player::White => {
                    *white_claims.last_mut().unwrap() = turn.claim_count();
                }
            }
        }
        Ok(Enc2TurnPlan {
            black_claims,
            white_claims,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Increasing `k`-tuples out of `1..=n`, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut tuple: Vec<usize> = (1..=k).collect();
    loop {
        out.push(tuple.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if tuple[i] < n - (k - 1 - i) {
                tuple[i] += 1;
                for j in i + 1..k {
                    tuple[j] = tuple[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn black_move(round: usize, v: VertexId) -> VarDesc {
    VarDesc::Move(v, 2 * round)
}

fn white_move(round: usize, v: VertexId) -> VarDesc {
    VarDesc::Move(v, 2 * round + 1)
}

/// Encodes a game with the monotonic encoding, dispatching the
/// Maker-Breaker special case when White has no winning sets and the
/// options allow it.
pub fn encode_enc2(game: &GameSpec, opts: &EncodeOptions) -> Result<Encoded, EncodeError> {
    let prepared = prepare(game, opts)?;
    let spec = &prepared.game;
    let mut meta = EncodeMeta {
        variant: Some(EncodingVariant::Enc2),
        vertices: spec.n(),
        depth: spec.depth(),
        black_edges: spec.ewins_black.len(),
        white_edges: spec.ewins_white.len(),
        ..EncodeMeta::default()
    };
    if let Some(value) = prepared.trivial {
        return Ok(Encoded::constant(value, prepared.warnings, meta));
    }
    if opts.enc2_force_mb && !spec.ewins_white.is_empty() {
        return Err(EncodeError::MakerBreakerRequiresEmptyWhiteWins);
    }
    let plan = Enc2TurnPlan::from_game(spec)?;
    check_tuple_cap(spec.n(), &plan, opts)?;

    let maker_breaker =
        opts.enc2_force_mb || (opts.maker_breaker_auto && spec.ewins_white.is_empty());
    let mut enc = Enc2Encoder {
        spec,
        plan: &plan,
        n: spec.n(),
        b: FormulaBuilder::new(),
        excess_tuples: Vec::new(),
        meta: &mut meta,
    };
    if maker_breaker {
        enc.encode_maker_breaker(prepared.firstmoves.as_deref())?;
    } else {
        enc.encode_base(opts, prepared.firstmoves.as_deref())?;
    }

    let (formula, table) = enc.b.finish()?;
    meta.primary_vars = table
        .iter()
        .filter(|(_, d)| !matches!(d, VarDesc::Excess { .. } | VarDesc::Stack { .. }))
        .count();
    Ok(Encoded {
        formula,
        table,
        warnings: prepared.warnings,
        meta,
    })
}

fn check_tuple_cap(
    n: usize,
    plan: &Enc2TurnPlan,
    opts: &EncodeOptions,
) -> Result<(), EncodeError> {
    let mut needed: u128 = 0;
    for t in 0..plan.rounds() {
        needed += binomial(n, plan.black_claims[t] + 1);
        if plan.white_claims[t] > 0 {
            needed += binomial(n, plan.white_claims[t] + 1);
        }
    }
    if needed > opts.tuple_cap as u128 {
        return Err(EncodeError::TupleCapExceeded {
            needed,
            cap: opts.tuple_cap,
        });
    }
    Ok(())
}

struct Enc2Encoder<'a> {
    spec: &'a GameSpec,
    plan: &'a Enc2TurnPlan,
    n: usize,
    b: FormulaBuilder,
    /// Per round: the enumerated (p+1)-tuples behind the excess variables.
    excess_tuples: Vec<Vec<Vec<VertexId>>>,
    meta: &'a mut EncodeMeta,
}

impl Enc2Encoder<'_> {
    fn rounds(&self) -> usize {
        self.plan.rounds()
    }

    fn has_white(&self, t: usize) -> bool {
        self.plan.white_claims[t] > 0
    }

    fn all_cheat_indicators(&self) -> Vec<DLit> {
        let mut lits = Vec::new();
        for (t, tuples) in self.excess_tuples.iter().enumerate() {
            for i in 0..tuples.len() {
                lits.push(pos(VarDesc::Excess { round: t, tuple: i }));
            }
        }
        for t in 0..self.rounds() {
            if self.has_white(t) {
                for v in 1..=self.n {
                    lits.push(pos(VarDesc::Stack { round: t, vertex: v }));
                }
            }
        }
        lits
    }

    fn build_base_prefix(&mut self) -> Result<(), EncodeError> {
        self.excess_tuples = vec![Vec::new(); self.rounds()];
        for t in 0..self.rounds() {
            self.b.begin_block(Quant::Exists);
            self.b.var(VarDesc::Time(t))?;
            self.meta.time_vars += 1;
            self.b.begin_block(Quant::Exists);
            for v in 1..=self.n {
                self.b.var(black_move(t, v))?;
            }
            if self.has_white(t) {
                self.meta.white_moves += 1;
                self.b.begin_block(Quant::ForAll);
                for v in 1..=self.n {
                    self.b.var(white_move(t, v))?;
                }
                let tuples = combinations(self.n, self.plan.white_claims[t] + 1);
                if !tuples.is_empty() {
                    self.b.begin_block(Quant::Exists);
                    for i in 0..tuples.len() {
                        self.b.var(VarDesc::Excess { round: t, tuple: i })?;
                    }
                }
                self.excess_tuples[t] = tuples;
                self.b.begin_block(Quant::Exists);
                for v in 1..=self.n {
                    self.b.var(VarDesc::Stack { round: t, vertex: v })?;
                }
            }
        }
        self.b.begin_block(Quant::Exists);
        self.b.var(VarDesc::Lose)?;
        self.b.var(VarDesc::WinFlag)?;
        for v in 1..=self.n {
            self.b.var(VarDesc::FinalBlack(v))?;
        }
        for v in 1..=self.n {
            self.b.var(VarDesc::FinalWhite(v))?;
        }
        for e in 0..self.spec.ewins_black.len() {
            self.b.var(VarDesc::Win(e))?;
        }
        self.b.var(VarDesc::Cheat)?;
        Ok(())
    }

    fn emit_core(&mut self) -> Result<(), EncodeError> {
        let rounds = self.rounds();
        for t in 1..rounds {
            self.b
                .clause([neg(VarDesc::Time(t)), pos(VarDesc::Time(t - 1))])?;
        }
        for t in 0..rounds {
            for v in 1..=self.n {
                self.b
                    .clause([pos(VarDesc::Time(t)), neg(black_move(t, v))])?;
            }
        }
        for v in 1..=self.n {
            let mut lits = vec![neg(VarDesc::FinalBlack(v))];
            lits.extend((0..rounds).map(|t| pos(black_move(t, v))));
            self.b.clause(lits)?;
        }
        // White's round-t claims count only while round t+1 still runs;
        // Black moves first within a round, and nothing after his winning
        // claim may matter.
        for t in 0..rounds {
            if !self.has_white(t) || t + 1 >= rounds {
                continue;
            }
            for v in 1..=self.n {
                self.b.clause([
                    pos(VarDesc::FinalWhite(v)),
                    neg(VarDesc::Time(t + 1)),
                    neg(white_move(t, v)),
                ])?;
            }
        }
        self.b
            .clause([pos(VarDesc::Cheat), pos(VarDesc::WinFlag)])?;
        self.b.clause([pos(VarDesc::Cheat), neg(VarDesc::Lose)])?;
        let mut lits = vec![neg(VarDesc::WinFlag)];
        lits.extend((0..self.spec.ewins_black.len()).map(|e| pos(VarDesc::Win(e))));
        self.b.clause(lits)?;
        for (e, edge) in self.spec.ewins_black.iter().enumerate() {
            for &v in edge {
                self.b
                    .clause([neg(VarDesc::Win(e)), pos(VarDesc::FinalBlack(v))])?;
            }
        }
        for edge in &self.spec.ewins_white {
            let mut lits = vec![pos(VarDesc::Lose)];
            lits.extend(edge.iter().map(|&v| neg(VarDesc::FinalWhite(v))));
            self.b.clause(lits)?;
        }
        Ok(())
    }

    fn emit_legality(&mut self, improvements: bool) -> Result<(), EncodeError> {
        let rounds = self.rounds();
        for t in 0..rounds {
            let tuples = combinations(self.n, self.plan.black_claims[t] + 1);
            for tuple in tuples {
                self.b
                    .clause(tuple.iter().map(|&v| neg(black_move(t, v))))?;
            }
        }
        for t in 0..rounds {
            for t_before in 0..t {
                if !self.has_white(t_before) {
                    continue;
                }
                for v in 1..=self.n {
                    self.b
                        .clause([neg(black_move(t, v)), neg(white_move(t_before, v))])?;
                }
            }
        }
        for t in 0..rounds {
            for (i, tuple) in self.excess_tuples[t].iter().enumerate() {
                for &v in tuple {
                    self.b.clause([
                        neg(VarDesc::Excess { round: t, tuple: i }),
                        pos(white_move(t, v)),
                    ])?;
                }
            }
        }
        for t in 0..rounds {
            if !self.has_white(t) {
                continue;
            }
            for v in 1..=self.n {
                self.b.clause([
                    neg(VarDesc::Stack { round: t, vertex: v }),
                    pos(white_move(t, v)),
                ])?;
                let mut lits = vec![neg(VarDesc::Stack { round: t, vertex: v })];
                lits.extend((0..=t).map(|tb| pos(black_move(tb, v))));
                if improvements {
                    lits.extend(
                        (0..t)
                            .filter(|&tb| self.has_white(tb))
                            .map(|tb| pos(white_move(tb, v))),
                    );
                }
                self.b.clause(lits)?;
            }
        }
        let mut cheat = vec![neg(VarDesc::Cheat)];
        cheat.extend(self.all_cheat_indicators());
        self.b.clause(cheat)?;
        Ok(())
    }

    fn emit_improvements(&mut self) -> Result<(), EncodeError> {
        let rounds = self.rounds();
        for t in 0..rounds {
            for t_before in 0..t {
                for v in 1..=self.n {
                    self.b
                        .clause([neg(black_move(t, v)), neg(black_move(t_before, v))])?;
                }
            }
        }
        Ok(())
    }

    fn emit_firstmoves(&mut self, firstmoves: Option<&[VertexId]>) -> Result<(), EncodeError> {
        if let Some(fm) = firstmoves {
            for v in 1..=self.n {
                if !fm.contains(&v) {
                    self.b.clause([neg(black_move(0, v))])?;
                }
            }
        }
        Ok(())
    }

    fn encode_base(
        &mut self,
        opts: &EncodeOptions,
        firstmoves: Option<&[VertexId]>,
    ) -> Result<(), EncodeError> {
        self.build_base_prefix()?;
        self.emit_core()?;
        self.emit_legality(opts.enc2_improvements)?;
        if opts.enc2_improvements {
            self.emit_improvements()?;
        }
        self.emit_firstmoves(firstmoves)
    }

    /// Maker-Breaker special case: Black's side collapses onto monotone
    /// per-round ownership variables, White keeps her choice variables, and
    /// the goal becomes one disjunction over win and cheat indicators.
    fn encode_maker_breaker(
        &mut self,
        firstmoves: Option<&[VertexId]>,
    ) -> Result<(), EncodeError> {
        let rounds = self.rounds();
        let n = self.n;
        let last = rounds - 1;
        self.excess_tuples = vec![Vec::new(); rounds];

        for t in 0..rounds {
            self.b.begin_block(Quant::Exists);
            for v in 1..=n {
                self.b.var(VarDesc::Board(Player::Black, v, t))?;
            }
            if self.has_white(t) {
                self.meta.white_moves += 1;
                self.b.begin_block(Quant::ForAll);
                for v in 1..=n {
                    self.b.var(white_move(t, v))?;
                }
            }
        }
        let num_edges = self.spec.ewins_black.len();
        self.b.begin_block(Quant::Exists);
        for e in 0..num_edges {
            self.b.var(VarDesc::Win(e))?;
        }
        for t in 0..rounds {
            if self.has_white(t) {
                let tuples = combinations(n, self.plan.white_claims[t] + 1);
                if !tuples.is_empty() {
                    self.b.begin_block(Quant::Exists);
                    for i in 0..tuples.len() {
                        self.b.var(VarDesc::Excess { round: t, tuple: i })?;
                    }
                }
                self.excess_tuples[t] = tuples;
                self.b.begin_block(Quant::Exists);
                for v in 1..=n {
                    self.b.var(VarDesc::Stack { round: t, vertex: v })?;
                }
            }
        }

        let board = |v: VertexId, t: usize| VarDesc::Board(Player::Black, v, t);

        for t in 1..rounds {
            for v in 1..=n {
                self.b.clause([neg(board(v, t - 1)), pos(board(v, t))])?;
            }
        }
        // At most p new claims per round: every (p+1)-tuple keeps a vertex
        // that is not newly claimed.
        for t in 0..rounds {
            for tuple in combinations(n, self.plan.black_claims[t] + 1) {
                let mut lits = Vec::with_capacity(2 * tuple.len());
                for &v in &tuple {
                    lits.push(neg(board(v, t)));
                    if t > 0 {
                        lits.push(pos(board(v, t - 1)));
                    }
                }
                self.b.clause(lits)?;
            }
        }
        // A White claim on a vertex Black does not own at that point blocks
        // it for the rest of the game.
        for t in 0..rounds {
            if !self.has_white(t) {
                continue;
            }
            for v in 1..=n {
                self.b
                    .clause([pos(board(v, t)), neg(white_move(t, v)), neg(board(v, last))])?;
            }
        }
        for (e, edge) in self.spec.ewins_black.iter().enumerate() {
            for &v in edge {
                self.b.clause([neg(VarDesc::Win(e)), pos(board(v, last))])?;
            }
        }
        for t in 0..rounds {
            for (i, tuple) in self.excess_tuples[t].iter().enumerate() {
                for &v in tuple {
                    self.b.clause([
                        neg(VarDesc::Excess { round: t, tuple: i }),
                        pos(white_move(t, v)),
                    ])?;
                }
            }
            if self.has_white(t) {
                for v in 1..=n {
                    self.b.clause([
                        neg(VarDesc::Stack { round: t, vertex: v }),
                        pos(board(v, t)),
                    ])?;
                    self.b.clause([
                        neg(VarDesc::Stack { round: t, vertex: v }),
                        pos(white_move(t, v)),
                    ])?;
                }
            }
        }
        let mut goal: Vec<DLit> = (0..num_edges).map(|e| pos(VarDesc::Win(e))).collect();
        goal.extend(self.all_cheat_indicators());
        self.b.clause(goal)?;

        if let Some(fm) = firstmoves {
            for v in 1..=n {
                if !fm.contains(&v) {
                    self.b.clause([neg(board(v, 0))])?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::TimePoint;
    use crate::qbf::stats;
    use std::collections::BTreeSet;

    fn game(
        n: usize,
        players: &[Player],
        black: Vec<Vec<VertexId>>,
        white: Vec<Vec<VertexId>>,
    ) -> GameSpec {
        GameSpec {
            version: "1.0".into(),
            vertices: (1..=n).map(|i| format!("v{i}")).collect(),
            timeline: players
                .iter()
                .enumerate()
                .map(|(i, &player)| TimePoint {
                    label: format!("t{}", i + 1),
                    player,
                })
                .collect(),
            ewins_black: black,
            ewins_white: white,
            black_initials: BTreeSet::new(),
            white_initials: BTreeSet::new(),
            firstmoves: None,
        }
    }

    fn base_opts() -> EncodeOptions {
        EncodeOptions {
            variant: EncodingVariant::Enc2,
            maker_breaker_auto: false,
            ..EncodeOptions::default()
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(3, 2),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 4), Vec::<Vec<usize>>::new());
        assert_eq!(binomial(30, 4), 27405);
        assert_eq!(binomial(3, 2), 3);
    }

    #[test]
    fn plan_from_alternating_timeline() {
        use Player::*;
        let g = game(3, &[Black, White, Black], vec![vec![1]], vec![vec![2]]);
        let plan = Enc2TurnPlan::from_game(&g).unwrap();
        assert_eq!(plan.black_claims, vec![1, 1]);
        assert_eq!(plan.white_claims, vec![1, 0]);
    }

    #[test]
    fn white_first_is_rejected() {
        use Player::*;
        let g = game(2, &[White, Black], vec![vec![1]], vec![]);
        assert_eq!(
            encode_enc2(&g, &base_opts()).unwrap_err(),
            EncodeError::Enc2RequiresBlackFirst
        );
    }

    #[test]
    fn prefix_counts_for_three_vertices() {
        use Player::*;
        // Two full rounds: timeline B W B W.
        let g = game(3, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![3]]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let count = |pred: &dyn Fn(&VarDesc) -> bool| {
            enc.table.iter().filter(|(_, d)| pred(d)).count()
        };
        // Per round: 3 Black moves, 3 White moves, C(3,2)=3 excess, 3 stack.
        // Stack indicators exist for every round in which White moves.
        assert_eq!(count(&|d| matches!(d, VarDesc::Move(_, t) if t % 2 == 0)), 6);
        assert_eq!(count(&|d| matches!(d, VarDesc::Move(_, t) if t % 2 == 1)), 6);
        assert_eq!(count(&|d| matches!(d, VarDesc::Excess { .. })), 6);
        assert_eq!(count(&|d| matches!(d, VarDesc::Stack { .. })), 6);
        assert_eq!(stats(&enc.formula).universals, 6);

        // Innermost auxiliaries: lose, win, finalB, finalW, win(e).
        assert_eq!(
            count(&|d| matches!(
                d,
                VarDesc::Lose
                    | VarDesc::WinFlag
                    | VarDesc::FinalBlack(_)
                    | VarDesc::FinalWhite(_)
                    | VarDesc::Win(_)
            )),
            2 + 2 * 3 + 1
        );
    }

    #[test]
    fn tuple_cap_guards_the_enumeration() {
        use Player::*;
        let g = game(6, &[Black, White, Black], vec![vec![1]], vec![vec![2]]);
        let opts = EncodeOptions {
            tuple_cap: 3,
            ..base_opts()
        };
        assert!(matches!(
            encode_enc2(&g, &opts).unwrap_err(),
            EncodeError::TupleCapExceeded { .. }
        ));
    }

    #[test]
    fn no_white_winning_sets_means_no_lose_clauses() {
        use Player::*;
        let g = game(2, &[Black, White, Black], vec![vec![1, 2]], vec![]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let lose = enc.table.id(VarDesc::Lose).unwrap() as i32;
        // The only positive occurrence of lose would be a lose-support
        // clause; there are none, so lose appears only as ¬lose.
        assert!(enc
            .formula
            .clauses
            .iter()
            .all(|c| !c.contains(&lose)));
    }

    #[test]
    fn single_round_has_no_time_chain() {
        use Player::*;
        let g = game(1, &[Black], vec![vec![1]], vec![]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let time0 = enc.table.id(VarDesc::Time(0)).unwrap() as i32;
        assert!(!enc.formula.clauses.iter().any(|c| c == &vec![-time0]
            || (c.len() == 2 && c.contains(&-time0) && c.iter().any(|&l| l != -time0))
                && c.iter().all(|&l| {
                    matches!(enc.table.desc(l.unsigned_abs()), Some(VarDesc::Time(_)))
                })));
    }

    #[test]
    fn at_most_one_tuples_per_black_round() {
        use Player::*;
        let g = game(3, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![3]]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        // C(3,2)=3 binary all-negative clauses over Black moves per round.
        let at_most = enc
            .formula
            .clauses
            .iter()
            .filter(|c| {
                c.len() == 2
                    && c.iter().all(|&l| {
                        l < 0
                            && matches!(
                                enc.table.desc(l.unsigned_abs()),
                                Some(VarDesc::Move(_, t)) if t % 2 == 0
                            )
                    })
                    && {
                        let t0 = c
                            .iter()
                            .map(|&l| match enc.table.desc(l.unsigned_abs()) {
                                Some(VarDesc::Move(_, t)) => t,
                                _ => unreachable!(),
                            })
                            .collect::<Vec<_>>();
                        t0[0] == t0[1]
                    }
            })
            .count();
        assert_eq!(at_most, 6);
    }

    #[test]
    fn stack_support_is_two_clauses_per_vertex_and_round() {
        use Player::*;
        let g = game(2, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![1]]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let stack_support = enc
            .formula
            .clauses
            .iter()
            .filter(|c| {
                c.iter().any(|&l| {
                    l < 0 && matches!(
                        enc.table.desc(l.unsigned_abs()),
                        Some(VarDesc::Stack { .. })
                    )
                })
            })
            .count();
        // Two rounds with White, two vertices, two support clauses each.
        assert_eq!(stack_support, 2 * 2 * 2);
    }

    #[test]
    fn cheat_clause_collects_every_indicator() {
        use Player::*;
        let g = game(3, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![3]]);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let cheat = enc.table.id(VarDesc::Cheat).unwrap() as i32;
        let clause = enc
            .formula
            .clauses
            .iter()
            .find(|c| c.contains(&-cheat))
            .unwrap();
        // 1 + per-round excess (3+3) + per-White-round stacks (3+3).
        assert_eq!(clause.len(), 1 + 6 + 6);
    }

    #[test]
    fn improvements_add_black_no_repeat_clauses() {
        use Player::*;
        let g = game(2, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![1]]);
        let base = encode_enc2(&g, &base_opts()).unwrap();
        let improved = encode_enc2(
            &g,
            &EncodeOptions {
                enc2_improvements: true,
                ..base_opts()
            },
        )
        .unwrap();
        let no_repeat = |enc: &Encoded| {
            enc.formula
                .clauses
                .iter()
                .filter(|c| {
                    c.len() == 2
                        && c.iter().all(|&l| {
                            l < 0
                                && matches!(
                                    enc.table.desc(l.unsigned_abs()),
                                    Some(VarDesc::Move(_, t)) if t % 2 == 0
                                )
                        })
                        && {
                            let ts: Vec<usize> = c
                                .iter()
                                .map(|&l| match enc.table.desc(l.unsigned_abs()) {
                                    Some(VarDesc::Move(_, t)) => t,
                                    _ => unreachable!(),
                                })
                                .collect();
                            ts[0] != ts[1]
                        }
                })
                .count()
        };
        assert_eq!(no_repeat(&base), 0);
        assert_eq!(no_repeat(&improved), 2);
    }

    #[test]
    fn improvements_off_yields_the_base_formula() {
        use Player::*;
        let g = game(3, &[Black, White, Black], vec![vec![1, 2]], vec![vec![3]]);
        let one = encode_enc2(&g, &base_opts()).unwrap();
        let two = encode_enc2(&g, &base_opts()).unwrap();
        assert_eq!(one.formula, two.formula);
    }

    #[test]
    fn indicators_are_one_directional() {
        use Player::*;
        let g = game(3, &[Black, White, Black, White], vec![vec![1, 2]], vec![vec![3]]);
        for opts in [
            base_opts(),
            EncodeOptions {
                enc2_improvements: true,
                ..base_opts()
            },
        ] {
            let enc = encode_enc2(&g, &opts).unwrap();
            let cheat = enc.table.id(VarDesc::Cheat).unwrap() as i32;
            for clause in &enc.formula.clauses {
                for &l in clause {
                    let desc = enc.table.desc(l.unsigned_abs()).unwrap();
                    if matches!(desc, VarDesc::Excess { .. } | VarDesc::Stack { .. }) && l > 0 {
                        // Positive occurrences only in the cheat definition.
                        assert!(clause.contains(&-cheat));
                    }
                }
            }
        }
    }

    #[test]
    fn maker_breaker_single_vertex_counts() {
        let g = game(1, &[Player::Black], vec![vec![1]], vec![]);
        let opts = EncodeOptions {
            variant: EncodingVariant::Enc2,
            ..EncodeOptions::default()
        };
        let enc = encode_enc2(&g, &opts).unwrap();
        // boardB(0,1), win(e0); no White round at all.
        assert_eq!(enc.formula.num_vars, 2);
        assert_eq!(stats(&enc.formula).universals, 0);
    }

    #[test]
    fn maker_breaker_monotone_chain_count() {
        use Player::*;
        let g = game(
            3,
            &[Black, White, Black, White, Black],
            vec![vec![1, 2]],
            vec![],
        );
        let opts = EncodeOptions {
            variant: EncodingVariant::Enc2,
            ..EncodeOptions::default()
        };
        let enc = encode_enc2(&g, &opts).unwrap();
        let chains = enc
            .formula
            .clauses
            .iter()
            .filter(|c| {
                c.len() == 2
                    && c.iter().all(|&l| {
                        matches!(
                            enc.table.desc(l.unsigned_abs()),
                            Some(VarDesc::Board(Player::Black, _, _))
                        )
                    })
                    && c.iter().any(|&l| l < 0)
                    && c.iter().any(|&l| l > 0)
            })
            .count();
        // N * (T - 1) with N=3, T=3 rounds.
        assert_eq!(chains, 6);
    }

    #[test]
    fn maker_breaker_rejects_white_winning_sets() {
        use Player::*;
        let g = game(2, &[Black, White], vec![vec![1]], vec![vec![2]]);
        let opts = EncodeOptions {
            variant: EncodingVariant::Enc2,
            enc2_force_mb: true,
            ..EncodeOptions::default()
        };
        assert_eq!(
            encode_enc2(&g, &opts).unwrap_err(),
            EncodeError::MakerBreakerRequiresEmptyWhiteWins
        );
    }

    #[test]
    fn primary_variable_budget() {
        use Player::*;
        // 3x3-style game: the primary variable count stays within the
        // quadratic budget 2N² + 4N + |E| with a 1.5 slack factor.
        let lines = vec![
            vec![1, 2, 3],
            vec![4, 5, 6],
            vec![7, 8, 9],
            vec![1, 4, 7],
            vec![2, 5, 8],
            vec![3, 6, 9],
            vec![1, 5, 9],
            vec![3, 5, 7],
        ];
        let players: Vec<Player> = (0..9)
            .map(|i| if i % 2 == 0 { Black } else { White })
            .collect();
        let g = game(9, &players, lines.clone(), lines);
        let enc = encode_enc2(&g, &base_opts()).unwrap();
        let n = 9.0;
        let e = (enc.meta.black_edges + enc.meta.white_edges) as f64;
        let budget = 1.5 * (2.0 * n * n + 4.0 * n + e);
        assert!(
            (enc.meta.primary_vars as f64) <= budget,
            "{} primaries over budget {}",
            enc.meta.primary_vars,
            budget
        );
    }
}
