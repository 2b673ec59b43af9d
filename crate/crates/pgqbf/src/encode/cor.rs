//! The corrective encoding.
//!
//! White's move at each of her time points is chosen through a block of
//! universally quantified bits indexing the vertex list. A bit pattern that
//! points at an occupied vertex or past the end of the list forces nothing;
//! the ladder constraint then makes the existential player pick some legal
//! vertex on White's behalf, so no universal assignment can falsify the
//! formula by breaking the rules. Board state travels through monotone
//! implication chains and is frozen once the game-over flag drops, which is
//! what lets the winning test look only at the final time point.

use crate::game::{merge_consecutive_turns, GameSpec, Player, Turn};
use crate::qbf::{neg, pos, FormulaBuilder, Quant, VarDesc};

use super::{
    bit_split, move_bits, prepare, EncodeError, EncodeMeta, EncodeOptions, Encoded,
    EncodingVariant,
};

/// Encodes a game with the corrective encoding. Initial stones are reduced
/// away first; a game already decided by them yields a constant formula.
pub fn encode_cor(game: &GameSpec, opts: &EncodeOptions) -> Result<Encoded, EncodeError> {
    let prepared = prepare(game, opts)?;
    let spec = &prepared.game;
    let mut meta = EncodeMeta {
        variant: Some(EncodingVariant::Cor),
        vertices: spec.n(),
        depth: spec.depth(),
        black_edges: spec.ewins_black.len(),
        white_edges: spec.ewins_white.len(),
        move_bits: move_bits(spec.n()),
        ..EncodeMeta::default()
    };
    if let Some(value) = prepared.trivial {
        return Ok(Encoded::constant(value, prepared.warnings, meta));
    }

    let turns = merge_consecutive_turns(spec);
    let mut enc = CorEncoder {
        spec,
        turns: &turns.turns,
        n: spec.n(),
        f: spec.depth(),
        bits: move_bits(spec.n()),
        b: FormulaBuilder::new(),
        meta: &mut meta,
    };
    enc.build_prefix(opts)?;
    enc.emit_state_clauses(opts)?;
    enc.emit_move_clauses()?;
    enc.emit_white_choice_clauses()?;
    enc.emit_goal_clauses()?;
    enc.emit_cardinality_clauses(prepared.firstmoves.as_deref())?;

    let (formula, table) = enc.b.finish()?;
    Ok(Encoded {
        formula,
        table,
        warnings: prepared.warnings,
        meta,
    })
}

struct CorEncoder<'a> {
    spec: &'a GameSpec,
    turns: &'a [Turn],
    n: usize,
    f: usize,
    bits: u32,
    b: FormulaBuilder,
    meta: &'a mut EncodeMeta,
}

impl CorEncoder<'_> {
    fn player_at(&self, t: usize) -> Player {
        self.spec.timeline[t - 1].player
    }

    /// The turn containing time point `t`.
    fn turn_at(&self, t: usize) -> &Turn {
        self.turns
            .iter()
            .find(|turn| turn.time_points.contains(&t))
            .expect("every time point belongs to a turn")
    }

    fn build_prefix(&mut self, opts: &EncodeOptions) -> Result<(), EncodeError> {
        self.b.fix(VarDesc::Time(0), true)?;
        if opts.fold_t0 {
            for v in 1..=self.n {
                self.b.fix(VarDesc::Board(Player::Black, v, 0), false)?;
                self.b.fix(VarDesc::Board(Player::White, v, 0), false)?;
                self.b.fix(VarDesc::Occupied(v, 0), false)?;
            }
        } else {
            self.b.begin_block(Quant::Exists);
            for player in [Player::Black, Player::White] {
                for v in 1..=self.n {
                    self.b.var(VarDesc::Board(player, v, 0))?;
                }
            }
            for v in 1..=self.n {
                self.b.var(VarDesc::Occupied(v, 0))?;
            }
        }
        for t in 1..=self.f {
            self.b.begin_block(Quant::Exists);
            self.b.var(VarDesc::Time(t))?;
            self.meta.time_vars += 1;
            if self.player_at(t) == Player::White {
                self.meta.white_moves += 1;
                if self.bits > 0 {
                    self.b.begin_block(Quant::ForAll);
                    for i in 0..self.bits {
                        self.b.var(VarDesc::MoveBit(i, t))?;
                    }
                }
            }
            self.b.begin_block(Quant::Exists);
            for v in 1..=self.n {
                self.b.var(VarDesc::Move(v, t))?;
            }
            for player in [Player::Black, Player::White] {
                for v in 1..=self.n {
                    self.b.var(VarDesc::Board(player, v, t))?;
                }
            }
            for v in 1..=self.n {
                self.b.var(VarDesc::Occupied(v, t))?;
            }
            let turn = self.turn_at(t);
            let claim_count = turn.claim_count();
            let is_turn_end = *turn.time_points.last().unwrap() == t;
            if claim_count == 1 {
                for i in 1..=self.n {
                    self.b.var(VarDesc::Ladder(i, t))?;
                }
                self.meta.ladder_vars += self.n;
            } else if is_turn_end {
                // Registers of the turn's exactly-k counter live at the
                // level of its last time point.
                let positions = claim_count * self.n;
                for p in 1..=positions {
                    for j in 1..=claim_count {
                        self.b.var(VarDesc::Counter {
                            turn_end: t,
                            pos: p,
                            count: j,
                        })?;
                    }
                }
                self.meta.counter_vars += positions * claim_count;
            }
        }
        self.b.begin_block(Quant::Exists);
        for e in 0..self.spec.ewins_black.len() {
            self.b.var(VarDesc::Win(e))?;
        }
        Ok(())
    }

    fn emit_state_clauses(&mut self, opts: &EncodeOptions) -> Result<(), EncodeError> {
        let b = &mut self.b;
        if !opts.fold_t0 {
            for player in [Player::Black, Player::White] {
                for v in 1..=self.n {
                    b.clause([neg(VarDesc::Board(player, v, 0))])?;
                }
            }
            for v in 1..=self.n {
                b.clause([neg(VarDesc::Occupied(v, 0))])?;
            }
        }
        for t in 1..=self.f {
            b.clause([neg(VarDesc::Time(t)), pos(VarDesc::Time(t - 1))])?;
            for v in 1..=self.n {
                b.clause([
                    neg(VarDesc::Board(Player::Black, v, t)),
                    neg(VarDesc::Board(Player::White, v, t)),
                ])?;
                for player in [Player::Black, Player::White] {
                    b.clause([
                        neg(VarDesc::Board(player, v, t - 1)),
                        pos(VarDesc::Board(player, v, t)),
                    ])?;
                    b.clause([
                        pos(VarDesc::Time(t)),
                        pos(VarDesc::Board(player, v, t - 1)),
                        neg(VarDesc::Board(player, v, t)),
                    ])?;
                    b.clause([
                        pos(VarDesc::Occupied(v, t)),
                        neg(VarDesc::Board(player, v, t)),
                    ])?;
                }
                b.clause([
                    neg(VarDesc::Occupied(v, t)),
                    pos(VarDesc::Board(Player::Black, v, t)),
                    pos(VarDesc::Board(Player::White, v, t)),
                ])?;
            }
        }
        Ok(())
    }

    fn emit_move_clauses(&mut self) -> Result<(), EncodeError> {
        for t in 1..=self.f {
            let mover = self.player_at(t);
            let b = &mut self.b;
            for v in 1..=self.n {
                b.clause([pos(VarDesc::Time(t)), neg(VarDesc::Move(v, t))])?;
                b.clause([neg(VarDesc::Occupied(v, t - 1)), neg(VarDesc::Move(v, t))])?;
                b.clause([pos(VarDesc::Board(mover, v, t)), neg(VarDesc::Move(v, t))])?;
                // Frame: the mover's side changes only where a move lands,
                // the opponent's side never changes.
                b.clause([
                    pos(VarDesc::Move(v, t)),
                    pos(VarDesc::Board(mover, v, t - 1)),
                    neg(VarDesc::Board(mover, v, t)),
                ])?;
                b.clause([
                    pos(VarDesc::Board(mover.opponent(), v, t - 1)),
                    neg(VarDesc::Board(mover.opponent(), v, t)),
                ])?;
            }
        }
        Ok(())
    }

    fn emit_white_choice_clauses(&mut self) -> Result<(), EncodeError> {
        for t in 1..=self.f {
            if self.player_at(t) != Player::White {
                continue;
            }
            for v in 1..=self.n {
                let (ones, zeros) = bit_split(v - 1, self.bits);
                let mut lits = Vec::with_capacity(self.bits as usize + 3);
                for i in ones {
                    lits.push(neg(VarDesc::MoveBit(i, t)));
                }
                for i in zeros {
                    lits.push(pos(VarDesc::MoveBit(i, t)));
                }
                lits.push(neg(VarDesc::Time(t)));
                lits.push(pos(VarDesc::Occupied(v, t - 1)));
                lits.push(pos(VarDesc::Move(v, t)));
                self.b.clause(lits)?;
            }
        }
        Ok(())
    }

    fn emit_goal_clauses(&mut self) -> Result<(), EncodeError> {
        let b = &mut self.b;
        let f = self.f;
        b.clause((0..self.spec.ewins_black.len()).map(|e| pos(VarDesc::Win(e))))?;
        for (e, edge) in self.spec.ewins_black.iter().enumerate() {
            for &v in edge {
                b.clause([
                    neg(VarDesc::Win(e)),
                    pos(VarDesc::Board(Player::Black, v, f)),
                ])?;
            }
            let mut lits = vec![pos(VarDesc::Win(e))];
            lits.extend(edge.iter().map(|&v| neg(VarDesc::Board(Player::Black, v, f))));
            b.clause(lits)?;
        }
        for edge in &self.spec.ewins_white {
            b.clause(edge.iter().map(|&v| neg(VarDesc::Board(Player::White, v, f))))?;
        }
        Ok(())
    }

    fn emit_cardinality_clauses(
        &mut self,
        firstmoves: Option<&[usize]>,
    ) -> Result<(), EncodeError> {
        for turn in self.turns {
            if turn.claim_count() == 1 {
                self.emit_ladder(turn.time_points[0])?;
            } else {
                self.emit_counter(turn)?;
            }
        }
        if let Some(fm) = firstmoves {
            for v in 1..=self.n {
                if !fm.contains(&v) {
                    self.b.clause([neg(VarDesc::Move(v, 1))])?;
                }
            }
        }
        Ok(())
    }

    /// Exactly-one over the move variables of a single-claim time point.
    /// The chain flips from false to true at the chosen vertex; the top of
    /// the chain is forced while the game runs, so some vertex is chosen.
    fn emit_ladder(&mut self, t: usize) -> Result<(), EncodeError> {
        let b = &mut self.b;
        let n = self.n;
        for i in 1..n {
            b.clause([neg(VarDesc::Ladder(i, t)), pos(VarDesc::Ladder(i + 1, t))])?;
            b.clause([neg(VarDesc::Move(i + 1, t)), neg(VarDesc::Ladder(i, t))])?;
            b.clause([
                pos(VarDesc::Move(i + 1, t)),
                pos(VarDesc::Ladder(i, t)),
                neg(VarDesc::Ladder(i + 1, t)),
            ])?;
        }
        for i in 1..=n {
            b.clause([neg(VarDesc::Move(i, t)), pos(VarDesc::Ladder(i, t))])?;
        }
        b.clause([pos(VarDesc::Move(1, t)), neg(VarDesc::Ladder(1, t))])?;
        b.clause([neg(VarDesc::Time(t)), pos(VarDesc::Ladder(n, t))])?;
        Ok(())
    }

    /// Exactly-k sequential counter over a merged turn's move variables,
    /// ordered sub-move by sub-move. Register `(p, j)` holds iff at least
    /// `j` of the first `p` slots are claimed; overflow is forbidden and
    /// the k-th register is forced at the end while the game runs.
    fn emit_counter(&mut self, turn: &Turn) -> Result<(), EncodeError> {
        let k = turn.claim_count();
        let t_end = *turn.time_points.last().unwrap();
        let n = self.n;
        let slots: Vec<VarDesc> = turn
            .time_points
            .iter()
            .flat_map(|&t| (1..=n).map(move |v| VarDesc::Move(v, t)))
            .collect();
        let reg = |p: usize, j: usize| VarDesc::Counter {
            turn_end: t_end,
            pos: p,
            count: j,
        };
        let b = &mut self.b;
        for (idx, &x) in slots.iter().enumerate() {
            let p = idx + 1;
            b.clause([neg(x), pos(reg(p, 1))])?;
            if p == 1 {
                b.clause([neg(reg(1, 1)), pos(x)])?;
                for j in 2..=k {
                    b.clause([neg(reg(1, j))])?;
                }
            } else {
                for j in 1..=k {
                    b.clause([neg(reg(p - 1, j)), pos(reg(p, j))])?;
                    b.clause([neg(reg(p, j)), pos(reg(p - 1, j)), pos(x)])?;
                    if j >= 2 {
                        b.clause([neg(x), neg(reg(p - 1, j - 1)), pos(reg(p, j))])?;
                        b.clause([neg(reg(p, j)), pos(reg(p - 1, j)), pos(reg(p - 1, j - 1))])?;
                    }
                }
                b.clause([neg(x), neg(reg(p - 1, k))])?;
            }
        }
        b.clause([neg(VarDesc::Time(t_end)), pos(reg(slots.len(), k))])?;
        Ok(())
    }
}
