//! Prenex-CNF formulas over integer variables, plus the bookkeeping that
//! ties variables back to their game meaning.
//!
//! Encoders allocate variables through a [`FormulaBuilder`], which keeps the
//! descriptor table injective, places variables into quantifier blocks in
//! prefix order, and folds fixed boundary descriptors away so that no
//! variable is ever created for them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::game::{Player, VertexId};

/// Semantic identity of a variable: a kind tag plus integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarDesc {
    /// The game is still running at time point `t`.
    Time(usize),
    /// `player` owns `vertex` at time point `t`.
    Board(Player, VertexId, usize),
    /// `vertex` is occupied at time point `t`.
    Occupied(VertexId, usize),
    /// `vertex` is claimed at time point `t`.
    Move(VertexId, usize),
    /// Bit `i` of White's logarithmic move choice at time point `t`.
    MoveBit(u32, usize),
    /// Ladder chain position `i` at time point `t`.
    Ladder(usize, usize),
    /// Winning configuration `edge` is fully claimed by Black.
    Win(usize),
    /// Sequential-counter register: at least `count` claims among the first
    /// `pos` move slots of the turn ending at time point `turn_end`.
    Counter {
        turn_end: usize,
        pos: usize,
        count: usize,
    },
    /// Black owns `vertex` in the final position.
    FinalBlack(VertexId),
    /// White owns `vertex` in the final position.
    FinalWhite(VertexId),
    /// Black has reached a winning configuration.
    WinFlag,
    /// White has reached a winning configuration.
    Lose,
    /// White broke the rules somewhere.
    Cheat,
    /// White claimed one vertex too many in `round` (`tuple` indexes the
    /// ordered tuple enumeration of that round).
    Excess { round: usize, tuple: usize },
    /// White claimed an already claimed vertex in `round`.
    Stack { round: usize, vertex: VertexId },
}

impl fmt::Display for VarDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |player: Player| match player {
            Player::Black => "B",
            Player::White => "W",
        };
        match *self {
            VarDesc::Time(t) => write!(f, "time({t})"),
            VarDesc::Board(a, v, t) => write!(f, "board({},{v},{t})", p(a)),
            VarDesc::Occupied(v, t) => write!(f, "occupied({v},{t})"),
            VarDesc::Move(v, t) => write!(f, "move({v},{t})"),
            VarDesc::MoveBit(i, t) => write!(f, "moveL({i},{t})"),
            VarDesc::Ladder(i, t) => write!(f, "ladder({i},{t})"),
            VarDesc::Win(e) => write!(f, "win(e{e})"),
            VarDesc::Counter { turn_end, pos, count } => {
                write!(f, "counter({pos},{count},{turn_end})")
            }
            VarDesc::FinalBlack(v) => write!(f, "finalB({v})"),
            VarDesc::FinalWhite(v) => write!(f, "finalW({v})"),
            VarDesc::WinFlag => write!(f, "win"),
            VarDesc::Lose => write!(f, "lose"),
            VarDesc::Cheat => write!(f, "cheat"),
            VarDesc::Excess { round, tuple } => write!(f, "excess({round},#{tuple})"),
            VarDesc::Stack { round, vertex } => write!(f, "stack({round},{vertex})"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("descriptor {0} already has a variable")]
    DuplicateDescriptor(String),
    #[error("descriptor {0} is fixed by folding and cannot be allocated")]
    FixedDescriptor(String),
    #[error("descriptor {0} was never allocated")]
    UnknownDescriptor(String),
    #[error("variable {0} appears in {1} prefix blocks")]
    BadQuantification(u32, usize),
    #[error("literal {0} references a variable outside the prefix")]
    UnquantifiedLiteral(i32),
    #[error("empty quantifier block")]
    EmptyBlock,
    #[error("clause contains complementary or duplicate literals")]
    BadClause,
}

/// Injective two-way association between descriptors and variable ids.
/// Ids are contiguous from 1 in allocation order.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    ids: HashMap<VarDesc, u32>,
    descs: Vec<VarDesc>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, desc: VarDesc) -> Result<u32, QbfError> {
        if self.ids.contains_key(&desc) {
            return Err(QbfError::DuplicateDescriptor(desc.to_string()));
        }
        self.descs.push(desc);
        let id = self.descs.len() as u32;
        self.ids.insert(desc, id);
        Ok(id)
    }

    pub fn id(&self, desc: VarDesc) -> Option<u32> {
        self.ids.get(&desc).copied()
    }

    pub fn desc(&self, id: u32) -> Option<VarDesc> {
        self.descs.get(id as usize - 1).copied()
    }

    pub fn len(&self) -> usize {
        self.descs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, VarDesc)> + '_ {
        self.descs.iter().enumerate().map(|(i, &d)| (i as u32 + 1, d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quant {
    Exists,
    ForAll,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub quant: Quant,
    pub vars: Vec<u32>,
}

/// A closed prenex-CNF formula. `constant` short-circuits trivially decided
/// formulas; when set, prefix and clauses are empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QbfFormula {
    pub num_vars: u32,
    pub prefix: Vec<Block>,
    pub clauses: Vec<Vec<i32>>,
    pub constant: Option<bool>,
}

impl QbfFormula {
    pub fn constant(value: bool) -> Self {
        QbfFormula {
            constant: Some(value),
            ..Default::default()
        }
    }

    /// Adds a clause after simplification: duplicate literals collapse,
    /// tautologies are dropped, and an empty clause marks the whole formula
    /// false.
    pub fn add_clause(&mut self, mut lits: Vec<i32>) {
        if self.constant == Some(false) {
            return;
        }
        lits.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0] == -pair[1] {
                return; // tautology
            }
        }
        if lits.is_empty() {
            self.constant = Some(false);
            self.prefix.clear();
            self.clauses.clear();
            self.num_vars = 0;
            return;
        }
        self.clauses.push(lits);
    }

    /// Prefix with adjacent same-quantifier blocks merged and empty blocks
    /// dropped; this is the shape serialized to QDIMACS.
    pub fn merged_prefix(&self) -> Vec<Block> {
        let mut merged: Vec<Block> = Vec::new();
        for block in &self.prefix {
            if block.vars.is_empty() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.quant == block.quant => {
                    last.vars.extend_from_slice(&block.vars)
                }
                _ => merged.push(block.clone()),
            }
        }
        merged
    }

    /// Checks closedness and clause well-formedness by scanning.
    pub fn validate(&self) -> Result<(), QbfError> {
        if self.constant.is_some() {
            return Ok(());
        }
        let mut seen = vec![0usize; self.num_vars as usize + 1];
        for block in &self.prefix {
            if block.vars.is_empty() {
                return Err(QbfError::EmptyBlock);
            }
            for &v in &block.vars {
                if v == 0 || v > self.num_vars {
                    return Err(QbfError::UnquantifiedLiteral(v as i32));
                }
                seen[v as usize] += 1;
            }
        }
        for (v, &count) in seen.iter().enumerate().skip(1) {
            if count != 1 {
                return Err(QbfError::BadQuantification(v as u32, count));
            }
        }
        for clause in &self.clauses {
            let mut sorted = clause.clone();
            sorted.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
            for pair in sorted.windows(2) {
                if pair[0] == pair[1] || pair[0] == -pair[1] {
                    return Err(QbfError::BadClause);
                }
            }
            for &l in clause {
                let v = l.unsigned_abs();
                if v == 0 || v > self.num_vars {
                    return Err(QbfError::UnquantifiedLiteral(l));
                }
            }
        }
        Ok(())
    }
}

/// A descriptor-level literal before folding resolves it.
#[derive(Debug, Clone, Copy)]
pub struct DLit(pub VarDesc, pub bool);

pub fn pos(d: VarDesc) -> DLit {
    DLit(d, true)
}

pub fn neg(d: VarDesc) -> DLit {
    DLit(d, false)
}

/// Builds a formula in prefix order while folding fixed descriptors.
#[derive(Debug, Default)]
pub struct FormulaBuilder {
    table: VarTable,
    fixed: HashMap<VarDesc, bool>,
    formula: QbfFormula,
}

impl FormulaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Substitutes a constant for a descriptor. No variable will ever be
    /// allocated for it; emitted clauses simplify against the value.
    pub fn fix(&mut self, desc: VarDesc, value: bool) -> Result<(), QbfError> {
        if self.table.id(desc).is_some() {
            return Err(QbfError::DuplicateDescriptor(desc.to_string()));
        }
        self.fixed.insert(desc, value);
        Ok(())
    }

    pub fn begin_block(&mut self, quant: Quant) {
        self.formula.prefix.push(Block {
            quant,
            vars: Vec::new(),
        });
    }

    /// Allocates a variable for `desc` inside the current block.
    pub fn var(&mut self, desc: VarDesc) -> Result<u32, QbfError> {
        if self.fixed.contains_key(&desc) {
            return Err(QbfError::FixedDescriptor(desc.to_string()));
        }
        let id = self.table.fresh(desc)?;
        self.formula
            .prefix
            .last_mut()
            .expect("begin_block before var")
            .vars
            .push(id);
        self.formula.num_vars = id;
        Ok(id)
    }

    /// Signed literal for an already-allocated descriptor, or its folded
    /// constant value.
    pub fn lit(&self, DLit(desc, positive): DLit) -> Result<Result<i32, bool>, QbfError> {
        if let Some(&value) = self.fixed.get(&desc) {
            return Ok(Err(value == positive));
        }
        match self.table.id(desc) {
            Some(id) => Ok(Ok(if positive { id as i32 } else { -(id as i32) })),
            None => Err(QbfError::UnknownDescriptor(desc.to_string())),
        }
    }

    /// Emits a clause. Literals satisfied by folding drop the clause;
    /// falsified literals vanish; an all-falsified clause marks the formula
    /// constant false.
    pub fn clause(&mut self, lits: impl IntoIterator<Item = DLit>) -> Result<(), QbfError> {
        let mut out: Vec<i32> = Vec::new();
        for dlit in lits {
            match self.lit(dlit)? {
                Ok(l) => out.push(l),
                Err(true) => return Ok(()),
                Err(false) => {}
            }
        }
        self.formula.add_clause(out);
        Ok(())
    }

    pub fn is_false(&self) -> bool {
        self.formula.constant == Some(false)
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn finish(self) -> Result<(QbfFormula, VarTable), QbfError> {
        self.formula.validate()?;
        Ok((self.formula, self.table))
    }
}

/// Size summary of a formula, with block counts taken after merging
/// adjacent same-quantifier blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaStats {
    pub quantifier_blocks: usize,
    pub universals: usize,
    pub existentials: usize,
    pub clauses: usize,
    pub literals: usize,
    pub clause_len_histogram: BTreeMap<usize, usize>,
}

pub fn stats(formula: &QbfFormula) -> FormulaStats {
    if let Some(value) = formula.constant {
        // Counts of the canonical one-variable stub this serializes to.
        let clauses = if value { 1 } else { 2 };
        return FormulaStats {
            quantifier_blocks: 1,
            universals: 0,
            existentials: 1,
            clauses,
            literals: clauses,
            clause_len_histogram: [(1, clauses)].into_iter().collect(),
        };
    }
    let merged = formula.merged_prefix();
    let mut universals = 0;
    let mut existentials = 0;
    for block in &merged {
        match block.quant {
            Quant::ForAll => universals += block.vars.len(),
            Quant::Exists => existentials += block.vars.len(),
        }
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut literals = 0;
    for clause in &formula.clauses {
        literals += clause.len();
        *histogram.entry(clause.len()).or_default() += 1;
    }
    FormulaStats {
        quantifier_blocks: merged.len(),
        universals,
        existentials,
        clauses: formula.clauses.len(),
        literals,
        clause_len_histogram: histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_vars_are_contiguous() {
        let mut table = VarTable::new();
        assert_eq!(table.fresh(VarDesc::Time(1)).unwrap(), 1);
        assert_eq!(table.fresh(VarDesc::Time(2)).unwrap(), 2);
        assert_eq!(table.id(VarDesc::Time(1)), Some(1));
        assert_eq!(table.desc(2), Some(VarDesc::Time(2)));
        assert!(matches!(
            table.fresh(VarDesc::Time(1)),
            Err(QbfError::DuplicateDescriptor(_))
        ));
    }

    #[test]
    fn add_clause_simplifies() {
        let mut f = QbfFormula {
            num_vars: 2,
            prefix: vec![Block {
                quant: Quant::Exists,
                vars: vec![1, 2],
            }],
            clauses: vec![],
            constant: None,
        };
        f.add_clause(vec![1, -2, 1]);
        assert_eq!(f.clauses, vec![vec![1, -2]]);
        f.add_clause(vec![1, -1]);
        assert_eq!(f.clauses.len(), 1);
        f.add_clause(vec![]);
        assert_eq!(f.constant, Some(false));
    }

    #[test]
    fn folding_examples() {
        let mut b = FormulaBuilder::new();
        b.fix(VarDesc::Time(0), true).unwrap();
        b.fix(VarDesc::Board(Player::Black, 1, 0), false).unwrap();
        b.begin_block(Quant::Exists);
        b.var(VarDesc::Time(1)).unwrap();
        b.var(VarDesc::Board(Player::Black, 1, 1)).unwrap();

        // Satisfied by substitution: dropped.
        b.clause([neg(VarDesc::Time(1)), pos(VarDesc::Time(0))]).unwrap();
        // Satisfied by a negated false boundary literal: dropped.
        b.clause([
            neg(VarDesc::Board(Player::Black, 1, 0)),
            pos(VarDesc::Board(Player::Black, 1, 1)),
        ])
        .unwrap();
        // False literal removed, remainder kept.
        b.clause([
            pos(VarDesc::Time(1)),
            pos(VarDesc::Board(Player::Black, 1, 0)),
            neg(VarDesc::Board(Player::Black, 1, 1)),
        ])
        .unwrap();

        let (f, _) = b.finish().unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2]]);
    }

    #[test]
    fn fixed_descriptors_cannot_be_allocated() {
        let mut b = FormulaBuilder::new();
        b.fix(VarDesc::Occupied(1, 0), false).unwrap();
        b.begin_block(Quant::Exists);
        assert!(matches!(
            b.var(VarDesc::Occupied(1, 0)),
            Err(QbfError::FixedDescriptor(_))
        ));
    }

    #[test]
    fn stats_counts_merged_blocks() {
        let f = QbfFormula {
            num_vars: 2,
            prefix: vec![
                Block { quant: Quant::Exists, vars: vec![1] },
                Block { quant: Quant::ForAll, vars: vec![2] },
            ],
            clauses: vec![vec![1, -2]],
            constant: None,
        };
        let s = stats(&f);
        assert_eq!(s.quantifier_blocks, 2);
        assert_eq!(s.universals, 1);
        assert_eq!(s.existentials, 1);
        assert_eq!(s.clauses, 1);
        assert_eq!(s.literals, 2);

        // Adjacent existential blocks merge for counting.
        let f = QbfFormula {
            num_vars: 2,
            prefix: vec![
                Block { quant: Quant::Exists, vars: vec![1] },
                Block { quant: Quant::Exists, vars: vec![2] },
            ],
            clauses: vec![vec![1, 2]],
            constant: None,
        };
        assert_eq!(stats(&f).quantifier_blocks, 1);

        let s = stats(&QbfFormula::constant(true));
        assert_eq!((s.quantifier_blocks, s.existentials, s.clauses), (1, 1, 1));
    }

    #[test]
    fn validate_scans_for_defects() {
        let f = QbfFormula {
            num_vars: 2,
            prefix: vec![Block { quant: Quant::Exists, vars: vec![1] }],
            clauses: vec![vec![1, -2]],
            constant: None,
        };
        assert!(matches!(f.validate(), Err(QbfError::BadQuantification(2, 0))));

        let f = QbfFormula {
            num_vars: 1,
            prefix: vec![
                Block { quant: Quant::Exists, vars: vec![1] },
                Block { quant: Quant::ForAll, vars: vec![] },
            ],
            clauses: vec![],
            constant: None,
        };
        assert!(matches!(f.validate(), Err(QbfError::EmptyBlock)));
    }
}
