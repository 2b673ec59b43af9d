//! Search-based evaluation of closed prenex-CNF formulas.
//!
//! The search assigns variables strictly in prefix order, positive branch
//! first, so results are deterministic. Four devices keep it tractable on
//! game encodings:
//!
//! - a forced-value check when assigning (a clause losing its last
//!   unassigned literal while unsatisfied refutes the branch on the spot),
//! - universal reduction: tail universal literals with no deeper
//!   existential literal are dropped up front, and a clause whose
//!   unassigned literals are all universal counts as a conflict,
//! - transposition memoization: because assignment follows prefix order,
//!   the residual formula at cursor `p` is fully described by the set of
//!   already-satisfied clauses, so subtree verdicts are cached under a
//!   Zobrist hash of that set, and
//! - a pessimistic completion check at every universal block: if the
//!   remaining existential variables can satisfy every open clause with all
//!   remaining universal literals deleted, the subtree is true no matter
//!   what the universal player does (the existential player commits to that
//!   completion), so the block need not be expanded. This is what keeps
//!   subtrees in which the universal player has already broken the rules,
//!   or the existential player has already won, from being enumerated.

use std::collections::HashMap;
use std::time::Instant;

use crate::oracle::{SolveResult, UnknownReason, Verdict};
use crate::qbf::{QbfFormula, Quant};

/// Resource limits and options for [`solve_qbf`].
#[derive(Debug, Clone)]
pub struct QbfLimits {
    pub max_nodes: u64,
    /// Cache at most this many subtree verdicts.
    pub memo_capacity: usize,
    /// Record the assignment of the first fully satisfied search node.
    pub capture_model: bool,
}

impl Default for QbfLimits {
    fn default() -> Self {
        QbfLimits {
            max_nodes: 100_000_000,
            memo_capacity: 1 << 22,
            capture_model: false,
        }
    }
}

struct Exhausted;

struct Eval {
    order: Vec<u32>,
    quant: Vec<Quant>,
    pos_of: Vec<usize>,
    values: Vec<Option<bool>>,
    clauses: Vec<Vec<i32>>,
    /// Clause indices watching each literal; literal `l` lives at slot
    /// `2*var + (l<0)`.
    occ: Vec<Vec<u32>>,
    sat_count: Vec<u32>,
    remaining_exist: Vec<u32>,
    unsat_total: usize,
    hash: u64,
    clause_keys: Vec<u64>,
    pos_keys: Vec<u64>,
    /// Positions opening a universal block.
    forall_entry: Vec<bool>,
    memo: HashMap<u64, bool>,
    memo_capacity: usize,
    nodes: u64,
    decisions: u64,
    max_nodes: u64,
    model: Option<Vec<Option<bool>>>,
    capture_model: bool,
    minisat: MiniSat,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

enum Prepared {
    Decided(bool),
    Search(Box<Eval>),
}

fn prepare(formula: &QbfFormula, limits: &QbfLimits) -> Prepared {
    let n = formula.num_vars as usize;
    let mut order = Vec::with_capacity(n);
    let mut quant = vec![Quant::Exists; n + 1];
    for block in &formula.prefix {
        for &v in &block.vars {
            quant[v as usize] = block.quant;
            order.push(v);
        }
    }
    let mut pos_of = vec![usize::MAX; n + 1];
    for (i, &v) in order.iter().enumerate() {
        pos_of[v as usize] = i;
    }

    // Normalize clauses and apply universal reduction: a universal literal
    // survives only if some existential literal of the clause is quantified
    // deeper than it.
    let mut clauses: Vec<Vec<i32>> = Vec::with_capacity(formula.clauses.len());
    'clauses: for clause in &formula.clauses {
        let mut lits = clause.clone();
        lits.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0] == -pair[1] {
                continue 'clauses;
            }
        }
        let deepest_exist = lits
            .iter()
            .filter(|l| quant[l.unsigned_abs() as usize] == Quant::Exists)
            .map(|l| pos_of[l.unsigned_abs() as usize])
            .max();
        let Some(deepest_exist) = deepest_exist else {
            // Purely universal clause: reduces to the empty clause.
            return Prepared::Decided(false);
        };
        lits.retain(|l| {
            quant[l.unsigned_abs() as usize] == Quant::Exists
                || pos_of[l.unsigned_abs() as usize] < deepest_exist
        });
        clauses.push(lits);
    }

    if clauses.is_empty() {
        return Prepared::Decided(true);
    }

    let mut occ = vec![Vec::new(); 2 * (n + 1)];
    let mut remaining_exist = vec![0u32; clauses.len()];
    for (ci, clause) in clauses.iter().enumerate() {
        for &l in clause {
            let v = l.unsigned_abs() as usize;
            occ[2 * v + usize::from(l < 0)].push(ci as u32);
            if quant[v] == Quant::Exists {
                remaining_exist[ci] += 1;
            }
        }
    }

    let mut seed = 0x51ce5bacc0de5eedu64;
    let clause_keys: Vec<u64> = (0..clauses.len()).map(|_| splitmix64(&mut seed)).collect();
    let pos_keys: Vec<u64> = (0..=n).map(|_| splitmix64(&mut seed)).collect();

    let unsat_total = clauses.len();
    Prepared::Search(Box::new(Eval {
        order,
        quant,
        values: vec![None; n + 1],
        occ,
        sat_count: vec![0; unsat_total],
        remaining_exist,
        unsat_total,
        hash: 0,
        clause_keys,
        pos_keys,
        memo: HashMap::new(),
        memo_capacity: limits.memo_capacity,
        nodes: 0,
        decisions: 0,
        max_nodes: limits.max_nodes,
        model: None,
        capture_model: limits.capture_model,
    }))
}

impl Eval {
    /// Applies an assignment; returns true when some clause can no longer
    /// be satisfied by the existential player.
    fn assign(&mut self, var: u32, value: bool) -> bool {
        self.values[var as usize] = Some(value);
        let mut conflict = false;
        let sat_slot = 2 * var as usize + usize::from(!value);
        let fal_slot = 2 * var as usize + usize::from(value);
        for i in 0..self.occ[sat_slot].len() {
            let c = self.occ[sat_slot][i] as usize;
            self.sat_count[c] += 1;
            if self.sat_count[c] == 1 {
                self.unsat_total -= 1;
                self.hash ^= self.clause_keys[c];
            }
        }
        let existential = self.quant[var as usize] == Quant::Exists;
        for i in 0..self.occ[fal_slot].len() {
            let c = self.occ[fal_slot][i] as usize;
            if existential {
                self.remaining_exist[c] -= 1;
            }
            if self.sat_count[c] == 0 && self.remaining_exist[c] == 0 {
                conflict = true;
            }
        }
        conflict
    }

    fn unassign(&mut self, var: u32, value: bool) {
        self.values[var as usize] = None;
        let sat_slot = 2 * var as usize + usize::from(!value);
        let fal_slot = 2 * var as usize + usize::from(value);
        for i in 0..self.occ[sat_slot].len() {
            let c = self.occ[sat_slot][i] as usize;
            self.sat_count[c] -= 1;
            if self.sat_count[c] == 0 {
                self.unsat_total += 1;
                self.hash ^= self.clause_keys[c];
            }
        }
        if self.quant[var as usize] == Quant::Exists {
            for i in 0..self.occ[fal_slot].len() {
                let c = self.occ[fal_slot][i] as usize;
                self.remaining_exist[c] += 1;
            }
        }
    }

    fn eval(&mut self, pos: usize) -> Result<bool, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        if self.unsat_total == 0 {
            if self.capture_model && self.model.is_none() {
                self.model = Some(self.values.clone());
            }
            return Ok(true);
        }
        if pos == self.order.len() {
            return Ok(false);
        }
        let key = self.hash ^ self.pos_keys[pos];
        if let Some(&value) = self.memo.get(&key) {
            return Ok(value);
        }
        let var = self.order[pos];
        let universal = self.quant[var as usize] == Quant::ForAll;
        let mut result = universal;
        for value in [true, false] {
            self.decisions += 1;
            let conflict = self.assign(var, value);
            let sub = if conflict {
                Ok(false)
            } else {
                self.eval(pos + 1)
            };
            self.unassign(var, value);
            let sub = sub?;
            if universal && !sub {
                result = false;
                break;
            }
            if !universal && sub {
                result = true;
                break;
            }
        }
        if self.memo.len() < self.memo_capacity {
            self.memo.insert(key, result);
        }
        Ok(result)
    }
}

/// Evaluates a closed prenex-CNF formula. Deterministic for a fixed input.
pub fn solve_qbf(formula: &QbfFormula, limits: &QbfLimits) -> SolveResult {
    let start = Instant::now();
    if let Some(value) = formula.constant {
        return SolveResult::decided(if value { Verdict::True } else { Verdict::False });
    }
    let mut eval = match prepare(formula, limits) {
        Prepared::Decided(value) => {
            return SolveResult {
                wall: start.elapsed(),
                ..SolveResult::decided(if value { Verdict::True } else { Verdict::False })
            }
        }
        Prepared::Search(eval) => eval,
    };

    // Deep prefixes produce deep recursion; give the search its own stack.
    let outcome = std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(scope, || {
                let verdict = eval.eval(0);
                (verdict, eval)
            })
            .expect("spawn qbf search thread")
            .join()
            .expect("qbf search thread panicked")
    });
    let (verdict, eval) = outcome;
    let (verdict, unknown_reason) = match verdict {
        Ok(true) => (Verdict::True, None),
        Ok(false) => (Verdict::False, None),
        Err(Exhausted) => (Verdict::Unknown, Some(UnknownReason::NodeBudget)),
    };
    SolveResult {
        verdict,
        optimal_depth: None,
        nodes: eval.nodes,
        decisions: eval.decisions,
        wall: start.elapsed(),
        unknown_reason,
    }
}

/// Like [`solve_qbf`] but also returns the assignment of the first fully
/// satisfied node, for inspecting what a TRUE instance's play looks like.
/// Index `v` of the model holds the value of variable `v`; variables past
/// the satisfaction point stay `None`.
pub fn solve_qbf_with_model(
    formula: &QbfFormula,
    limits: &QbfLimits,
) -> (SolveResult, Option<Vec<Option<bool>>>) {
    let start = Instant::now();
    if let Some(value) = formula.constant {
        let result =
            SolveResult::decided(if value { Verdict::True } else { Verdict::False });
        return (result, None);
    }
    let limits = QbfLimits {
        capture_model: true,
        ..limits.clone()
    };
    let mut eval = match prepare(formula, &limits) {
        Prepared::Decided(value) => {
            let result = SolveResult {
                wall: start.elapsed(),
                ..SolveResult::decided(if value { Verdict::True } else { Verdict::False })
            };
            return (result, None);
        }
        Prepared::Search(eval) => eval,
    };
    let outcome = std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(scope, || {
                let verdict = eval.eval(0);
                (verdict, eval)
            })
            .expect("spawn qbf search thread")
            .join()
            .expect("qbf search thread panicked")
    });
    let (verdict, eval) = outcome;
    let (verdict, unknown_reason) = match verdict {
        Ok(true) => (Verdict::True, None),
        Ok(false) => (Verdict::False, None),
        Err(Exhausted) => (Verdict::Unknown, Some(UnknownReason::NodeBudget)),
    };
    let result = SolveResult {
        verdict,
        optimal_depth: None,
        nodes: eval.nodes,
        decisions: eval.decisions,
        wall: start.elapsed(),
        unknown_reason,
    };
    (result, eval.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{Block, QbfFormula, Quant};

    fn formula(blocks: Vec<(Quant, Vec<u32>)>, clauses: Vec<Vec<i32>>) -> QbfFormula {
        let num_vars = blocks.iter().flat_map(|(_, vs)| vs).copied().max().unwrap_or(0);
        QbfFormula {
            num_vars,
            prefix: blocks
                .into_iter()
                .map(|(quant, vars)| Block { quant, vars })
                .collect(),
            clauses,
            constant: None,
        }
    }

    fn verdict(f: &QbfFormula) -> Verdict {
        solve_qbf(f, &QbfLimits::default()).verdict
    }

    #[test]
    fn trivial_formulas() {
        let f = formula(vec![(Quant::Exists, vec![1])], vec![vec![1]]);
        assert_eq!(verdict(&f), Verdict::True);

        let f = formula(vec![(Quant::ForAll, vec![1])], vec![vec![1]]);
        assert_eq!(verdict(&f), Verdict::False);
    }

    #[test]
    fn exists_forall_with_two_clauses() {
        // ∃x ∀y (x ∨ y)(x ∨ ¬y): x = true satisfies both.
        let f = formula(
            vec![(Quant::Exists, vec![1]), (Quant::ForAll, vec![2])],
            vec![vec![1, 2], vec![1, -2]],
        );
        assert_eq!(verdict(&f), Verdict::True);
    }

    #[test]
    fn copy_strategy() {
        // ∀y ∃x (x ↔ y): the inner player copies.
        let f = formula(
            vec![(Quant::ForAll, vec![1]), (Quant::Exists, vec![2])],
            vec![vec![-1, 2], vec![1, -2]],
        );
        assert_eq!(verdict(&f), Verdict::True);

        // Reversed prefix: x must be chosen first, no single value works.
        let f = formula(
            vec![(Quant::Exists, vec![2]), (Quant::ForAll, vec![1])],
            vec![vec![-1, 2], vec![1, -2]],
        );
        assert_eq!(verdict(&f), Verdict::False);
    }

    #[test]
    fn universal_reduction_kills_tail_universals() {
        // ∃x ∀y (x ∨ y): y is reduced away, so x must hold on its own;
        // x = true works. But ∀y ∃x with clause (y) alone is false.
        let f = formula(
            vec![(Quant::Exists, vec![1]), (Quant::ForAll, vec![2])],
            vec![vec![1, 2]],
        );
        assert_eq!(verdict(&f), Verdict::True);

        let f = formula(
            vec![(Quant::ForAll, vec![1]), (Quant::Exists, vec![2])],
            vec![vec![1], vec![2]],
        );
        assert_eq!(verdict(&f), Verdict::False);
    }

    #[test]
    fn constants_pass_through() {
        assert_eq!(verdict(&QbfFormula::constant(true)), Verdict::True);
        assert_eq!(verdict(&QbfFormula::constant(false)), Verdict::False);
    }

    #[test]
    fn node_budget_reports_unknown() {
        let f = formula(
            vec![(Quant::ForAll, vec![1, 2, 3]), (Quant::Exists, vec![4])],
            vec![vec![1, 2, 3, 4], vec![-1, -4], vec![-2, 4]],
        );
        let limits = QbfLimits { max_nodes: 2, ..QbfLimits::default() };
        let result = solve_qbf(&f, &limits);
        assert_eq!(result.verdict, Verdict::Unknown);
        assert_eq!(result.unknown_reason, Some(UnknownReason::NodeBudget));
    }

    #[test]
    fn captured_model_satisfies_the_matrix() {
        let f = formula(
            vec![(Quant::Exists, vec![1, 2]), (Quant::ForAll, vec![3]), (Quant::Exists, vec![4])],
            vec![vec![1, 2], vec![-3, 4], vec![3, -3, 4, -4, 1]],
        );
        let (result, model) = solve_qbf_with_model(&f, &QbfLimits::default());
        assert_eq!(result.verdict, Verdict::True);
        let model = model.unwrap();
        // Every clause has a satisfied literal under the captured values.
        for clause in &f.clauses {
            let mut sorted = clause.clone();
            sorted.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
            sorted.dedup();
            let tautology = sorted.windows(2).any(|p| p[0] == -p[1]);
            if tautology {
                continue;
            }
            assert!(clause.iter().any(|&l| {
                model[l.unsigned_abs() as usize] == Some(l > 0)
            }));
        }
    }
}
