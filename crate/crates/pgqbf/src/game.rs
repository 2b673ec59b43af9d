//! Positional-game descriptions and the transformations applied to them
//! before encoding.
//!
//! A game is a hypergraph over named vertices together with a timeline of
//! individual move time points. Vertices are identified by their 1-based
//! position in the declaration order, which also fixes the total order used
//! wherever ordered vertex tuples are enumerated.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Black,
    White,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Black => Player::White,
            Player::White => Player::Black,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Black => write!(f, "black"),
            Player::White => write!(f, "white"),
        }
    }
}

/// 1-based vertex index into [`GameSpec::vertices`].
pub type VertexId = usize;

/// A winning configuration: a set of vertex ids, kept sorted.
pub type Hyperedge = Vec<VertexId>;

/// A single move slot in the game timeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimePoint {
    pub label: String,
    pub player: Player,
}

/// A positional game: vertices, a timeline of individual moves, winning
/// configurations for both players, optional pre-placed stones and an
/// optional restriction on Black's first move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub version: String,
    pub vertices: Vec<String>,
    pub timeline: Vec<TimePoint>,
    pub ewins_black: Vec<Hyperedge>,
    pub ewins_white: Vec<Hyperedge>,
    pub black_initials: BTreeSet<VertexId>,
    pub white_initials: BTreeSet<VertexId>,
    pub firstmoves: Option<BTreeSet<VertexId>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("game has no vertices")]
    NoVertices,
    #[error("vertex name {0:?} is not alphanumeric")]
    BadVertexName(String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("time label {0:?} is not alphanumeric")]
    BadTimeLabel(String),
    #[error("duplicate time label {0:?}")]
    DuplicateTimeLabel(String),
    #[error("empty hyperedge in {0} winning sets")]
    EmptyHyperedge(Player),
    #[error("hyperedge vertex id {0} out of range 1..={1}")]
    EdgeOutOfRange(VertexId, usize),
    #[error("initial vertex id {0} out of range 1..={1}")]
    InitialOutOfRange(VertexId, usize),
    #[error("vertex id {0} appears in both players' initial stones")]
    OverlappingInitials(VertexId),
    #[error("firstmoves vertex id {0} out of range 1..={1}")]
    FirstmovesOutOfRange(VertexId, usize),
    #[error("firstmoves set is empty")]
    EmptyFirstmoves,
}

impl GameSpec {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Number of time points.
    pub fn depth(&self) -> usize {
        self.timeline.len()
    }

    pub fn edges(&self, player: Player) -> &[Hyperedge] {
        match player {
            Player::Black => &self.ewins_black,
            Player::White => &self.ewins_white,
        }
    }

    pub fn initials(&self, player: Player) -> &BTreeSet<VertexId> {
        match player {
            Player::Black => &self.black_initials,
            Player::White => &self.white_initials,
        }
    }

    /// Sorts every hyperedge, removes duplicate vertices inside an edge and
    /// drops repeated edges, reporting each drop as a warning.
    pub fn normalize(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        for player in [Player::Black, Player::White] {
            let edges = match player {
                Player::Black => &mut self.ewins_black,
                Player::White => &mut self.ewins_white,
            };
            let mut seen: BTreeSet<Hyperedge> = BTreeSet::new();
            let mut kept = Vec::with_capacity(edges.len());
            for edge in edges.drain(..) {
                let mut edge: Hyperedge = edge;
                edge.sort_unstable();
                edge.dedup();
                if seen.contains(&edge) {
                    warnings.push(format!(
                        "duplicate {player} winning set {edge:?} dropped"
                    ));
                } else {
                    seen.insert(edge.clone());
                    kept.push(edge);
                }
            }
            *edges = kept;
        }
        warnings
    }

    /// Checks every structural invariant. Returns non-fatal observations
    /// (unknown version, duplicated hyperedges) as warnings.
    pub fn validate(&self) -> Result<Vec<String>, GameError> {
        let mut warnings = Vec::new();
        let n = self.n();
        if n == 0 {
            return Err(GameError::NoVertices);
        }
        let mut names = BTreeSet::new();
        for name in &self.vertices {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(GameError::BadVertexName(name.clone()));
            }
            if !names.insert(name) {
                return Err(GameError::DuplicateVertex(name.clone()));
            }
        }
        let mut labels = BTreeSet::new();
        for tp in &self.timeline {
            if tp.label.is_empty() || !tp.label.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(GameError::BadTimeLabel(tp.label.clone()));
            }
            if !labels.insert(&tp.label) {
                return Err(GameError::DuplicateTimeLabel(tp.label.clone()));
            }
        }
        for player in [Player::Black, Player::White] {
            let mut seen: BTreeSet<Hyperedge> = BTreeSet::new();
            for edge in self.edges(player) {
                if edge.is_empty() {
                    return Err(GameError::EmptyHyperedge(player));
                }
                for &v in edge {
                    if v == 0 || v > n {
                        return Err(GameError::EdgeOutOfRange(v, n));
                    }
                }
                let mut sorted = edge.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if !seen.insert(sorted) {
                    warnings.push(format!("duplicate {player} winning set {edge:?}"));
                }
            }
        }
        for (player, set) in [
            (Player::Black, &self.black_initials),
            (Player::White, &self.white_initials),
        ] {
            for &v in set {
                if v == 0 || v > n {
                    return Err(GameError::InitialOutOfRange(v, n));
                }
            }
            let _ = player;
        }
        if let Some(&v) = self.black_initials.intersection(&self.white_initials).next() {
            return Err(GameError::OverlappingInitials(v));
        }
        if let Some(fm) = &self.firstmoves {
            if fm.is_empty() {
                return Err(GameError::EmptyFirstmoves);
            }
            for &v in fm {
                if v == 0 || v > n {
                    return Err(GameError::FirstmovesOutOfRange(v, n));
                }
            }
        }
        if self.version != "1.0" {
            warnings.push(format!("unknown format version {:?}", self.version));
        }
        Ok(warnings)
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(|i| i + 1)
    }
}

/// A maximal run of same-player time points, treated as one turn in which
/// the player claims `len` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Turn {
    pub player: Player,
    /// 1-based indices into the timeline, consecutive and increasing.
    pub time_points: Vec<usize>,
}

impl Turn {
    pub fn claim_count(&self) -> usize {
        self.time_points.len()
    }
}

/// The timeline grouped into alternating turns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnStructure {
    pub turns: Vec<Turn>,
}

impl TurnStructure {
    /// The turn containing time point `t` (1-based), if any.
    pub fn turn_of(&self, t: usize) -> Option<&Turn> {
        self.turns.iter().find(|turn| turn.time_points.contains(&t))
    }
}

/// Groups maximal runs of same-player time points into turns.
pub fn merge_consecutive_turns(spec: &GameSpec) -> TurnStructure {
    let mut turns: Vec<Turn> = Vec::new();
    for (i, tp) in spec.timeline.iter().enumerate() {
        match turns.last_mut() {
            Some(turn) if turn.player == tp.player => turn.time_points.push(i + 1),
            _ => turns.push(Turn {
                player: tp.player,
                time_points: vec![i + 1],
            }),
        }
    }
    TurnStructure { turns }
}

/// Result of removing pre-placed stones from a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialOutcome {
    None,
    BlackAlreadyWon,
    WhiteAlreadyWon,
}

/// A game with its initial stones folded into the hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGame {
    pub game: GameSpec,
    pub trivial_outcome: TrivialOutcome,
    pub warnings: Vec<String>,
}

/// Folds each player's initial stones into the hypergraph: an initial vertex
/// of player `a` is deleted from all of `a`'s winning sets, and every winning
/// set of the opponent containing it is dropped entirely. Stones then leave
/// the vertex list; the timeline is kept as is.
///
/// A winning set whose vertices are all pre-placed for its owner means that
/// player has already won; Black's sets are checked first.
pub fn reduce_initials(spec: &GameSpec) -> ReducedGame {
    let mut warnings = Vec::new();
    let removed: BTreeSet<VertexId> = spec
        .black_initials
        .union(&spec.white_initials)
        .copied()
        .collect();

    let mut outcome = TrivialOutcome::None;
    for edge in &spec.ewins_black {
        if edge.iter().all(|v| spec.black_initials.contains(v)) {
            outcome = TrivialOutcome::BlackAlreadyWon;
        }
    }
    if outcome == TrivialOutcome::None {
        for edge in &spec.ewins_white {
            if edge.iter().all(|v| spec.white_initials.contains(v)) {
                outcome = TrivialOutcome::WhiteAlreadyWon;
            }
        }
    }

    // Remap surviving vertices onto fresh contiguous ids, preserving order.
    let mut new_id = vec![0usize; spec.n() + 1];
    let mut vertices = Vec::with_capacity(spec.n() - removed.len());
    for (i, name) in spec.vertices.iter().enumerate() {
        let old = i + 1;
        if !removed.contains(&old) {
            vertices.push(name.clone());
            new_id[old] = vertices.len();
        }
    }

    let mut reduce_side = |player: Player,
                           own: &[Hyperedge],
                           own_init: &BTreeSet<VertexId>,
                           opp_init: &BTreeSet<VertexId>| {
        let mut out: Vec<Hyperedge> = Vec::new();
        let mut seen: BTreeSet<Hyperedge> = BTreeSet::new();
        for edge in own {
            if edge.iter().any(|v| opp_init.contains(v)) {
                continue;
            }
            let shrunk: Hyperedge = edge
                .iter()
                .filter(|v| !own_init.contains(v))
                .map(|&v| new_id[v])
                .collect();
            if shrunk.is_empty() {
                // Already-won case, reported through the outcome.
                continue;
            }
            if seen.insert(shrunk.clone()) {
                out.push(shrunk);
            } else {
                warnings.push(format!(
                    "reduction collapsed a {player} winning set into a duplicate"
                ));
            }
        }
        out
    };

    let ewins_black = reduce_side(
        Player::Black,
        &spec.ewins_black,
        &spec.black_initials,
        &spec.white_initials,
    );
    let ewins_white = reduce_side(
        Player::White,
        &spec.ewins_white,
        &spec.white_initials,
        &spec.black_initials,
    );

    let firstmoves = spec.firstmoves.as_ref().map(|fm| {
        fm.iter()
            .filter(|v| !removed.contains(v))
            .map(|&v| new_id[v])
            .collect::<BTreeSet<VertexId>>()
    });

    ReducedGame {
        game: GameSpec {
            version: spec.version.clone(),
            vertices,
            timeline: spec.timeline.clone(),
            ewins_black,
            ewins_white,
            black_initials: BTreeSet::new(),
            white_initials: BTreeSet::new(),
            firstmoves,
        },
        trivial_outcome: outcome,
        warnings,
    }
}

/// Timeline plan for a `(p, q)` game on `n_vertices` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthPlan {
    /// Smallest number of Black turns after which the board can be full.
    pub black_turns: usize,
    pub timeline: Vec<TimePoint>,
}

/// Computes the default timeline of a `(p, q)` game: Black opens with `q`
/// claims, then White and Black alternate blocks of `p` claims, truncated so
/// that the total number of individual moves never exceeds the vertex count.
pub fn default_depth(n_vertices: usize, p: usize, q: usize) -> DepthPlan {
    assert!(n_vertices >= 1 && p >= 1 && q >= 1);
    // Smallest T with q + 2(T-1)p >= n.
    let mut black_turns = 1usize;
    while q + 2 * (black_turns - 1) * p < n_vertices {
        black_turns += 1;
    }
    let mut players = Vec::with_capacity(n_vertices);
    for _ in 0..q.min(n_vertices) {
        players.push(Player::Black);
    }
    'outer: for _ in 1..black_turns {
        for player in [Player::White, Player::Black] {
            for _ in 0..p {
                if players.len() == n_vertices {
                    break 'outer;
                }
                players.push(player);
            }
        }
    }
    let timeline = players
        .into_iter()
        .enumerate()
        .map(|(i, player)| TimePoint {
            label: format!("t{}", i + 1),
            player,
        })
        .collect();
    DepthPlan {
        black_turns,
        timeline,
    }
}
