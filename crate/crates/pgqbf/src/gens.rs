//! Game-instance generators: k-in-a-row boards, polyomino achievement
//! games, the 4x4x4 cube, and Hex.
//!
//! Cells are named with a row letter and a column number (`a1` is the top
//! left); cube cells carry a layer letter first. Timelines come from the
//! default `(p, q)` plan over the generated vertex count.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::game::{default_depth, GameSpec, Hyperedge, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("target length {k} exceeds both board dimensions {rows}x{cols}")]
    LineTooLong { k: usize, rows: usize, cols: usize },
    #[error("board dimension must be positive")]
    EmptyBoard,
    #[error("board rows are limited to 26 (one letter per row)")]
    TooManyRows,
    #[error("polyomino is empty")]
    EmptyPolyomino,
    #[error("polyomino is not connected")]
    DisconnectedPolyomino,
    #[error("no placement of the polyomino fits the board")]
    NoPlacement,
    #[error("hex board size {0} exceeds the cap {1}; the hypergraph grows exponentially")]
    HexTooLarge(usize, usize),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("opening stones overlap on {0:?}")]
    OverlappingStones(String),
}

fn cell_name(row: usize, col: usize) -> String {
    let letter = (b'a' + (row - 1) as u8) as char;
    format!("{letter}{col}")
}

fn grid_vertices(rows: usize, cols: usize) -> Vec<String> {
    let mut vertices = Vec::with_capacity(rows * cols);
    for r in 1..=rows {
        for c in 1..=cols {
            vertices.push(cell_name(r, c));
        }
    }
    vertices
}

fn grid_id(cols: usize, row: usize, col: usize) -> VertexId {
    (row - 1) * cols + col
}

fn spec_from_edges(
    vertices: Vec<String>,
    edges: Vec<Hyperedge>,
    maker_breaker: bool,
    p: usize,
    q: usize,
) -> GameSpec {
    let mut spec = GameSpec {
        version: "1.0".into(),
        vertices,
        timeline: Vec::new(),
        ewins_black: edges.clone(),
        ewins_white: if maker_breaker { Vec::new() } else { edges },
        black_initials: BTreeSet::new(),
        white_initials: BTreeSet::new(),
        firstmoves: None,
    };
    spec.timeline = default_depth(spec.n(), p, q).timeline;
    spec.normalize();
    spec
}

/// All straight runs of exactly `k` cells on a `rows x cols` board:
/// horizontal, vertical and both diagonals.
pub fn gen_lines_game(
    rows: usize,
    cols: usize,
    k: usize,
    p: usize,
    q: usize,
    maker_breaker: bool,
) -> Result<GameSpec, GenError> {
    if rows == 0 || cols == 0 || k == 0 {
        return Err(GenError::EmptyBoard);
    }
    if rows > 26 {
        return Err(GenError::TooManyRows);
    }
    if k > rows.max(cols) {
        return Err(GenError::LineTooLong { k, rows, cols });
    }
    let mut edges: Vec<Hyperedge> = Vec::new();
    let directions = [(0isize, 1isize), (1, 0), (1, 1), (1, -1)];
    for r in 1..=rows {
        for c in 1..=cols {
            for (dr, dc) in directions {
                let end_r = r as isize + dr * (k as isize - 1);
                let end_c = c as isize + dc * (k as isize - 1);
                if end_r < 1 || end_r > rows as isize || end_c < 1 || end_c > cols as isize {
                    continue;
                }
                let edge: Hyperedge = (0..k as isize)
                    .map(|i| {
                        grid_id(cols, (r as isize + dr * i) as usize, (c as isize + dc * i) as usize)
                    })
                    .collect();
                edges.push(edge);
            }
        }
    }
    Ok(spec_from_edges(
        grid_vertices(rows, cols),
        edges,
        maker_breaker,
        p,
        q,
    ))
}

/// A polyomino as relative cells, normalized so the minimum row and column
/// are both zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyomino {
    cells: BTreeSet<(i32, i32)>,
}

impl Polyomino {
    pub fn new(cells: impl IntoIterator<Item = (i32, i32)>) -> Result<Polyomino, GenError> {
        let raw: BTreeSet<(i32, i32)> = cells.into_iter().collect();
        if raw.is_empty() {
            return Err(GenError::EmptyPolyomino);
        }
        let poly = Polyomino { cells: raw }.normalized();
        if !poly.is_connected() {
            return Err(GenError::DisconnectedPolyomino);
        }
        Ok(poly)
    }

    fn normalized(&self) -> Polyomino {
        let min_r = self.cells.iter().map(|&(r, _)| r).min().unwrap();
        let min_c = self.cells.iter().map(|&(_, c)| c).min().unwrap();
        Polyomino {
            cells: self
                .cells
                .iter()
                .map(|&(r, c)| (r - min_r, c - min_c))
                .collect(),
        }
    }

    fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![*self.cells.iter().next().unwrap()];
        while let Some((r, c)) = stack.pop() {
            if !self.cells.contains(&(r, c)) || !seen.insert((r, c)) {
                continue;
            }
            stack.extend([(r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)]);
        }
        seen.len() == self.cells.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Distinct images under rotations and reflections, normalized.
    pub fn orientations(&self) -> Vec<Polyomino> {
        let mut out: Vec<Polyomino> = Vec::new();
        let mut shape = self.clone();
        for _ in 0..2 {
            for _ in 0..4 {
                shape = Polyomino {
                    cells: shape.cells.iter().map(|&(r, c)| (c, -r)).collect(),
                }
                .normalized();
                if !out.contains(&shape) {
                    out.push(shape.clone());
                }
            }
            shape = Polyomino {
                cells: shape.cells.iter().map(|&(r, c)| (r, -c)).collect(),
            }
            .normalized();
        }
        out.sort_by(|a, b| a.cells.cmp(&b.cells));
        out
    }
}

/// The single cell.
pub fn monomino() -> Polyomino {
    Polyomino::new([(0, 0)]).unwrap()
}

/// Two cells in a row.
pub fn domino() -> Polyomino {
    Polyomino::new([(0, 0), (0, 1)]).unwrap()
}

/// Three cells in a row.
pub fn tromino_i() -> Polyomino {
    Polyomino::new([(0, 0), (0, 1), (0, 2)]).unwrap()
}

/// Three cells in an L.
pub fn tromino_l() -> Polyomino {
    Polyomino::new([(0, 0), (1, 0), (1, 1)]).unwrap()
}

/// The six-cell snake:
/// ```text
/// ...XX
/// XXXX.
/// ```
pub fn snaky() -> Polyomino {
    Polyomino::new([(0, 3), (0, 4), (1, 0), (1, 1), (1, 2), (1, 3)]).unwrap()
}

pub fn polyomino_by_name(name: &str) -> Option<Polyomino> {
    match name {
        "monomino" => Some(monomino()),
        "domino" => Some(domino()),
        "itromino" | "tromino" => Some(tromino_i()),
        "ltromino" => Some(tromino_l()),
        "snaky" => Some(snaky()),
        _ => None,
    }
}

/// Achievement game: both players try to claim a set of cells congruent to
/// `poly` (rotations and reflections included) on an `n x n` board.
pub fn gen_polyomino_game(
    n: usize,
    poly: &Polyomino,
    p: usize,
    q: usize,
) -> Result<GameSpec, GenError> {
    if n == 0 {
        return Err(GenError::EmptyBoard);
    }
    if n > 26 {
        return Err(GenError::TooManyRows);
    }
    let mut edges: Vec<Hyperedge> = Vec::new();
    for orientation in poly.orientations() {
        let max_r = orientation.cells.iter().map(|&(r, _)| r).max().unwrap() as usize;
        let max_c = orientation.cells.iter().map(|&(_, c)| c).max().unwrap() as usize;
        if max_r >= n || max_c >= n {
            continue;
        }
        for base_r in 1..=(n - max_r) {
            for base_c in 1..=(n - max_c) {
                let edge: Hyperedge = orientation
                    .cells
                    .iter()
                    .map(|&(r, c)| grid_id(n, base_r + r as usize, base_c + c as usize))
                    .collect();
                edges.push(edge);
            }
        }
    }
    if edges.is_empty() {
        return Err(GenError::NoPlacement);
    }
    Ok(spec_from_edges(grid_vertices(n, n), edges, false, p, q))
}

/// The 4x4x4 cube: mark 4 aligned cells in any direction. Lines are found
/// by walking every direction vector from every cell and keeping maximal
/// in-bounds runs of four.
pub fn gen_qubic() -> GameSpec {
    let side = 4usize;
    let mut vertices = Vec::with_capacity(64);
    for layer in 0..side {
        for row in 0..side {
            for col in 0..side {
                let letter = (b'a' + layer as u8) as char;
                vertices.push(format!("{letter}{}{}", row + 1, col + 1));
            }
        }
    }
    let id = |x: isize, y: isize, z: isize| (x as usize * 16 + y as usize * 4 + z as usize) + 1;
    let in_bounds = |v: isize| (0..side as isize).contains(&v);
    let mut edges: Vec<Hyperedge> = Vec::new();
    let mut seen: BTreeSet<Hyperedge> = BTreeSet::new();
    for dx in -1isize..=1 {
        for dy in -1isize..=1 {
            for dz in -1isize..=1 {
                if (dx, dy, dz) == (0, 0, 0) {
                    continue;
                }
                for x in 0..side as isize {
                    for y in 0..side as isize {
                        for z in 0..side as isize {
                            let cells: Vec<(isize, isize, isize)> = (0..side as isize)
                                .map(|i| (x + dx * i, y + dy * i, z + dz * i))
                                .collect();
                            if !cells
                                .iter()
                                .all(|&(a, b, c)| in_bounds(a) && in_bounds(b) && in_bounds(c))
                            {
                                continue;
                            }
                            let mut edge: Hyperedge =
                                cells.iter().map(|&(a, b, c)| id(a, b, c)).collect();
                            edge.sort_unstable();
                            if seen.insert(edge.clone()) {
                                edges.push(edge);
                            }
                        }
                    }
                }
            }
        }
    }
    spec_from_edges(vertices, edges, false, 1, 1)
}

fn hex_neighbors(n: usize, r: usize, c: usize) -> Vec<(usize, usize)> {
    let deltas = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)];
    deltas
        .iter()
        .filter_map(|&(dr, dc)| {
            let nr = r as isize + dr;
            let nc = c as isize + dc;
            if nr >= 1 && nr <= n as isize && nc >= 1 && nc <= n as isize {
                Some((nr as usize, nc as usize))
            } else {
                None
            }
        })
        .collect()
}

fn hex_set_connects(n: usize, set: &BTreeSet<VertexId>) -> bool {
    let coords = |v: VertexId| ((v - 1) / n + 1, (v - 1) % n + 1);
    let mut stack: Vec<VertexId> = set.iter().copied().filter(|&v| coords(v).0 == 1).collect();
    let mut seen: BTreeSet<VertexId> = stack.iter().copied().collect();
    while let Some(v) = stack.pop() {
        let (r, c) = coords(v);
        if r == n {
            return true;
        }
        for (nr, nc) in hex_neighbors(n, r, c) {
            let w = grid_id(n, nr, nc);
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    // A 1x1 board is both the top and the bottom edge.
    n == 1 && !set.is_empty()
}

/// Hex as a Maker-Breaker game: Black's winning sets are all minimal cell
/// sets connecting the top row to the bottom row under hex adjacency.
/// Minimality means removing any single cell breaks the connection.
pub fn gen_hex(n: usize, cap: usize) -> Result<GameSpec, GenError> {
    if n == 0 {
        return Err(GenError::EmptyBoard);
    }
    if n > cap {
        return Err(GenError::HexTooLarge(n, cap));
    }
    let mut found: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    // Depth-first over simple paths from the top row; stop on reaching the
    // bottom row. Chords make some path sets non-minimal, so filter after.
    let mut path: Vec<(usize, usize)> = Vec::new();
    fn extend(
        n: usize,
        path: &mut Vec<(usize, usize)>,
        found: &mut BTreeSet<BTreeSet<VertexId>>,
    ) {
        let &(r, c) = path.last().unwrap();
        if r == n {
            let set: BTreeSet<VertexId> = path.iter().map(|&(r, c)| grid_id(n, r, c)).collect();
            let minimal = set.iter().all(|&v| {
                let mut without = set.clone();
                without.remove(&v);
                !hex_set_connects(n, &without)
            });
            if minimal {
                found.insert(set);
            }
            return;
        }
        for (nr, nc) in hex_neighbors(n, r, c) {
            if path.contains(&(nr, nc)) {
                continue;
            }
            path.push((nr, nc));
            extend(n, path, found);
            path.pop();
        }
    }
    for c in 1..=n {
        path.push((1, c));
        extend(n, &mut path, &mut found);
        path.pop();
    }
    let edges: Vec<Hyperedge> = found
        .into_iter()
        .map(|set| set.into_iter().collect())
        .collect();
    Ok(spec_from_edges(grid_vertices(n, n), edges, true, 1, 1))
}

/// Places opening stones by name. Reduction happens at encode time; the
/// timeline is shortened so the move count still matches the free cells.
pub fn apply_opening(
    spec: &GameSpec,
    black_stones: &[String],
    white_stones: &[String],
) -> Result<GameSpec, GenError> {
    let mut out = spec.clone();
    let mut all: BTreeSet<VertexId> = BTreeSet::new();
    for (names, target) in [
        (black_stones, &mut out.black_initials),
        (white_stones, &mut out.white_initials),
    ] {
        for name in names {
            let id = spec
                .vertex_id(name)
                .ok_or_else(|| GenError::UnknownVertex(name.clone()))?;
            if !all.insert(id) {
                return Err(GenError::OverlappingStones(name.clone()));
            }
            target.insert(id);
        }
    }
    let free = spec.n() - all.len();
    out.timeline.truncate(free);
    Ok(out)
}
