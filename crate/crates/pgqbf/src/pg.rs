//! Reader and writer for the `.pg` game description format.
//!
//! A document is a sequence of sections. Each section starts with a code
//! word line (`#times`, `#positions`, ...) and is followed by one or more
//! lines of whitespace-separated tokens, read until the next code word or
//! the end of the file. Under `#blackwins` and `#whitewins` every line is
//! one winning configuration; under the other code words the tokens of all
//! lines accumulate into a single list. Blank lines are ignored and the
//! final newline is optional.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{GameError, GameSpec, Player, TimePoint, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgError {
    #[error("line {line}: unknown code word {word:?}")]
    UnknownCodeWord { line: usize, word: String },
    #[error("line {line}: token {token:?} before any code word")]
    TokenBeforeCodeWord { line: usize, token: String },
    #[error("line {line}: duplicate section {word:?}")]
    DuplicateSection { line: usize, word: String },
    #[error("line {line}: under {word}: vertex {token:?} not declared in #positions")]
    UndeclaredVertex {
        line: usize,
        word: &'static str,
        token: String,
    },
    #[error("line {line}: under #blackturns: time point {token:?} not declared in #times")]
    UndeclaredTime { line: usize, token: String },
    #[error("line {line}: duplicate vertex name {token:?} in #positions")]
    DuplicateVertex { line: usize, token: String },
    #[error("line {line}: duplicate time label {token:?} in #times")]
    DuplicateTime { line: usize, token: String },
    #[error("#positions section is missing or empty")]
    EmptyPositions,
    #[error("#firstmoves section is present but empty")]
    EmptyFirstmoves,
    #[error("invalid game: {0}")]
    Invalid(#[from] GameError),
}

/// A parsed document: the game plus non-fatal observations.
#[derive(Debug, Clone)]
pub struct PgDocument {
    pub spec: GameSpec,
    pub warnings: Vec<String>,
}

const CODE_WORDS: [&str; 9] = [
    "#version",
    "#times",
    "#blackturns",
    "#positions",
    "#blackwins",
    "#whitewins",
    "#blackinitials",
    "#whiteinitials",
    "#firstmoves",
];

pub fn parse_pg(text: &str) -> Result<PgDocument, PgError> {
    // Raw token lines per section, remembering source lines for diagnostics.
    let mut sections: Vec<(String, usize, Vec<(usize, Vec<String>)>)> = Vec::new();
    let mut current: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(word) = line.strip_prefix('#') {
            let word = format!("#{}", word.trim());
            if !CODE_WORDS.contains(&word.as_str()) {
                return Err(PgError::UnknownCodeWord {
                    line: line_no,
                    word,
                });
            }
            if sections.iter().any(|(w, _, _)| *w == word) {
                return Err(PgError::DuplicateSection {
                    line: line_no,
                    word,
                });
            }
            sections.push((word, line_no, Vec::new()));
            current = Some(sections.len() - 1);
        } else {
            let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            match current {
                Some(idx) => sections[idx].2.push((line_no, tokens)),
                None => {
                    return Err(PgError::TokenBeforeCodeWord {
                        line: line_no,
                        token: tokens[0].clone(),
                    })
                }
            }
        }
    }

    let find = |word: &str| sections.iter().find(|(w, _, _)| w == word);
    let flat = |word: &str| -> Vec<(usize, String)> {
        find(word)
            .map(|(_, _, lines)| {
                lines
                    .iter()
                    .flat_map(|(n, toks)| toks.iter().map(|t| (*n, t.clone())))
                    .collect()
            })
            .unwrap_or_default()
    };

    let mut warnings = Vec::new();

    let version = match find("#version") {
        Some((_, _, lines)) => {
            let tokens: Vec<&String> = lines.iter().flat_map(|(_, t)| t).collect();
            tokens.first().map(|s| s.to_string()).unwrap_or_default()
        }
        None => {
            warnings.push("no #version section, assuming 1.0".to_string());
            "1.0".to_string()
        }
    };
    if version != "1.0" {
        warnings.push(format!("unknown format version {version:?}"));
    }

    // Vertices, in declaration order; ids are 1-based positions.
    let mut vertices: Vec<String> = Vec::new();
    let mut vertex_ids: std::collections::HashMap<String, VertexId> =
        std::collections::HashMap::new();
    for (line, token) in flat("#positions") {
        if vertex_ids.contains_key(&token) {
            return Err(PgError::DuplicateVertex { line, token });
        }
        vertices.push(token.clone());
        vertex_ids.insert(token, vertices.len());
    }
    if vertices.is_empty() {
        return Err(PgError::EmptyPositions);
    }

    let mut times: Vec<String> = Vec::new();
    let mut time_set: BTreeSet<String> = BTreeSet::new();
    for (line, token) in flat("#times") {
        if !time_set.insert(token.clone()) {
            return Err(PgError::DuplicateTime { line, token });
        }
        times.push(token);
    }

    let mut black_times: BTreeSet<String> = BTreeSet::new();
    for (line, token) in flat("#blackturns") {
        if !time_set.contains(&token) {
            return Err(PgError::UndeclaredTime { line, token });
        }
        black_times.insert(token);
    }

    // White plays every declared time point not listed under #blackturns.
    let timeline: Vec<TimePoint> = times
        .into_iter()
        .map(|label| {
            let player = if black_times.contains(&label) {
                Player::Black
            } else {
                Player::White
            };
            TimePoint { label, player }
        })
        .collect();

    let lookup = |word: &'static str, line: usize, token: &str| -> Result<VertexId, PgError> {
        vertex_ids.get(token).copied().ok_or(PgError::UndeclaredVertex {
            line,
            word,
            token: token.to_string(),
        })
    };

    let parse_edges = |word: &'static str| -> Result<Vec<Vec<VertexId>>, PgError> {
        let mut edges = Vec::new();
        if let Some((_, _, lines)) = find(word) {
            for (line, tokens) in lines {
                let mut edge: Vec<VertexId> = Vec::with_capacity(tokens.len());
                for token in tokens {
                    edge.push(lookup(word, *line, token)?);
                }
                edges.push(edge);
            }
        }
        Ok(edges)
    };

    let parse_vertex_set = |word: &'static str| -> Result<BTreeSet<VertexId>, PgError> {
        let mut set = BTreeSet::new();
        for (line, token) in flat(word) {
            set.insert(lookup(word, line, &token)?);
        }
        Ok(set)
    };

    let ewins_black = parse_edges("#blackwins")?;
    let ewins_white = parse_edges("#whitewins")?;
    let black_initials = parse_vertex_set("#blackinitials")?;
    let white_initials = parse_vertex_set("#whiteinitials")?;
    let firstmoves = match find("#firstmoves") {
        Some(_) => {
            let set = parse_vertex_set("#firstmoves")?;
            if set.is_empty() {
                return Err(PgError::EmptyFirstmoves);
            }
            Some(set)
        }
        None => None,
    };

    let mut spec = GameSpec {
        version,
        vertices,
        timeline,
        ewins_black,
        ewins_white,
        black_initials,
        white_initials,
        firstmoves,
    };
    warnings.extend(spec.normalize());
    spec.validate()?;
    Ok(PgDocument { spec, warnings })
}

/// Serializes a game back into the `.pg` format. Sections for empty data
/// are omitted; winning sets go one per line.
pub fn write_pg(spec: &GameSpec) -> Result<String, GameError> {
    spec.validate()?;
    let mut out = String::new();
    writeln!(out, "#version").unwrap();
    writeln!(out, "{}", spec.version).unwrap();
    if !spec.timeline.is_empty() {
        writeln!(out, "#times").unwrap();
        let labels: Vec<&str> = spec.timeline.iter().map(|t| t.label.as_str()).collect();
        writeln!(out, "{}", labels.join(" ")).unwrap();
        let black: Vec<&str> = spec
            .timeline
            .iter()
            .filter(|t| t.player == Player::Black)
            .map(|t| t.label.as_str())
            .collect();
        if !black.is_empty() {
            writeln!(out, "#blackturns").unwrap();
            writeln!(out, "{}", black.join(" ")).unwrap();
        }
    }
    writeln!(out, "#positions").unwrap();
    for chunk in spec.vertices.chunks(16) {
        writeln!(out, "{}", chunk.join(" ")).unwrap();
    }
    let mut write_edges = |word: &str, edges: &[Vec<VertexId>]| {
        if edges.is_empty() {
            return;
        }
        writeln!(out, "{word}").unwrap();
        for edge in edges {
            let names: Vec<&str> = edge.iter().map(|&v| spec.vertices[v - 1].as_str()).collect();
            writeln!(out, "{}", names.join(" ")).unwrap();
        }
    };
    write_edges("#blackwins", &spec.ewins_black);
    write_edges("#whitewins", &spec.ewins_white);
    let mut write_set = |word: &str, set: &BTreeSet<VertexId>| {
        if set.is_empty() {
            return;
        }
        let names: Vec<&str> = set.iter().map(|&v| spec.vertices[v - 1].as_str()).collect();
        writeln!(out, "{word}").unwrap();
        writeln!(out, "{}", names.join(" ")).unwrap();
    };
    write_set("#blackinitials", &spec.black_initials);
    write_set("#whiteinitials", &spec.white_initials);
    if let Some(fm) = &spec.firstmoves {
        write_set("#firstmoves", fm);
    }
    Ok(out)
}

/// The example document from the format description.
#[cfg(test)]
pub(crate) const APPENDIX_DOC: &str = "\
#version
1.0
#times
t4 t5 t6 t7 t8 t9
#blackturns
t5 t7 t9
#positions
a1 a2 a3
b1 b2 b3
c1 c2 c3
#blackwins
a1 b1 c1
a2 b2 c2
a3 b3 c3
a1 a2 a3
b1 b2 b3
c1 c2 c3
a1 b2 c3
a3 b2 c1
#blackinitials
b2 c3
#whitewins
a1 b1 c1
a2 b2 c2
a3 b3 c3
a1 a2 a3
b1 b2 b3
c1 c2 c3
a1 b2 c3
a3 b2 c1
#whiteinitials
a1
";
