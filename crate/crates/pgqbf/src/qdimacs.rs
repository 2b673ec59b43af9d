//! QDIMACS text format: `p cnf` header, lowercase `e`/`a` quantifier lines
//! with strict alternation, zero-terminated clause lines, LF newlines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::qbf::{Block, QbfFormula, Quant, VarTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QdimacsError {
    #[error("line {0}: expected 'p cnf <vars> <clauses>' header")]
    BadHeader(usize),
    #[error("line {0}: token {1:?} is not an integer")]
    BadToken(usize, String),
    #[error("line {0}: empty quantifier block")]
    EmptyBlock(usize),
    #[error("line {0}: quantifier line not terminated by 0")]
    UnterminatedBlock(usize),
    #[error("variable {0} quantified more than once")]
    DoubleQuantified(u32),
    #[error("literal {0} references an unquantified variable")]
    Unquantified(i32),
    #[error("header declares {declared} clauses but body has {actual}")]
    ClauseCountMismatch { declared: usize, actual: usize },
    #[error("header declares {declared} variables but {actual} appear")]
    VarCountMismatch { declared: u32, actual: u32 },
    #[error("last clause is not terminated by 0")]
    MissingClauseTerminator,
    #[error("missing header")]
    MissingHeader,
}

fn push_block_line(out: &mut String, block: &Block) {
    let letter = match block.quant {
        Quant::Exists => 'e',
        Quant::ForAll => 'a',
    };
    out.push(letter);
    for &v in &block.vars {
        write!(out, " {v}").unwrap();
    }
    out.push_str(" 0\n");
}

/// Serializes a formula. Constant formulas become the canonical one-variable
/// tautology or contradiction with a comment noting the constant.
pub fn write_qdimacs(formula: &QbfFormula) -> String {
    write_qdimacs_opts(formula, None)
}

/// Like [`write_qdimacs`], optionally prefixing one comment line per
/// variable with its semantic descriptor.
pub fn write_qdimacs_opts(formula: &QbfFormula, comments: Option<&VarTable>) -> String {
    let mut out = String::new();
    if let Some(value) = formula.constant {
        writeln!(out, "c constant {}", if value { "true" } else { "false" }).unwrap();
        if value {
            out.push_str("p cnf 1 1\ne 1 0\n1 0\n");
        } else {
            out.push_str("p cnf 1 2\ne 1 0\n1 0\n-1 0\n");
        }
        return out;
    }
    if let Some(table) = comments {
        for (id, desc) in table.iter() {
            writeln!(out, "c {id} {desc}").unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", formula.num_vars, formula.clauses.len()).unwrap();
    for block in formula.merged_prefix() {
        push_block_line(&mut out, &block);
    }
    for clause in &formula.clauses {
        for &lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses QDIMACS text. The result carries one prefix block per quantifier
/// line, so round-tripping a written formula reproduces its merged prefix.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, QdimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix: Vec<Block> = Vec::new();
    let mut clause_tokens: Vec<(usize, i64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let mut parts = line.split_whitespace();
            let (p, cnf) = (parts.next(), parts.next());
            let nv = parts.next().and_then(|s| s.parse::<u32>().ok());
            let nc = parts.next().and_then(|s| s.parse::<usize>().ok());
            match (p, cnf, nv, nc, parts.next()) {
                (Some("p"), Some("cnf"), Some(nv), Some(nc), None) => {
                    header = Some((nv, nc));
                }
                _ => return Err(QdimacsError::BadHeader(line_no)),
            }
            continue;
        }
        if header.is_none() {
            return Err(QdimacsError::MissingHeader);
        }
        if let Some(rest) = line.strip_prefix('e').or_else(|| line.strip_prefix('a')) {
            if !rest.starts_with(|c: char| c.is_whitespace()) {
                return Err(QdimacsError::BadToken(line_no, line.to_string()));
            }
            let quant = if line.starts_with('e') {
                Quant::Exists
            } else {
                Quant::ForAll
            };
            let mut vars = Vec::new();
            let mut terminated = false;
            for token in rest.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| QdimacsError::BadToken(line_no, token.to_string()))?;
                if value == 0 {
                    terminated = true;
                    break;
                }
                if value < 0 {
                    return Err(QdimacsError::BadToken(line_no, token.to_string()));
                }
                vars.push(value as u32);
            }
            if !terminated {
                return Err(QdimacsError::UnterminatedBlock(line_no));
            }
            if vars.is_empty() {
                return Err(QdimacsError::EmptyBlock(line_no));
            }
            prefix.push(Block { quant, vars });
            continue;
        }
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| QdimacsError::BadToken(line_no, token.to_string()))?;
            clause_tokens.push((line_no, value));
        }
    }

    let (declared_vars, declared_clauses) = header.ok_or(QdimacsError::MissingHeader)?;

    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for &(_, value) in &clause_tokens {
        if value == 0 {
            clauses.push(std::mem::take(&mut current));
        } else {
            current.push(value as i32);
        }
    }
    if !current.is_empty() {
        return Err(QdimacsError::MissingClauseTerminator);
    }
    if clauses.len() != declared_clauses {
        return Err(QdimacsError::ClauseCountMismatch {
            declared: declared_clauses,
            actual: clauses.len(),
        });
    }

    let mut quantified = vec![false; declared_vars as usize + 1];
    let mut max_var = 0u32;
    for block in &prefix {
        for &v in &block.vars {
            if v > declared_vars {
                return Err(QdimacsError::VarCountMismatch {
                    declared: declared_vars,
                    actual: v,
                });
            }
            if quantified[v as usize] {
                return Err(QdimacsError::DoubleQuantified(v));
            }
            quantified[v as usize] = true;
            max_var = max_var.max(v);
        }
    }
    for clause in &clauses {
        for &lit in clause {
            let v = lit.unsigned_abs();
            if v == 0 || v > declared_vars || !quantified[v as usize] {
                return Err(QdimacsError::Unquantified(lit));
            }
        }
    }

    Ok(QbfFormula {
        num_vars: declared_vars,
        prefix,
        clauses,
        constant: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_var_formula() -> QbfFormula {
        QbfFormula {
            num_vars: 2,
            prefix: vec![
                Block { quant: Quant::Exists, vars: vec![1] },
                Block { quant: Quant::ForAll, vars: vec![2] },
            ],
            clauses: vec![vec![1, -2]],
            constant: None,
        }
    }

    #[test]
    fn writes_the_documented_format() {
        assert_eq!(
            write_qdimacs(&two_var_formula()),
            "p cnf 2 1\ne 1 0\na 2 0\n1 -2 0\n"
        );
    }

    #[test]
    fn adjacent_blocks_merge_on_output() {
        let f = QbfFormula {
            num_vars: 2,
            prefix: vec![
                Block { quant: Quant::Exists, vars: vec![1] },
                Block { quant: Quant::Exists, vars: vec![2] },
            ],
            clauses: vec![vec![1, 2]],
            constant: None,
        };
        let text = write_qdimacs(&f);
        assert!(text.contains("e 1 2 0\n"));
        assert_eq!(text.matches('\n').count(), 3);
    }

    #[test]
    fn constants_serialize_to_canonical_stubs() {
        let text = write_qdimacs(&QbfFormula::constant(true));
        assert_eq!(text, "c constant true\np cnf 1 1\ne 1 0\n1 0\n");
        let text = write_qdimacs(&QbfFormula::constant(false));
        assert_eq!(text, "c constant false\np cnf 1 2\ne 1 0\n1 0\n-1 0\n");
    }

    #[test]
    fn round_trips_match_the_merged_prefix() {
        let f = two_var_formula();
        let parsed = parse_qdimacs(&write_qdimacs(&f)).unwrap();
        assert_eq!(parsed.prefix, f.merged_prefix());
        assert_eq!(parsed.clauses, f.clauses);
        assert_eq!(parsed.num_vars, f.num_vars);
    }

    #[test]
    fn rejects_count_mismatch() {
        let err = parse_qdimacs("p cnf 2 3\ne 1 2 0\n1 -2 0\n2 0\n").unwrap_err();
        assert_eq!(
            err,
            QdimacsError::ClauseCountMismatch { declared: 3, actual: 2 }
        );
    }

    #[test]
    fn rejects_empty_block_and_unquantified_literal() {
        let err = parse_qdimacs("p cnf 1 1\ne 0\n1 0\n").unwrap_err();
        assert_eq!(err, QdimacsError::EmptyBlock(2));

        let err = parse_qdimacs("p cnf 2 1\ne 1 0\n1 -2 0\n").unwrap_err();
        assert_eq!(err, QdimacsError::Unquantified(-2));
    }

    #[test]
    fn rejects_missing_terminator() {
        let err = parse_qdimacs("p cnf 2 1\ne 1 2 0\n1 -2\n").unwrap_err();
        assert_eq!(err, QdimacsError::MissingClauseTerminator);
    }

    #[test]
    fn comments_carry_the_variable_table() {
        let mut table = VarTable::new();
        table.fresh(crate::qbf::VarDesc::Time(1)).unwrap();
        table.fresh(crate::qbf::VarDesc::WinFlag).unwrap();
        let f = QbfFormula {
            num_vars: 2,
            prefix: vec![Block { quant: Quant::Exists, vars: vec![1, 2] }],
            clauses: vec![vec![1, 2]],
            constant: None,
        };
        let text = write_qdimacs_opts(&f, Some(&table));
        assert!(text.starts_with("c 1 time(1)\nc 2 win\n"));
        let parsed = parse_qdimacs(&text).unwrap();
        assert_eq!(parsed.clauses, f.clauses);
    }
}
