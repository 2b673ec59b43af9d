//! Solver harness: external solver invocation with timeout and exit-code
//! mapping, the iterative-deepening driver, and the report formats.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::encode::{encode, EncodeError, EncodeOptions};
use crate::game::{GameSpec, Player};
use crate::oracle::{solve_qbf, QbfLimits, SolveResult, UnknownReason, Verdict};
use crate::qdimacs::write_qdimacs;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("solver command is empty")]
    EmptySolverCommand,
    #[error("failed to spawn solver {command:?}: {message}")]
    Spawn { command: String, message: String },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("could not write formula file: {0}")]
    Io(#[from] std::io::Error),
}

/// How to invoke an external QBF solver.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Command template; `{file}` is replaced by the formula path. When no
    /// placeholder is present the path is appended as the last argument.
    pub solver: String,
    pub timeout: Duration,
    /// Exit-code interpretation, QBF-solver convention by default.
    pub exit_codes: BTreeMap<i32, Verdict>,
    pub working_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            solver: String::new(),
            timeout: Duration::from_secs(300),
            exit_codes: [(10, Verdict::True), (20, Verdict::False)]
                .into_iter()
                .collect(),
            working_dir: None,
        }
    }
}

/// Runs an external solver on a QDIMACS file, enforcing the timeout and
/// mapping the exit code.
pub fn run_external(path: &Path, config: &RunConfig) -> Result<SolveResult, HarnessError> {
    let template = config.solver.trim();
    if template.is_empty() {
        return Err(HarnessError::EmptySolverCommand);
    }
    let mut parts: Vec<String> = template.split_whitespace().map(str::to_string).collect();
    let path_str = path.to_string_lossy().to_string();
    let mut substituted = false;
    for part in &mut parts {
        if part.contains("{file}") {
            *part = part.replace("{file}", &path_str);
            substituted = true;
        }
    }
    if !substituted {
        parts.push(path_str);
    }
    let mut command = Command::new(&parts[0]);
    command
        .args(&parts[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    if let Some(dir) = &config.working_dir {
        command.current_dir(dir);
    }
    let start = Instant::now();
    let mut child = command.spawn().map_err(|e| HarnessError::Spawn {
        command: config.solver.clone(),
        message: e.to_string(),
    })?;
    let deadline = start + config.timeout;
    let status = loop {
        match child.try_wait()? {
            Some(status) => break Some(status),
            None => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
        }
    };
    let wall = start.elapsed();
    let result = match status {
        None => SolveResult {
            verdict: Verdict::Unknown,
            optimal_depth: None,
            nodes: 0,
            decisions: 0,
            wall,
            unknown_reason: Some(UnknownReason::Timeout),
        },
        Some(status) => {
            let code = status.code().unwrap_or(-1);
            match config.exit_codes.get(&code) {
                Some(&verdict) => SolveResult {
                    verdict,
                    optimal_depth: None,
                    nodes: 0,
                    decisions: 0,
                    wall,
                    unknown_reason: None,
                },
                None => SolveResult {
                    verdict: Verdict::Unknown,
                    optimal_depth: None,
                    nodes: 0,
                    decisions: 0,
                    wall,
                    unknown_reason: Some(UnknownReason::UnmappedExit(code)),
                },
            }
        }
    };
    Ok(result)
}

/// How `deepen` solves each per-depth formula.
pub enum DeepenSolver<'a> {
    Internal(QbfLimits),
    External(&'a RunConfig, &'a Path),
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthRow {
    pub depth: usize,
    pub verdict: Verdict,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeepenReport {
    pub rows: Vec<DepthRow>,
    pub verdict: Verdict,
    /// First depth proven TRUE, if any.
    pub winning_depth: Option<usize>,
}

impl DeepenReport {
    /// Two-column layout: refuted depths on the left, the proven depth on
    /// the right.
    pub fn render(&self) -> String {
        let mut out = String::from("depth  not-models  models\n");
        for row in &self.rows {
            let time = format!("{:.2}", row.seconds);
            match row.verdict {
                Verdict::False => {
                    out.push_str(&format!("{:>5}  {:>10}\n", row.depth, time));
                }
                Verdict::True => {
                    out.push_str(&format!("{:>5}  {:>10}  {:>6}\n", row.depth, "", time));
                }
                Verdict::Unknown => {
                    out.push_str(&format!("{:>5}  {:>10}  {:>6}\n", row.depth, "?", "?"));
                }
            }
        }
        out
    }
}

/// Encodes one formula per depth, solving them in increasing order and
/// stopping at the first TRUE. Depths step by two from `start` up to the
/// full timeline.
pub fn deepen(
    spec: &GameSpec,
    opts: &EncodeOptions,
    start: Option<usize>,
    solver: DeepenSolver<'_>,
) -> Result<DeepenReport, HarnessError> {
    let full = spec.depth();
    let start_depth = start.unwrap_or(1).clamp(1, full.max(1));
    let mut rows = Vec::new();
    let mut verdict = Verdict::False;
    let mut winning_depth = None;
    let mut depth = start_depth;
    while depth <= full {
        let opts = EncodeOptions {
            depth_override: Some(depth),
            ..opts.clone()
        };
        let encoded = encode(spec, &opts)?;
        let began = Instant::now();
        let result = match &solver {
            DeepenSolver::Internal(limits) => solve_qbf(&encoded.formula, limits),
            DeepenSolver::External(config, dir) => {
                let file = dir.join(format!("depth{depth}.qdimacs"));
                std::fs::write(&file, write_qdimacs(&encoded.formula))?;
                run_external(&file, config)?
            }
        };
        rows.push(DepthRow {
            depth,
            verdict: result.verdict,
            seconds: began.elapsed().as_secs_f64(),
        });
        verdict = result.verdict;
        if result.verdict == Verdict::True {
            winning_depth = Some(depth);
            break;
        }
        if depth == full {
            break;
        }
        depth = (depth + 2).min(full);
    }
    Ok(DeepenReport {
        rows,
        verdict,
        winning_depth,
    })
}

/// Key-value stats report written next to an encoded formula.
pub fn stats_report(
    spec: &GameSpec,
    encoded: &crate::encode::Encoded,
    opts: &EncodeOptions,
) -> String {
    use std::fmt::Write as _;
    let stats = crate::qbf::stats(&encoded.formula);
    let meta = &encoded.meta;
    let mut out = String::new();
    let _ = writeln!(out, "encoding: {}", opts.variant);
    let _ = writeln!(out, "vertices: {}", meta.vertices);
    let _ = writeln!(out, "depth: {}", meta.depth);
    let _ = writeln!(out, "black-sets: {}", meta.black_edges);
    let _ = writeln!(out, "white-sets: {}", meta.white_edges);
    let _ = writeln!(out, "quantifier-blocks: {}", stats.quantifier_blocks);
    let _ = writeln!(out, "universals: {}", stats.universals);
    let _ = writeln!(out, "existentials: {}", stats.existentials);
    let _ = writeln!(out, "clauses: {}", stats.clauses);
    let _ = writeln!(out, "literals: {}", stats.literals);
    if let Some(value) = meta.constant {
        let _ = writeln!(out, "constant: {value}");
    }
    // Size guide: the quadratic budget the clause count should stay under.
    let n = meta.vertices as f64;
    let budget = 20.0 * n * n
        + n * meta.black_edges as f64
        + meta.white_edges as f64;
    let _ = writeln!(out, "clause-budget: {budget:.0}");
    let white_moves = spec
        .timeline
        .iter()
        .filter(|t| t.player == Player::White)
        .count();
    let _ = writeln!(out, "white-moves: {white_moves}");
    out
}

/// Machine-readable variant of the stats report.
pub fn stats_report_json(encoded: &crate::encode::Encoded) -> String {
    #[derive(Serialize)]
    struct Report<'a> {
        stats: crate::qbf::FormulaStats,
        meta: &'a crate::encode::EncodeMeta,
    }
    serde_json::to_string_pretty(&Report {
        stats: crate::qbf::stats(&encoded.formula),
        meta: &encoded.meta,
    })
    .expect("stats serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens;

    #[test]
    fn exit_codes_map_to_verdicts() {
        let dir = std::env::temp_dir();
        let file = dir.join("pgqbf-harness-exit-test.qdimacs");
        std::fs::write(&file, "p cnf 1 1\ne 1 0\n1 0\n").unwrap();

        let run_with = |script: &str| {
            let helper = dir.join("pgqbf-exit-helper.sh");
            std::fs::write(&helper, format!("#!/bin/sh\n{script}\n")).unwrap();
            let config = RunConfig {
                solver: format!("sh {} {{file}}", helper.display()),
                timeout: Duration::from_secs(5),
                ..RunConfig::default()
            };
            run_external(&file, &config).unwrap()
        };

        assert_eq!(run_with("exit 10").verdict, Verdict::True);
        assert_eq!(run_with("exit 20").verdict, Verdict::False);
        let result = run_with("exit 1");
        assert_eq!(result.verdict, Verdict::Unknown);
        assert_eq!(result.unknown_reason, Some(UnknownReason::UnmappedExit(1)));
    }

    #[test]
    fn timeout_is_enforced() {
        let dir = std::env::temp_dir();
        let file = dir.join("pgqbf-harness-timeout-test.qdimacs");
        std::fs::write(&file, "p cnf 1 1\ne 1 0\n1 0\n").unwrap();
        let helper = dir.join("pgqbf-sleep-helper.sh");
        std::fs::write(&helper, "#!/bin/sh\nsleep 30\n").unwrap();
        let config = RunConfig {
            solver: format!("sh {}", helper.display()),
            timeout: Duration::from_millis(100),
            ..RunConfig::default()
        };
        let result = run_external(&file, &config).unwrap();
        assert_eq!(result.verdict, Verdict::Unknown);
        assert_eq!(result.unknown_reason, Some(UnknownReason::Timeout));
        assert!(result.wall < Duration::from_secs(10));
    }

    #[test]
    fn spawn_failure_is_an_error() {
        let config = RunConfig {
            solver: "definitely-not-a-solver-binary-xyz".into(),
            ..RunConfig::default()
        };
        assert!(matches!(
            run_external(Path::new("/tmp/nonexistent.qdimacs"), &config),
            Err(HarnessError::Spawn { .. })
        ));
    }

    #[test]
    fn deepen_single_vertex_game() {
        let spec = gens::gen_lines_game(1, 1, 1, 1, 1, false).unwrap();
        let report = deepen(
            &spec,
            &EncodeOptions::default(),
            None,
            DeepenSolver::Internal(QbfLimits::default()),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::True);
        assert_eq!(report.winning_depth, Some(1));
        assert_eq!(report.rows.len(), 1);
    }
}
