//! Headless replay of a move script through a game engine.
//!
//! Script syntax is one move per line; blank lines and `#` comments are
//! ignored.
//!
//! * Bloch: a gate name (`X`, `H`, ...) or `reset`.
//! * Entanglement: an action name (`Jump`, `Crawl`, ...).
//! * Circuits: `place <gate> <column> [wire]`, `remove <column> <wire>`,
//!   `move <column> <wire> <to-column> [to-wire]`, or `reset`.
//!
//! Moves the engine rejects are recorded in the transcript and play
//! continues, the same way a player would see an error and carry on.

use std::fmt::Write as _;

use thiserror::Error;

use qubitquest_core::bloch::{BlochLevel, BlochSession};
use qubitquest_core::circuits::{CircuitLevel, CircuitSession, CircuitStatus};
use qubitquest_core::content::AnyLevel;
use qubitquest_core::entanglement::{Action, EntanglementLevel, EntanglementSession, EntanglementStatus};
use qubitquest_core::quantum::{bloch_coordinates, BlochPoint, Complex, Gate, StateVector};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub lines: Vec<String>,
    /// Final status word: `Won`, `Failed`, `Exhausted` or `InProgress`.
    pub status: String,
    pub score: Option<u32>,
}

impl Transcript {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        out
    }
}

fn script_lines(script: &str) -> impl Iterator<Item = (usize, &str)> {
    script.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn num(x: f64) -> String {
    if x.abs() < 5e-4 {
        "0.000".into()
    } else {
        format!("{x:.3}")
    }
}

fn point(p: BlochPoint) -> String {
    format!("({}, {}, {})", num(p.x), num(p.y), num(p.z))
}

fn complex(z: Complex) -> String {
    let re = num(z.re);
    let im = num(z.im.abs());
    let sign = if z.im < 0.0 && im != "0.000" { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

fn state(s: &StateVector) -> String {
    let parts: Vec<String> = s.amplitudes().iter().map(|&z| complex(z)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn simulate(level: &AnyLevel, script: &str) -> Result<Transcript, ScriptError> {
    match level {
        AnyLevel::Bloch(l) => simulate_bloch(l, script),
        AnyLevel::Entanglement(l) => simulate_entanglement(l, script),
        AnyLevel::Circuits(l) => simulate_circuits(l, script),
    }
}

fn simulate_bloch(level: &BlochLevel, script: &str) -> Result<Transcript, ScriptError> {
    let pos = |s: &StateVector| bloch_coordinates(s).map(point).unwrap_or_default();
    let mut lines = vec![
        format!("bloch level {}", level.id),
        format!("start {} at {}", state(&level.start_state), pos(&level.start_state)),
        format!("target {} at {}", state(&level.target_state), pos(&level.target_state)),
    ];
    let mut session = BlochSession::start(level);
    for (n, (line_no, text)) in script_lines(script).enumerate() {
        let n = n + 1;
        if text.eq_ignore_ascii_case("reset") {
            session = BlochSession::start(level);
            lines.push(format!("move {n}: reset -> {}", pos(&session.current_state)));
            continue;
        }
        let gate: Gate = text.parse().map_err(|e: qubitquest_core::quantum::QuantumError| ScriptError {
            line: line_no,
            message: e.to_string(),
        })?;
        match session.apply(level, gate) {
            Ok(next) => {
                session = next;
                lines.push(format!(
                    "move {n}: {gate} -> {} at {} {:?}",
                    state(&session.current_state),
                    pos(&session.current_state),
                    session.status
                ));
            }
            Err(e) => lines.push(format!("move {n}: {gate} rejected: {e}")),
        }
    }
    let score = session.score(level).ok();
    let status = format!("{:?}", session.status);
    lines.push(match score {
        Some(s) => format!("{status}, score {s}"),
        None => format!("{status} after {} moves", session.moves.len()),
    });
    Ok(Transcript { lines, status, score })
}

fn simulate_entanglement(level: &EntanglementLevel, script: &str) -> Result<Transcript, ScriptError> {
    let mut lines = vec![format!(
        "entanglement level {} ({:?}, decoherence {}, {} obstacles)",
        level.id,
        level.mode,
        if level.decoherence_enabled { "on" } else { "off" },
        level.len()
    )];
    let mut session = EntanglementSession::start(level);
    for (n, (line_no, text)) in script_lines(script).enumerate() {
        let n = n + 1;
        let action: Action = text.parse().map_err(|e: qubitquest_core::entanglement::EntanglementError| ScriptError {
            line: line_no,
            message: e.to_string(),
        })?;
        match session.step(level, action) {
            Ok(next) => {
                session = next;
                let out = session.last_outcome.expect("step records an outcome");
                lines.push(format!(
                    "move {n}: A {} B {} -> {} position {}/{} decoherence {} wrong {} {:?}",
                    out.cat_a_action,
                    out.cat_b_action,
                    if out.synced { "synced" } else { "missed" },
                    session.position,
                    level.len(),
                    session.decoherence,
                    session.wrong_count,
                    session.status
                ));
            }
            Err(e) => lines.push(format!("move {n}: {action} rejected: {e}")),
        }
    }
    let score = session.score(level).ok();
    let status = format!("{:?}", session.status);
    lines.push(match (session.status, score) {
        (EntanglementStatus::Won, Some(s)) => {
            format!("{status}, score {s}, wrong_count {}", session.wrong_count)
        }
        _ => format!(
            "{status}, synced_count {}, wrong_count {}, decoherence {}",
            session.synced_count, session.wrong_count, session.decoherence
        ),
    });
    Ok(Transcript { lines, status, score })
}

fn parse_usize(tok: Option<&str>, what: &str, line: usize) -> Result<usize, ScriptError> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| ScriptError {
        line,
        message: format!("expected {what}"),
    })
}

fn parse_opt_usize(tok: Option<&str>, what: &str, line: usize) -> Result<Option<usize>, ScriptError> {
    tok.map(|t| parse_usize(Some(t), what, line)).transpose()
}

fn simulate_circuits(level: &CircuitLevel, script: &str) -> Result<Transcript, ScriptError> {
    let mut lines = vec![format!(
        "circuits level {} (penalty {}, {} columns)",
        level.id,
        if level.penalty_enabled { "on" } else { "off" },
        level.max_columns
    )];
    let mut session = CircuitSession::start(level);
    for (n, (line_no, text)) in script_lines(script).enumerate() {
        let n = n + 1;
        let mut toks = text.split_whitespace();
        let verb = toks.next().unwrap_or("").to_ascii_lowercase();
        let result = match verb.as_str() {
            "place" => {
                let gate: Gate = toks
                    .next()
                    .ok_or_else(|| ScriptError { line: line_no, message: "expected a gate".into() })?
                    .parse()
                    .map_err(|e: qubitquest_core::quantum::QuantumError| ScriptError {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                let column = parse_usize(toks.next(), "a column", line_no)?;
                let wire = parse_opt_usize(toks.next(), "a wire", line_no)?;
                session.place_gate(level, gate, column, wire)
            }
            "remove" => {
                let column = parse_usize(toks.next(), "a column", line_no)?;
                let wire = parse_usize(toks.next(), "a wire", line_no)?;
                session.remove_gate(level, column, wire)
            }
            "move" => {
                let from_col = parse_usize(toks.next(), "a column", line_no)?;
                let from_wire = parse_usize(toks.next(), "a wire", line_no)?;
                let to_col = parse_usize(toks.next(), "a target column", line_no)?;
                let to_wire = parse_opt_usize(toks.next(), "a target wire", line_no)?;
                session.move_gate(level, (from_col, from_wire), to_col, to_wire)
            }
            "reset" => Ok(CircuitSession::start(level)),
            other => {
                return Err(ScriptError {
                    line: line_no,
                    message: format!("unknown circuit command {other:?}"),
                })
            }
        };
        match result.and_then(|s| s.check_win(level)) {
            Ok((next, _)) => {
                session = next;
                lines.push(format!(
                    "move {n}: {text} -> fish {} points {} outfit {} gates {} {:?}",
                    session.fish.fish_remaining,
                    session.fish.points_remaining,
                    session.fish.outfit_stage,
                    session.placement_count(),
                    session.status
                ));
            }
            Err(e) => lines.push(format!("move {n}: {text} rejected: {e}")),
        }
    }
    let score = session.score().ok();
    let status = format!("{:?}", session.status);
    lines.push(match (session.status, score) {
        (CircuitStatus::Won, Some(s)) => format!("{status}, score {s}"),
        _ => status.clone(),
    });
    Ok(Transcript { lines, status, score })
}
