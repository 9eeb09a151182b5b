//! Breadth-first search for shortest solutions.
//!
//! Bloch levels search gate sequences, deduplicating states after removing
//! the global phase and rounding to a 1e-6 grid. Circuit levels search
//! grids column by column; since the circuit matrix must match exactly,
//! matrices are deduplicated without phase normalization. Among solutions
//! with the fewest columns, the one with the fewest gates wins.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use qubitquest_core::bloch::{BlochLevel, BlochSession, BlochStatus};
use qubitquest_core::circuits::{CircuitLevel, CircuitSession, CircuitStatus, Column};
use qubitquest_core::content::AnyLevel;
use qubitquest_core::entanglement::{
    validate_level, Action, EntanglementLevel, EntanglementSession, EntanglementStatus,
};
use qubitquest_core::quantum::{
    apply_gate, equal_up_to_global_phase, Complex, Gate, GateKind, StateVector, UnitaryMatrix,
    PLAYER_TOLERANCE,
};

pub const DEFAULT_MAX_DEPTH: usize = 8;
/// Grid spacing used when hashing states and matrices.
pub const DEDUP_RESOLUTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Bloch(Vec<Gate>),
    Entanglement(Vec<Action>),
    Circuits(Vec<Column>),
}

impl Solution {
    /// Moves for Bloch and entanglement levels, columns for circuit levels.
    pub fn len(&self) -> usize {
        match self {
            Solution::Bloch(g) => g.len(),
            Solution::Entanglement(a) => a.len(),
            Solution::Circuits(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Solution::Bloch(gates) => gates.iter().map(Gate::to_string).collect(),
            Solution::Entanglement(actions) => actions.iter().map(Action::to_string).collect(),
            Solution::Circuits(columns) => columns
                .iter()
                .map(|c| {
                    let ps: Vec<String> = c.placements().iter().map(ToString::to_string).collect();
                    ps.join(" + ")
                })
                .collect(),
        };
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no solution within depth {max_depth}")]
    NotFound { max_depth: usize },
    #[error("level is unsolvable: {}", .0.join("; "))]
    Unsolvable(Vec<String>),
    #[error("solver result failed engine replay: {0}")]
    ReplayMismatch(String),
}

pub fn solve(level: &AnyLevel, max_depth: usize) -> Result<Solution, SolveError> {
    match level {
        AnyLevel::Bloch(l) => solve_bloch(l, max_depth).map(Solution::Bloch),
        AnyLevel::Entanglement(l) => solve_entanglement(l).map(Solution::Entanglement),
        AnyLevel::Circuits(l) => solve_circuit(l, max_depth).map(Solution::Circuits),
    }
}

fn round_key(values: impl Iterator<Item = Complex>) -> Vec<(i64, i64)> {
    values
        .map(|z| {
            (
                (z.re / DEDUP_RESOLUTION).round() as i64,
                (z.im / DEDUP_RESOLUTION).round() as i64,
            )
        })
        .collect()
}

/// Hash key for a state with its global phase removed: the first
/// non-negligible amplitude is rotated onto the positive real axis.
pub fn phase_normalized_key(state: &StateVector) -> Vec<(i64, i64)> {
    let amps = state.amplitudes();
    let phase = amps
        .iter()
        .find(|a| a.norm() > 1e-3)
        .map(|a| a.conj() / a.norm())
        .unwrap_or(Complex::new(1.0, 0.0));
    round_key(amps.iter().map(|a| a * phase))
}

fn matrix_key(m: &UnitaryMatrix) -> Vec<(i64, i64)> {
    round_key(m.entries().iter().copied())
}

fn single_qubit_roster(allowed: &[GateKind]) -> Vec<Gate> {
    Gate::SINGLE_QUBIT
        .into_iter()
        .filter(|g| allowed.contains(&g.kind()))
        .collect()
}

/// Shortest gate sequence taking the start state to the target.
pub fn solve_bloch(level: &BlochLevel, max_depth: usize) -> Result<Vec<Gate>, SolveError> {
    let gates = single_qubit_roster(&level.allowed_gates);
    let solution = bfs_bloch(&level.start_state, &level.target_state, &gates, max_depth)
        .ok_or(SolveError::NotFound { max_depth })?;
    let mut session = BlochSession::start(level);
    for &g in &solution {
        session = session
            .apply(level, g)
            .map_err(|e| SolveError::ReplayMismatch(e.to_string()))?;
    }
    let won = session.status == BlochStatus::Won || (solution.is_empty() && is_goal(&level.start_state, level));
    if !won {
        return Err(SolveError::ReplayMismatch("replayed session did not win".into()));
    }
    Ok(solution)
}

fn is_goal(state: &StateVector, level: &BlochLevel) -> bool {
    equal_up_to_global_phase(state, &level.target_state, PLAYER_TOLERANCE).unwrap_or(false)
}

fn bfs_bloch(start: &StateVector, target: &StateVector, gates: &[Gate], max_depth: usize) -> Option<Vec<Gate>> {
    let reached = |s: &StateVector| equal_up_to_global_phase(s, target, PLAYER_TOLERANCE).unwrap_or(false);
    if reached(start) {
        return Some(Vec::new());
    }
    // Arena of (state, parent index, gate that produced it).
    let mut nodes: Vec<(StateVector, Option<usize>, Option<Gate>)> = vec![(start.clone(), None, None)];
    let mut seen: HashMap<Vec<(i64, i64)>, usize> = HashMap::from([(phase_normalized_key(start), 0)]);
    let mut frontier = vec![0usize];
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            for &g in gates {
                let Ok(state) = apply_gate(&nodes[idx].0, g, None) else {
                    continue;
                };
                let key = phase_normalized_key(&state);
                if seen.contains_key(&key) {
                    continue;
                }
                let done = reached(&state);
                nodes.push((state, Some(idx), Some(g)));
                let new_idx = nodes.len() - 1;
                seen.insert(key, new_idx);
                if done {
                    let mut path = Vec::new();
                    let mut cur = new_idx;
                    while let (_, Some(parent), Some(gate)) = &nodes[cur] {
                        path.push(*gate);
                        cur = *parent;
                    }
                    path.reverse();
                    return Some(path);
                }
                next.push(new_idx);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

/// Every non-empty column buildable from the allowed gates, single gates
/// first so that ties favor sparser grids.
pub fn candidate_columns(allowed: &[GateKind]) -> Vec<Column> {
    let singles = single_qubit_roster(allowed);
    let mut out = Vec::new();
    for wire in 0..2 {
        for &g in &singles {
            let mut slots = [None, None];
            slots[wire] = Some(g);
            out.push(Column::Singles(slots));
        }
    }
    if allowed.contains(&GateKind::Cnot) {
        out.push(Column::Controlled { control: 0, target: 1 });
        out.push(Column::Controlled { control: 1, target: 0 });
    }
    for &a in &singles {
        for &b in &singles {
            out.push(Column::Singles([Some(a), Some(b)]));
        }
    }
    out
}

struct GridNode {
    matrix: UnitaryMatrix,
    parent: Option<usize>,
    column: Option<Column>,
    placements: usize,
}

/// Fewest columns (then fewest gates) reproducing the target matrix and
/// output state, within `min(max_depth, max_columns)` columns.
pub fn solve_circuit(level: &CircuitLevel, max_depth: usize) -> Result<Vec<Column>, SolveError> {
    let limit = max_depth.min(level.max_columns);
    let columns: Vec<(Column, UnitaryMatrix, usize)> = candidate_columns(&level.allowed_gates)
        .into_iter()
        .filter_map(|c| c.matrix().ok().map(|m| (c, m, c.placements().len())))
        .collect();
    let is_goal = |m: &UnitaryMatrix| {
        m.approx_eq(&level.target_matrix, PLAYER_TOLERANCE)
            && m.apply(&level.input_state)
                .is_ok_and(|s| s.approx_eq(&level.target_state, PLAYER_TOLERANCE))
    };

    let identity = UnitaryMatrix::identity(4).expect("4 is a supported dimension");
    let solution = if is_goal(&identity) {
        Some(Vec::new())
    } else {
        let mut nodes = vec![GridNode {
            matrix: identity.clone(),
            parent: None,
            column: None,
            placements: 0,
        }];
        let mut seen: HashMap<Vec<(i64, i64)>, usize> = HashMap::from([(matrix_key(&identity), 0)]);
        let mut frontier = vec![0usize];
        let mut found = None;
        for _ in 0..limit {
            let layer_start = nodes.len();
            for &idx in &frontier {
                for (col, op, cost) in &columns {
                    let Ok(m) = op.mul(&nodes[idx].matrix) else {
                        continue;
                    };
                    let placements = nodes[idx].placements + cost;
                    let key = matrix_key(&m);
                    match seen.get(&key) {
                        // Same layer, cheaper path: re-parent.
                        Some(&existing) if existing >= layer_start => {
                            if placements < nodes[existing].placements {
                                let node = &mut nodes[existing];
                                node.parent = Some(idx);
                                node.column = Some(*col);
                                node.placements = placements;
                            }
                        }
                        Some(_) => {}
                        None => {
                            nodes.push(GridNode {
                                matrix: m,
                                parent: Some(idx),
                                column: Some(*col),
                                placements,
                            });
                            seen.insert(key, nodes.len() - 1);
                        }
                    }
                }
            }
            let layer: Vec<usize> = (layer_start..nodes.len()).collect();
            found = layer
                .iter()
                .copied()
                .filter(|&i| is_goal(&nodes[i].matrix))
                .min_by_key(|&i| (nodes[i].placements, i));
            if found.is_some() || layer.is_empty() {
                break;
            }
            frontier = layer;
        }
        found.map(|mut cur| {
            let mut path = Vec::new();
            while let (Some(parent), Some(col)) = (nodes[cur].parent, nodes[cur].column) {
                path.push(col);
                cur = parent;
            }
            path.reverse();
            path
        })
    };
    let solution = solution.ok_or(SolveError::NotFound { max_depth: limit })?;

    let mut session = CircuitSession::start(level);
    for (i, col) in solution.iter().enumerate() {
        for p in col.placements() {
            session = session
                .place_gate(level, p.gate, i, p.wire)
                .map_err(|e| SolveError::ReplayMismatch(e.to_string()))?;
        }
    }
    let (session, won) = session
        .check_win(level)
        .map_err(|e| SolveError::ReplayMismatch(e.to_string()))?;
    if !won || session.status != CircuitStatus::Won {
        return Err(SolveError::ReplayMismatch("replayed grid did not win".into()));
    }
    Ok(solution)
}

/// Entanglement levels need no search: the perfect run clears a valid
/// course. Invalid courses are reported instead.
pub fn solve_entanglement(level: &EntanglementLevel) -> Result<Vec<Action>, SolveError> {
    let violations = validate_level(level);
    if !violations.is_empty() {
        return Err(SolveError::Unsolvable(violations.iter().map(ToString::to_string).collect()));
    }
    let run = level.perfect_run();
    let mut session = EntanglementSession::start(level);
    for &a in &run {
        session = session
            .step(level, a)
            .map_err(|e| SolveError::ReplayMismatch(e.to_string()))?;
    }
    if session.status != EntanglementStatus::Won || session.wrong_count != 0 {
        return Err(SolveError::ReplayMismatch("perfect run did not win cleanly".into()));
    }
    Ok(run)
}
