//! Bloch sphere mini-game: move the cat (current state) onto the mouse
//! (target state) by applying single-qubit gates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{
    apply_gate, bloch_coordinates, equal_up_to_global_phase, BlochPoint, Gate, GateKind, QuantumError,
    StateVector, PLAYER_TOLERANCE,
};
use crate::MAX_LEVEL_SCORE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlochError {
    #[error("gate {0} is not allowed on this level")]
    GateNotAllowed(Gate),
    #[error("level is already won")]
    AlreadyWon,
    #[error("level is not won yet")]
    NotWon,
    #[error("session belongs to level {session}, not level {level}")]
    LevelMismatch { session: u8, level: u8 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochLevel {
    pub id: u8,
    pub start_state: StateVector,
    pub target_state: StateVector,
    pub allowed_gates: Vec<GateKind>,
    pub min_solution_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intro_popup: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gate_tooltips: BTreeMap<GateKind, String>,
}

impl BlochLevel {
    pub fn allows(&self, gate: Gate) -> bool {
        gate.is_single_qubit() && self.allowed_gates.contains(&gate.kind())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlochStatus {
    InProgress,
    Won,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochSession {
    pub level_id: u8,
    pub current_state: StateVector,
    pub moves: Vec<Gate>,
    pub status: BlochStatus,
}

impl BlochSession {
    /// Fresh session at the level's start state. Also serves as "reset level".
    pub fn start(level: &BlochLevel) -> Self {
        BlochSession {
            level_id: level.id,
            current_state: level.start_state.clone(),
            moves: Vec::new(),
            status: BlochStatus::InProgress,
        }
    }

    pub fn cat_position(&self) -> Result<BlochPoint, BlochError> {
        Ok(bloch_coordinates(&self.current_state)?)
    }

    pub fn apply(&self, level: &BlochLevel, gate: Gate) -> Result<BlochSession, BlochError> {
        self.check_level(level)?;
        if self.status == BlochStatus::Won {
            return Err(BlochError::AlreadyWon);
        }
        if !level.allows(gate) {
            return Err(BlochError::GateNotAllowed(gate));
        }
        let current_state = apply_gate(&self.current_state, gate, None)?;
        let won = equal_up_to_global_phase(&current_state, &level.target_state, PLAYER_TOLERANCE)?;
        let mut moves = self.moves.clone();
        moves.push(gate);
        Ok(BlochSession {
            level_id: self.level_id,
            current_state,
            moves,
            status: if won { BlochStatus::Won } else { BlochStatus::InProgress },
        })
    }

    /// `max(1, 10 − excess moves)` where excess is measured against the
    /// level's minimal solution length.
    pub fn score(&self, level: &BlochLevel) -> Result<u32, BlochError> {
        self.check_level(level)?;
        if self.status != BlochStatus::Won {
            return Err(BlochError::NotWon);
        }
        let excess = self.moves.len().saturating_sub(level.min_solution_length);
        let excess = u32::try_from(excess).unwrap_or(u32::MAX);
        Ok(MAX_LEVEL_SCORE.saturating_sub(excess).max(1))
    }

    /// Recomputes the current state from the move log.
    pub fn replay(&self, level: &BlochLevel) -> Result<StateVector, BlochError> {
        let mut state = level.start_state.clone();
        for &g in &self.moves {
            state = apply_gate(&state, g, None)?;
        }
        Ok(state)
    }

    fn check_level(&self, level: &BlochLevel) -> Result<(), BlochError> {
        if self.level_id != level.id {
            return Err(BlochError::LevelMismatch {
                session: self.level_id,
                level: level.id,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(start: StateVector, target: StateVector, min: usize) -> BlochLevel {
        BlochLevel {
            id: 1,
            start_state: start,
            target_state: target,
            allowed_gates: vec![GateKind::X, GateKind::Z, GateKind::H],
            min_solution_length: min,
            intro_popup: None,
            hint: None,
            gate_tooltips: BTreeMap::new(),
        }
    }

    fn ket(i: usize) -> StateVector {
        StateVector::basis(1, i).unwrap()
    }

    #[test]
    fn start_is_in_progress_at_start_state() {
        let lvl = level(ket(0), ket(1), 1);
        let s = BlochSession::start(&lvl);
        assert!(s.moves.is_empty());
        assert_eq!(s.status, BlochStatus::InProgress);
        let p = s.cat_position().unwrap();
        assert_eq!((p.x, p.y, p.z), (0.0, 0.0, 1.0));
    }

    #[test]
    fn x_wins_flip_level() {
        let lvl = level(ket(0), ket(1), 1);
        let s = BlochSession::start(&lvl).apply(&lvl, Gate::X).unwrap();
        assert_eq!(s.status, BlochStatus::Won);
        assert_eq!(s.score(&lvl).unwrap(), 10);
        assert_eq!(s.apply(&lvl, Gate::X).unwrap_err(), BlochError::AlreadyWon);
    }

    #[test]
    fn z_leaves_ket0_in_progress() {
        let lvl = level(ket(0), ket(1), 1);
        let s = BlochSession::start(&lvl).apply(&lvl, Gate::Z).unwrap();
        assert_eq!(s.status, BlochStatus::InProgress);
        assert_eq!(s.score(&lvl).unwrap_err(), BlochError::NotWon);
    }

    #[test]
    fn h_reaches_plus() {
        let plus = apply_gate(&ket(0), Gate::H, None).unwrap();
        let lvl = level(ket(0), plus, 1);
        let s = BlochSession::start(&lvl).apply(&lvl, Gate::H).unwrap();
        assert_eq!(s.status, BlochStatus::Won);
        let p = s.cat_position().unwrap();
        assert!((p.x - 1.0).abs() < 1e-6);
    }

    #[test]
    fn disallowed_gate_is_named() {
        let lvl = level(ket(0), ket(1), 1);
        let err = BlochSession::start(&lvl).apply(&lvl, Gate::S).unwrap_err();
        assert_eq!(err.to_string(), "gate S is not allowed on this level");
        let err = BlochSession::start(&lvl)
            .apply(&lvl, GateKind::Cnot.default_gate())
            .unwrap_err();
        assert!(matches!(err, BlochError::GateNotAllowed(_)));
    }

    #[test]
    fn score_formula() {
        let lvl = level(ket(0), ket(1), 1);
        let mut s = BlochSession::start(&lvl);
        for _ in 0..3 {
            s = s.apply(&lvl, Gate::Z).unwrap();
        }
        s = s.apply(&lvl, Gate::X).unwrap();
        assert_eq!(s.moves.len(), 4);
        assert_eq!(s.score(&lvl).unwrap(), 7);

        let mut s = BlochSession::start(&lvl);
        for _ in 0..29 {
            s = s.apply(&lvl, Gate::Z).unwrap();
        }
        s = s.apply(&lvl, Gate::X).unwrap();
        assert_eq!(s.score(&lvl).unwrap(), 1);
    }

    #[test]
    fn input_session_not_mutated() {
        let lvl = level(ket(0), ket(1), 1);
        let s0 = BlochSession::start(&lvl);
        let _ = s0.apply(&lvl, Gate::H).unwrap();
        assert_eq!(s0, BlochSession::start(&lvl));
    }
}
