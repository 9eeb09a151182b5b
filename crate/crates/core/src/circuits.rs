//! Two-qubit circuit mini-game.
//!
//! The player places gates on a two-wire grid until both the composed
//! circuit matrix and the resulting output state match the level targets.
//! From level 2 on, every removal costs the cat a fish and a point.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::quantum::{
    classify_entry, classify_matrix, gate_matrix, ColorClass, Gate, GateKind, QuantumError, StateVector,
    UnitaryMatrix, NORM_TOLERANCE, PLAYER_TOLERANCE,
};
use crate::{LEVELS_PER_GAME, MAX_LEVEL_SCORE};

pub const STARTING_FISH: u8 = 9;
pub const FISH_PER_OUTFIT_PIECE: u8 = 3;
/// First level on which removals are penalized.
pub const FIRST_PENALTY_LEVEL: u8 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gate {0} is not allowed on this level")]
    GateNotAllowed(Gate),
    #[error("column {column} is beyond the last column ({max_columns} available)")]
    ColumnOverflow { column: usize, max_columns: usize },
    #[error("slot at column {column}, wire {wire} is already occupied")]
    Occupied { column: usize, wire: usize },
    #[error("slot at column {column}, wire {wire} is empty")]
    EmptySlot { column: usize, wire: usize },
    #[error("invalid placement: {0}")]
    BadPlacement(String),
    #[error("the level is over ({0:?})")]
    Finished(CircuitStatus),
    #[error("the level is not won yet")]
    NotWon,
    #[error("session belongs to level {session}, not level {level}")]
    LevelMismatch { session: u8, level: u8 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A gate at a position within one column. `wire` is absent for CNOT.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub gate: Gate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wire: Option<usize>,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.wire {
            Some(w) => write!(f, "{}@{}", self.gate, w),
            None => write!(f, "{}", self.gate),
        }
    }
}

/// One time step of the grid: up to one single-qubit gate per wire, or a
/// CNOT spanning both wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Column {
    #[default]
    Empty,
    Singles([Option<Gate>; 2]),
    Controlled { control: usize, target: usize },
}

impl Column {
    pub fn is_empty(&self) -> bool {
        matches!(self, Column::Empty | Column::Singles([None, None]))
    }

    pub fn placements(&self) -> Vec<Placement> {
        match *self {
            Column::Empty => Vec::new(),
            Column::Singles(slots) => slots
                .iter()
                .enumerate()
                .filter_map(|(w, g)| g.map(|gate| Placement { gate, wire: Some(w) }))
                .collect(),
            Column::Controlled { control, target } => vec![Placement {
                gate: Gate::Cnot { control, target },
                wire: None,
            }],
        }
    }

    pub fn from_placements(placements: &[Placement]) -> Result<Column, CircuitError> {
        let mut column = Column::Empty;
        for p in placements {
            column = column.with(*p)?;
        }
        Ok(column)
    }

    fn with(self, p: Placement) -> Result<Column, CircuitError> {
        match (p.gate, p.wire) {
            (Gate::Cnot { control, target }, None) => {
                if control > 1 || target > 1 || control == target {
                    return Err(CircuitError::BadPlacement(format!("{} needs distinct wires 0 and 1", p.gate)));
                }
                if !self.is_empty() {
                    return Err(CircuitError::Occupied { column: 0, wire: control });
                }
                Ok(Column::Controlled { control, target })
            }
            (Gate::Cnot { .. }, Some(_)) => {
                Err(CircuitError::BadPlacement("CNOT spans both wires and takes no wire index".into()))
            }
            (_, None) => Err(CircuitError::BadPlacement(format!("{} needs a wire index", p.gate))),
            (gate, Some(wire)) if wire > 1 => {
                Err(CircuitError::BadPlacement(format!("wire {wire} out of range for {gate}")))
            }
            (gate, Some(wire)) => {
                let mut slots = match self {
                    Column::Empty => [None, None],
                    Column::Singles(slots) => slots,
                    Column::Controlled { .. } => return Err(CircuitError::Occupied { column: 0, wire }),
                };
                if slots[wire].is_some() {
                    return Err(CircuitError::Occupied { column: 0, wire });
                }
                slots[wire] = Some(gate);
                Ok(Column::Singles(slots))
            }
        }
    }

    /// 4×4 operator for this column; an empty column is the identity.
    pub fn matrix(&self) -> Result<UnitaryMatrix, QuantumError> {
        match *self {
            Column::Empty | Column::Singles([None, None]) => UnitaryMatrix::identity(4),
            Column::Singles([a, b]) => {
                let side = |g: Option<Gate>| match g {
                    Some(g) => gate_matrix(g, 1),
                    None => UnitaryMatrix::identity(2),
                };
                side(a)?.kron(&side(b)?)
            }
            Column::Controlled { control, target } => gate_matrix(Gate::Cnot { control, target }, 2),
        }
    }
}

impl Serialize for Column {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.placements().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Column {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let placements = Vec::<Placement>::deserialize(deserializer)?;
        Column::from_placements(&placements).map_err(D::Error::custom)
    }
}

/// Composes columns left to right into one 4×4 unitary.
pub fn compose_columns(columns: &[Column]) -> Result<UnitaryMatrix, QuantumError> {
    let mut acc = UnitaryMatrix::identity(4)?;
    for column in columns {
        if column.is_empty() {
            continue;
        }
        acc = column.matrix()?.mul(&acc)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitLevel {
    pub id: u8,
    pub input_state: StateVector,
    pub target_matrix: UnitaryMatrix,
    pub target_state: StateVector,
    pub allowed_gates: Vec<GateKind>,
    pub max_columns: usize,
    pub penalty_enabled: bool,
    /// Fewest columns the solver needs to build the target.
    pub min_solution_length: usize,
    /// Author's reference solution, column by column.
    pub solution: Vec<Column>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intro_popup: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gate_tooltips: BTreeMap<GateKind, String>,
}

impl CircuitLevel {
    pub fn allows(&self, gate: Gate) -> bool {
        self.allowed_gates.contains(&gate.kind())
    }

    /// Structural checks that don't need a search: state consistency,
    /// penalty rule, and the reference solution actually winning.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.id == 0 || self.id > LEVELS_PER_GAME {
            out.push(format!("level id {} outside 1..={LEVELS_PER_GAME}", self.id));
        }
        if self.input_state.num_qubits() != 2 || self.target_state.num_qubits() != 2 {
            out.push("input and target states must be two-qubit states".into());
        }
        if self.target_matrix.dim() != 4 {
            out.push("target matrix must be 4×4".into());
        }
        if out.is_empty() {
            match self.target_matrix.apply(&self.input_state) {
                Ok(expected) if expected.approx_eq(&self.target_state, NORM_TOLERANCE) => {}
                Ok(_) => out.push("target_state is not target_matrix · input_state".into()),
                Err(e) => out.push(e.to_string()),
            }
        }
        let expected_penalty = self.id >= FIRST_PENALTY_LEVEL;
        if self.penalty_enabled != expected_penalty {
            out.push(format!(
                "penalty_enabled must be {expected_penalty} on level {}",
                self.id
            ));
        }
        if self.max_columns == 0 {
            out.push("max_columns must be at least 1".into());
        }
        if self.solution.len() > self.max_columns {
            out.push(format!(
                "reference solution uses {} columns but only {} are available",
                self.solution.len(),
                self.max_columns
            ));
        }
        for p in self.solution.iter().flat_map(Column::placements) {
            if !self.allows(p.gate) {
                out.push(format!("reference solution uses disallowed gate {}", p.gate));
            }
        }
        if out.is_empty() {
            match CircuitSession::from_solution(self) {
                Ok(s) if s.is_solved(self).unwrap_or(false) => {}
                Ok(_) => out.push("reference solution does not match both targets".into()),
                Err(e) => out.push(format!("reference solution: {e}")),
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FishState {
    pub fish_remaining: u8,
    pub points_remaining: u8,
    pub outfit_stage: u8,
}

impl FishState {
    pub fn full() -> Self {
        Self::with_fish(STARTING_FISH)
    }

    pub fn with_fish(fish_remaining: u8) -> Self {
        let lost = STARTING_FISH - fish_remaining.min(STARTING_FISH);
        FishState {
            fish_remaining: STARTING_FISH - lost,
            points_remaining: (MAX_LEVEL_SCORE as u8 - lost).max(1),
            outfit_stage: lost / FISH_PER_OUTFIT_PIECE,
        }
    }

    pub fn lose_one(self) -> Self {
        Self::with_fish(self.fish_remaining.saturating_sub(1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircuitStatus {
    InProgress,
    Won,
    /// Out of fish; the player is prompted to retry the level.
    Exhausted,
}

/// What the player sees after every edit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub circuit_matrix: UnitaryMatrix,
    pub output_state: StateVector,
    pub colored_matrix: Vec<Vec<ColorClass>>,
    pub colored_output: Vec<ColorClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSession {
    pub level_id: u8,
    pub columns: Vec<Column>,
    pub fish: FishState,
    pub removals: u32,
    pub status: CircuitStatus,
}

impl CircuitSession {
    pub fn start(level: &CircuitLevel) -> Self {
        CircuitSession {
            level_id: level.id,
            columns: vec![Column::Empty; level.max_columns],
            fish: FishState::full(),
            removals: 0,
            status: CircuitStatus::InProgress,
        }
    }

    /// A session with the level's reference solution already placed.
    pub fn from_solution(level: &CircuitLevel) -> Result<Self, CircuitError> {
        let mut s = Self::start(level);
        for (column, col) in level.solution.iter().enumerate() {
            for p in col.placements() {
                s = s.place_gate(level, p.gate, column, p.wire)?;
            }
        }
        Ok(s)
    }

    pub fn place_gate(
        &self,
        level: &CircuitLevel,
        gate: Gate,
        column: usize,
        wire: Option<usize>,
    ) -> Result<Self, CircuitError> {
        self.check_playable(level)?;
        if !level.allows(gate) {
            return Err(CircuitError::GateNotAllowed(gate));
        }
        let slot = self.columns.get(column).ok_or(CircuitError::ColumnOverflow {
            column,
            max_columns: level.max_columns,
        })?;
        let updated = slot.with(Placement { gate, wire }).map_err(|e| match e {
            CircuitError::Occupied { wire, .. } => CircuitError::Occupied { column, wire },
            other => other,
        })?;
        let mut next = self.clone();
        next.columns[column] = updated;
        Ok(next)
    }

    /// Removes the gate covering `(column, wire)`. A CNOT is removed by
    /// naming either of its wires.
    pub fn remove_gate(&self, level: &CircuitLevel, column: usize, wire: usize) -> Result<Self, CircuitError> {
        self.check_playable(level)?;
        let slot = *self.columns.get(column).ok_or(CircuitError::ColumnOverflow {
            column,
            max_columns: level.max_columns,
        })?;
        let cleared = match slot {
            Column::Singles(mut slots) if wire < 2 && slots[wire].is_some() => {
                slots[wire] = None;
                if slots == [None, None] {
                    Column::Empty
                } else {
                    Column::Singles(slots)
                }
            }
            Column::Controlled { control, target } if wire == control || wire == target => Column::Empty,
            _ => return Err(CircuitError::EmptySlot { column, wire }),
        };
        let mut next = self.clone();
        next.columns[column] = cleared;
        next.removals += 1;
        if level.penalty_enabled {
            next.fish = next.fish.lose_one();
            if next.fish.fish_remaining == 0 {
                next.status = CircuitStatus::Exhausted;
            }
        }
        Ok(next)
    }

    /// Moving a placed gate is a removal followed by a placement.
    pub fn move_gate(
        &self,
        level: &CircuitLevel,
        from: (usize, usize),
        to_column: usize,
        to_wire: Option<usize>,
    ) -> Result<Self, CircuitError> {
        let gate = self.columns.get(from.0).and_then(|c| {
            c.placements()
                .into_iter()
                .find(|p| p.wire.is_none_or(|w| w == from.1))
                .map(|p| p.gate)
        });
        let gate = gate.ok_or(CircuitError::EmptySlot {
            column: from.0,
            wire: from.1,
        })?;
        let removed = self.remove_gate(level, from.0, from.1)?;
        removed.place_gate(level, gate, to_column, to_wire)
    }

    pub fn evaluate(&self, level: &CircuitLevel) -> Result<Evaluation, CircuitError> {
        self.check_level(level)?;
        let circuit_matrix = compose_columns(&self.columns)?;
        let output_state = circuit_matrix.apply(&level.input_state)?;
        let colored_matrix = classify_matrix(&circuit_matrix, PLAYER_TOLERANCE);
        let colored_output = output_state
            .amplitudes()
            .iter()
            .map(|&z| classify_entry(z, PLAYER_TOLERANCE))
            .collect();
        Ok(Evaluation {
            circuit_matrix,
            output_state,
            colored_matrix,
            colored_output,
        })
    }

    /// Whether the grid matches both targets, exactly entry-wise.
    pub fn is_solved(&self, level: &CircuitLevel) -> Result<bool, CircuitError> {
        let eval = self.evaluate(level)?;
        Ok(eval.circuit_matrix.approx_eq(&level.target_matrix, PLAYER_TOLERANCE)
            && eval.output_state.approx_eq(&level.target_state, PLAYER_TOLERANCE))
    }

    /// Checks the win condition, marking the session won when it holds.
    pub fn check_win(&self, level: &CircuitLevel) -> Result<(Self, bool), CircuitError> {
        match self.status {
            CircuitStatus::Won => return Ok((self.clone(), true)),
            CircuitStatus::Exhausted => return Ok((self.clone(), false)),
            CircuitStatus::InProgress => {}
        }
        let won = self.is_solved(level)?;
        let mut next = self.clone();
        if won {
            next.status = CircuitStatus::Won;
        }
        Ok((next, won))
    }

    pub fn score(&self) -> Result<u32, CircuitError> {
        match self.status {
            CircuitStatus::Won => Ok(u32::from(self.fish.points_remaining)),
            _ => Err(CircuitError::NotWon),
        }
    }

    pub fn placement_count(&self) -> usize {
        self.columns.iter().map(|c| c.placements().len()).sum()
    }

    fn check_playable(&self, level: &CircuitLevel) -> Result<(), CircuitError> {
        self.check_level(level)?;
        match self.status {
            CircuitStatus::InProgress => Ok(()),
            other => Err(CircuitError::Finished(other)),
        }
    }

    fn check_level(&self, level: &CircuitLevel) -> Result<(), CircuitError> {
        if self.level_id != level.id {
            return Err(CircuitError::LevelMismatch {
                session: self.level_id,
                level: level.id,
            });
        }
        Ok(())
    }
}
