use serde_json::{json, Map, Value};

use qubitquest_core::circuits::CircuitLevel;
use qubitquest_core::progression::{GameId, PlayerProfile};
use qubitquest_core::quantum::{
    bloch_coordinates, classify_matrix, gate_matrix, lift_single_qubit_gate, Gate, GateKind, PLAYER_TOLERANCE,
};
use qubitquest_core::{Content, LEVELS_PER_GAME};

use crate::error::{ApiError, ApiResult};
use crate::play::{bloch_level, circuit_level, entanglement_level};

pub fn is_unlocked(profile: &PlayerProfile, game: GameId) -> bool {
    game != GameId::Circuits || profile.is_circuits_unlocked()
}

pub fn require_unlocked(profile: &PlayerProfile, game: GameId) -> ApiResult<()> {
    if is_unlocked(profile, game) {
        Ok(())
    } else {
        Err(ApiError::locked(format!(
            "{} is locked until six bloch levels are complete",
            game.as_str()
        )))
    }
}

pub fn profile_view(profile: &PlayerProfile) -> Value {
    let mut v = serde_json::to_value(profile).expect("profile serializes");
    v["circuits_unlocked"] = json!(profile.is_circuits_unlocked());
    v
}

pub fn games_view(profile: &PlayerProfile) -> Value {
    let games: Vec<Value> = GameId::ALL
        .iter()
        .map(|&g| {
            json!({
                "game_id": g,
                "unlocked": is_unlocked(profile, g),
                "levels_completed": profile.completed_levels(g),
                "completed": profile.completed.get(&g).cloned().unwrap_or_default(),
                "total": LEVELS_PER_GAME,
            })
        })
        .collect();
    Value::Array(games)
}

pub fn level_view(content: &Content, game: GameId, id: u8) -> ApiResult<Value> {
    Ok(match game {
        GameId::Bloch => {
            let level = bloch_level(content, id)?;
            let mut v = serde_json::to_value(level).expect("level serializes");
            let point = |s| bloch_coordinates(s).map_err(|e| ApiError::internal(e.to_string()));
            v["start_position"] = json!(point(&level.start_state)?);
            v["target_position"] = json!(point(&level.target_state)?);
            v
        }
        GameId::Entanglement => serde_json::to_value(entanglement_level(content, id)?).expect("level serializes"),
        GameId::Circuits => circuit_view(circuit_level(content, id)?)?,
    })
}

/// The solution is never sent. Each allowed gate comes with its lifted 4×4
/// matrix per placement so tooltips can show what it does on the grid.
fn circuit_view(level: &CircuitLevel) -> ApiResult<Value> {
    let mut v = serde_json::to_value(level).expect("level serializes");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("solution");
    }
    let mut matrices = Map::new();
    for kind in &level.allowed_gates {
        let variants: Vec<(Gate, Option<usize>)> = match kind {
            GateKind::Cnot => vec![
                (Gate::Cnot { control: 0, target: 1 }, None),
                (Gate::Cnot { control: 1, target: 0 }, None),
            ],
            k => {
                let g = k.default_gate();
                vec![(g, Some(0)), (g, Some(1))]
            }
        };
        for (gate, wire) in variants {
            let m = match wire {
                Some(w) => lift_single_qubit_gate(gate, w),
                None => gate_matrix(gate, 2),
            }
            .map_err(|e| ApiError::internal(e.to_string()))?;
            let key = match wire {
                Some(w) => format!("{gate}@{w}"),
                None => gate.to_string(),
            };
            matrices.insert(
                key,
                json!({ "matrix": m, "colors": classify_matrix(&m, PLAYER_TOLERANCE) }),
            );
        }
    }
    v["gate_matrices"] = Value::Object(matrices);
    v["target_colors"] = json!(classify_matrix(&level.target_matrix, PLAYER_TOLERANCE));
    Ok(v)
}
