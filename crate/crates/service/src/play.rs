//! Server-side game sessions: move parsing, engine dispatch, and the JSON
//! view returned after each move.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qubitquest_core::bloch::{BlochLevel, BlochSession, BlochStatus};
use qubitquest_core::circuits::{CircuitLevel, CircuitSession, CircuitStatus};
use qubitquest_core::entanglement::{Action, EntanglementLevel, EntanglementSession, EntanglementStatus};
use qubitquest_core::progression::GameId;
use qubitquest_core::quantum::{bloch_coordinates, Gate};
use qubitquest_core::Content;

use crate::error::{ApiError, ApiResult};

/// Points credited when a session is won. Kept on the session so repeat
/// views after the win show the same numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Award {
    pub raw_score: u32,
    pub awarded: u32,
    pub replay: bool,
}

#[derive(Clone, Debug)]
pub enum Play {
    Bloch(BlochSession),
    Entanglement(EntanglementSession),
    Circuits(CircuitSession),
}

#[derive(Clone, Debug)]
pub struct ActiveSession {
    pub session_id: String,
    pub game: GameId,
    pub level_id: u8,
    pub play: Play,
    pub award: Option<Award>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlochMove {
    #[serde(default)]
    gate: Option<Gate>,
    #[serde(default)]
    reset: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntanglementMove {
    action: Action,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
enum CircuitOp {
    Place {
        gate: Gate,
        column: usize,
        #[serde(default)]
        wire: Option<usize>,
    },
    Remove {
        column: usize,
        wire: usize,
    },
    Move {
        from_column: usize,
        from_wire: usize,
        to_column: usize,
        #[serde(default)]
        to_wire: Option<usize>,
    },
}

fn parse<T: for<'de> Deserialize<'de>>(body: &Value) -> ApiResult<T> {
    serde_json::from_value(body.clone()).map_err(|e| ApiError::invalid(format!("bad move: {e}")))
}

/// `session_id` may accompany any move; a stale one is rejected.
pub fn check_session_id(body: &Value, session: &ActiveSession) -> ApiResult<()> {
    match body.get("session_id").and_then(Value::as_str) {
        Some(id) if id != session.session_id => Err(ApiError::conflict(format!(
            "session {id} is no longer active for this level"
        ))),
        _ => Ok(()),
    }
}

impl ActiveSession {
    pub fn start(content: &Content, game: GameId, level_id: u8) -> ApiResult<Self> {
        let play = match game {
            GameId::Bloch => Play::Bloch(BlochSession::start(bloch_level(content, level_id)?)),
            GameId::Entanglement => Play::Entanglement(EntanglementSession::start(entanglement_level(content, level_id)?)),
            GameId::Circuits => Play::Circuits(CircuitSession::start(circuit_level(content, level_id)?)),
        };
        Ok(ActiveSession {
            session_id: uuid::Uuid::new_v4().simple().to_string(),
            game,
            level_id,
            play,
            award: None,
        })
    }

    pub fn is_won(&self) -> bool {
        match &self.play {
            Play::Bloch(s) => s.status == BlochStatus::Won,
            Play::Entanglement(s) => s.status == EntanglementStatus::Won,
            Play::Circuits(s) => s.status == CircuitStatus::Won,
        }
    }

    /// Applies one move from the request body. Returns the next session;
    /// `self` is untouched on error.
    pub fn apply(&self, content: &Content, body: &Value) -> ApiResult<ActiveSession> {
        check_session_id(body, self)?;
        let mut body = body.clone();
        if let Some(obj) = body.as_object_mut() {
            obj.remove("session_id");
        }
        let body = &body;
        let play = match &self.play {
            Play::Bloch(s) => {
                let level = bloch_level(content, self.level_id)?;
                let m: BlochMove = parse(body)?;
                match (m.gate, m.reset) {
                    (None, true) if s.status == BlochStatus::Won => {
                        return Err(ApiError::conflict("the level is already won"))
                    }
                    (None, true) => Play::Bloch(BlochSession::start(level)),
                    (Some(gate), false) => Play::Bloch(s.apply(level, gate)?),
                    _ => return Err(ApiError::invalid("bad move: give exactly one of gate or reset")),
                }
            }
            Play::Entanglement(s) => {
                let level = entanglement_level(content, self.level_id)?;
                let m: EntanglementMove = parse(body)?;
                Play::Entanglement(s.step(level, m.action)?)
            }
            Play::Circuits(s) => {
                let level = circuit_level(content, self.level_id)?;
                let next = match parse::<CircuitOp>(body)? {
                    CircuitOp::Place { gate, column, wire } => s.place_gate(level, gate, column, wire)?,
                    CircuitOp::Remove { column, wire } => s.remove_gate(level, column, wire)?,
                    CircuitOp::Move {
                        from_column,
                        from_wire,
                        to_column,
                        to_wire,
                    } => s.move_gate(level, (from_column, from_wire), to_column, to_wire)?,
                };
                Play::Circuits(next.check_win(level)?.0)
            }
        };
        Ok(ActiveSession {
            play,
            ..self.clone()
        })
    }

    /// Raw level score; only defined once won.
    pub fn score(&self, content: &Content) -> ApiResult<u32> {
        Ok(match &self.play {
            Play::Bloch(s) => s.score(bloch_level(content, self.level_id)?)?,
            Play::Entanglement(s) => s.score(entanglement_level(content, self.level_id)?)?,
            Play::Circuits(s) => s.score()?,
        })
    }

    pub fn view(&self, content: &Content) -> ApiResult<Value> {
        let (status, state) = match &self.play {
            Play::Bloch(s) => {
                let level = bloch_level(content, self.level_id)?;
                let mut v = to_value(s);
                v["cat_position"] = to_value(&s.cat_position()?);
                v["target_position"] = to_value(&bloch_coordinates(&level.target_state).map_err(internal)?);
                (to_value(&s.status), v)
            }
            Play::Entanglement(s) => {
                let level = entanglement_level(content, self.level_id)?;
                let mut v = to_value(s);
                v["course_length"] = json!(level.len());
                (to_value(&s.status), v)
            }
            Play::Circuits(s) => {
                let level = circuit_level(content, self.level_id)?;
                let mut v = to_value(s);
                v["evaluation"] = to_value(&s.evaluate(level)?);
                (to_value(&s.status), v)
            }
        };
        Ok(json!({
            "session_id": self.session_id,
            "game_id": self.game,
            "level_id": self.level_id,
            "status": status,
            "state": state,
            "award": self.award,
        }))
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("view serializes")
}

fn internal(e: impl std::fmt::Display) -> ApiError {
    ApiError::internal(e.to_string())
}

fn missing(game: GameId, id: u8) -> ApiError {
    ApiError::not_found(format!("{} has no level {id}", game.as_str()))
}

pub fn bloch_level(content: &Content, id: u8) -> ApiResult<&BlochLevel> {
    content.bloch_level(id).ok_or_else(|| missing(GameId::Bloch, id))
}

pub fn entanglement_level(content: &Content, id: u8) -> ApiResult<&EntanglementLevel> {
    content.entanglement_level(id).ok_or_else(|| missing(GameId::Entanglement, id))
}

pub fn circuit_level(content: &Content, id: u8) -> ApiResult<&CircuitLevel> {
    content.circuit_level(id).ok_or_else(|| missing(GameId::Circuits, id))
}
