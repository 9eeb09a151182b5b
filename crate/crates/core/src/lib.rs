//! QubitQuest core: a small exact quantum simulator for one and two qubits
//! and the rule engines behind the three mini-games, plus player
//! progression and quizzes.
//!
//! Every engine is value-semantic: a move takes a session by reference and
//! returns the next session, so sessions can be replayed, compared and sent
//! across threads freely.

pub mod bloch;
pub mod circuits;
pub mod content;
pub mod entanglement;
pub mod progression;
pub mod quantum;
pub mod quiz;

/// Levels shipped per mini-game.
pub const LEVELS_PER_GAME: u8 = 12;
/// Points available on a single level.
pub const MAX_LEVEL_SCORE: u32 = 10;

pub use content::Content;
pub use progression::{GameId, PlayerProfile};
pub use quantum::{Gate, GateKind, StateVector, UnitaryMatrix};
