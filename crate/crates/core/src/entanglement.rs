//! Entangled-cats agility course.
//!
//! The player drives cat A; cat B performs the partner action, which is the
//! same action on correlated levels and the paired opposite on
//! anti-correlated ones. Play is turn-wise: one action is one attempt at the
//! next obstacle by both cats.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{LEVELS_PER_GAME, MAX_LEVEL_SCORE};

pub const DECOHERENCE_MAX: u8 = 100;
pub const DECOHERENCE_WRONG_DELTA: u8 = 20;
pub const DECOHERENCE_SYNCED_DELTA: u8 = 10;
/// First level id played in anti-correlated mode.
pub const FIRST_ANTI_CORRELATED_LEVEL: u8 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntanglementError {
    #[error("the level is over ({0:?})")]
    Finished(EntanglementStatus),
    #[error("the level is not won yet")]
    NotWon,
    #[error("session belongs to level {session}, not level {level}")]
    LevelMismatch { session: u8, level: u8 },
    #[error("unknown action {0:?}")]
    UnknownAction(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Jump,
    Crawl,
    Balance,
    Weave,
    Climb,
    Pause,
}

impl Action {
    pub const ALL: [Action; 6] = [
        Action::Jump,
        Action::Crawl,
        Action::Balance,
        Action::Weave,
        Action::Climb,
        Action::Pause,
    ];

    /// Jump–Crawl, Balance–Weave, Climb–Pause.
    pub fn opposite(self) -> Action {
        match self {
            Action::Jump => Action::Crawl,
            Action::Crawl => Action::Jump,
            Action::Balance => Action::Weave,
            Action::Weave => Action::Balance,
            Action::Climb => Action::Pause,
            Action::Pause => Action::Climb,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Action {
    type Err = EntanglementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Action::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EntanglementError::UnknownAction(s.trim().to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Correlated,
    AntiCorrelated,
}

impl Mode {
    /// Mode a level id must use.
    pub fn for_level(id: u8) -> Mode {
        if id >= FIRST_ANTI_CORRELATED_LEVEL {
            Mode::AntiCorrelated
        } else {
            Mode::Correlated
        }
    }
}

pub fn partner_action(action: Action, mode: Mode) -> Action {
    match mode {
        Mode::Correlated => action,
        Mode::AntiCorrelated => action.opposite(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub required_action: Action,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntanglementLevel {
    pub id: u8,
    pub course_a: Vec<Obstacle>,
    pub course_b: Vec<Obstacle>,
    pub mode: Mode,
    pub decoherence_enabled: bool,
    pub wrong_move_limit: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intro_popup: Option<String>,
}

impl EntanglementLevel {
    pub fn len(&self) -> usize {
        self.course_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.course_a.is_empty()
    }

    /// The action sequence that clears every obstacle first try.
    pub fn perfect_run(&self) -> Vec<Action> {
        self.course_a.iter().map(|o| o.required_action).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    IdOutOfRange(u8),
    EmptyCourse,
    LengthMismatch { course_a: usize, course_b: usize },
    WrongMode { expected: Mode, found: Mode },
    Unsolvable { index: usize, cat_a: Action, cat_b: Action },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdOutOfRange(id) => write!(f, "level id {id} outside 1..={LEVELS_PER_GAME}"),
            Violation::EmptyCourse => f.write_str("course has no obstacles"),
            Violation::LengthMismatch { course_a, course_b } => {
                write!(f, "course lengths differ ({course_a} vs {course_b})")
            }
            Violation::WrongMode { expected, found } => {
                write!(f, "mode {found:?} but this level index requires {expected:?}")
            }
            Violation::Unsolvable { index, cat_a, cat_b } => write!(
                f,
                "obstacle {index}: cat B needs {cat_b} but cat A's {cat_a} makes it do something else"
            ),
        }
    }
}

pub fn validate_level(level: &EntanglementLevel) -> Vec<Violation> {
    let mut out = Vec::new();
    if level.id == 0 || level.id > LEVELS_PER_GAME {
        out.push(Violation::IdOutOfRange(level.id));
    }
    if level.course_a.is_empty() || level.course_b.is_empty() {
        out.push(Violation::EmptyCourse);
    }
    if level.course_a.len() != level.course_b.len() {
        out.push(Violation::LengthMismatch {
            course_a: level.course_a.len(),
            course_b: level.course_b.len(),
        });
    }
    let expected = Mode::for_level(level.id);
    if level.mode != expected {
        out.push(Violation::WrongMode {
            expected,
            found: level.mode,
        });
    }
    for (index, (a, b)) in level.course_a.iter().zip(&level.course_b).enumerate() {
        if partner_action(a.required_action, level.mode) != b.required_action {
            out.push(Violation::Unsolvable {
                index,
                cat_a: a.required_action,
                cat_b: b.required_action,
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntanglementStatus {
    InProgress,
    Won,
    Failed,
}

/// What happened on the most recent step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub cat_a_action: Action,
    pub cat_b_action: Action,
    pub cat_a_cleared: bool,
    pub cat_b_cleared: bool,
    pub synced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglementSession {
    pub level_id: u8,
    pub position: usize,
    pub synced_count: u32,
    pub wrong_count: u32,
    pub decoherence: u8,
    pub status: EntanglementStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_outcome: Option<StepOutcome>,
}

impl EntanglementSession {
    pub fn start(level: &EntanglementLevel) -> Self {
        EntanglementSession {
            level_id: level.id,
            position: 0,
            synced_count: 0,
            wrong_count: 0,
            decoherence: 0,
            status: EntanglementStatus::InProgress,
            last_outcome: None,
        }
    }

    /// One attempt at the next obstacle. Only cat A is ever controlled.
    pub fn step(&self, level: &EntanglementLevel, action: Action) -> Result<Self, EntanglementError> {
        self.check_level(level)?;
        if self.status != EntanglementStatus::InProgress {
            return Err(EntanglementError::Finished(self.status));
        }
        let mut next = self.clone();
        let cat_b_action = partner_action(action, level.mode);
        let cat_a_cleared = level
            .course_a
            .get(self.position)
            .is_some_and(|o| o.required_action == action);
        let cat_b_cleared = level
            .course_b
            .get(self.position)
            .is_some_and(|o| o.required_action == cat_b_action);
        let synced = cat_a_cleared && cat_b_cleared;
        next.last_outcome = Some(StepOutcome {
            cat_a_action: action,
            cat_b_action,
            cat_a_cleared,
            cat_b_cleared,
            synced,
        });

        if synced {
            next.position += 1;
            next.synced_count += 1;
            next.decoherence = next.decoherence.saturating_sub(DECOHERENCE_SYNCED_DELTA);
            if next.position >= level.len() {
                next.status = EntanglementStatus::Won;
            }
        } else {
            next.wrong_count += 1;
            if level.decoherence_enabled {
                next.decoherence = next
                    .decoherence
                    .saturating_add(DECOHERENCE_WRONG_DELTA)
                    .min(DECOHERENCE_MAX);
                if next.decoherence >= DECOHERENCE_MAX {
                    next.status = EntanglementStatus::Failed;
                }
            } else if next.wrong_count > level.wrong_move_limit {
                next.status = EntanglementStatus::Failed;
            }
        }
        Ok(next)
    }

    /// `round_half_up(10 · synced / (synced + wrong))`, at least 1.
    pub fn score(&self, level: &EntanglementLevel) -> Result<u32, EntanglementError> {
        self.check_level(level)?;
        if self.status != EntanglementStatus::Won {
            return Err(EntanglementError::NotWon);
        }
        let attempts = u64::from(self.synced_count) + u64::from(self.wrong_count);
        if attempts == 0 {
            return Ok(MAX_LEVEL_SCORE);
        }
        let scaled = 2 * u64::from(MAX_LEVEL_SCORE) * u64::from(self.synced_count);
        let rounded = (scaled + attempts) / (2 * attempts);
        Ok((rounded as u32).max(1))
    }

    fn check_level(&self, level: &EntanglementLevel) -> Result<(), EntanglementError> {
        if self.level_id != level.id {
            return Err(EntanglementError::LevelMismatch {
                session: self.level_id,
                level: level.id,
            });
        }
        Ok(())
    }
}
