//! Player profile: points accounting, replay halving, the circuits unlock,
//! and reward unlocks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiz::QuizRecord;
use crate::{LEVELS_PER_GAME, MAX_LEVEL_SCORE};

/// Bloch levels a player must complete before the circuits game opens.
pub const CIRCUITS_UNLOCK_THRESHOLD: usize = 6;
pub const NICKNAME_MAX_CHARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgressionError {
    #[error("nickname must be 1 to {NICKNAME_MAX_CHARS} visible characters")]
    InvalidNickname,
    #[error("level {0} is outside 1..={LEVELS_PER_GAME}")]
    LevelOutOfRange(u8),
    #[error("raw score {0} is outside 0..={MAX_LEVEL_SCORE}")]
    ScoreOutOfRange(u32),
    #[error("unknown game {0:?}")]
    UnknownGame(String),
    #[error("stored total {stored} does not match ledger sum {recomputed}")]
    LedgerMismatch { stored: u64, recomputed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameId {
    Bloch,
    Entanglement,
    Circuits,
}

impl GameId {
    pub const ALL: [GameId; 3] = [GameId::Bloch, GameId::Entanglement, GameId::Circuits];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Bloch => "bloch",
            GameId::Entanglement => "entanglement",
            GameId::Circuits => "circuits",
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameId {
    type Err = ProgressionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GameId::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ProgressionError::UnknownGame(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "reward", content = "game")]
pub enum Reward {
    JesterOutfit(GameId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AwardLedgerEntry {
    pub game_id: GameId,
    pub level_id: u8,
    pub raw_score: u32,
    pub awarded: u32,
    pub replay: bool,
    pub timestamp: DateTime<Utc>,
    /// Game session that produced the award, when known. Used to refuse
    /// awarding the same session twice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerProfile {
    pub profile_id: String,
    pub nickname: String,
    pub total_points: u64,
    pub completed: BTreeMap<GameId, BTreeSet<u8>>,
    pub rewards: BTreeSet<Reward>,
    pub quiz_records: BTreeMap<String, QuizRecord>,
    pub ledger: Vec<AwardLedgerEntry>,
}

/// Trims and checks a nickname: 1–20 characters, no control characters.
pub fn normalize_nickname(raw: &str) -> Result<String, ProgressionError> {
    let trimmed = raw.trim();
    let count = trimmed.chars().count();
    if count == 0 || count > NICKNAME_MAX_CHARS || trimmed.chars().any(char::is_control) {
        return Err(ProgressionError::InvalidNickname);
    }
    Ok(trimmed.to_string())
}

impl PlayerProfile {
    pub fn new(profile_id: impl Into<String>, nickname: &str) -> Result<Self, ProgressionError> {
        Ok(PlayerProfile {
            profile_id: profile_id.into(),
            nickname: normalize_nickname(nickname)?,
            total_points: 0,
            completed: BTreeMap::new(),
            rewards: BTreeSet::new(),
            quiz_records: BTreeMap::new(),
            ledger: Vec::new(),
        })
    }

    pub fn completed_levels(&self, game: GameId) -> usize {
        self.completed.get(&game).map_or(0, BTreeSet::len)
    }

    pub fn has_completed(&self, game: GameId, level_id: u8) -> bool {
        self.completed.get(&game).is_some_and(|s| s.contains(&level_id))
    }

    pub fn has_awarded_session(&self, session_id: &str) -> bool {
        self.ledger
            .iter()
            .any(|e| e.session_id.as_deref() == Some(session_id))
    }

    /// Records a won level. First completions award the raw score; replays
    /// award half of it, rounded down.
    pub fn award_points(
        &self,
        game_id: GameId,
        level_id: u8,
        raw_score: u32,
        timestamp: DateTime<Utc>,
        session_id: Option<String>,
    ) -> Result<(Self, u32), ProgressionError> {
        if level_id == 0 || level_id > LEVELS_PER_GAME {
            return Err(ProgressionError::LevelOutOfRange(level_id));
        }
        if raw_score > MAX_LEVEL_SCORE {
            return Err(ProgressionError::ScoreOutOfRange(raw_score));
        }
        let replay = self.has_completed(game_id, level_id);
        let awarded = if replay { raw_score / 2 } else { raw_score };
        let mut next = self.clone();
        next.completed.entry(game_id).or_default().insert(level_id);
        next.total_points += u64::from(awarded);
        next.ledger.push(AwardLedgerEntry {
            game_id,
            level_id,
            raw_score,
            awarded,
            replay,
            timestamp,
            session_id,
        });
        Ok((next, awarded))
    }

    pub fn is_circuits_unlocked(&self) -> bool {
        self.completed_levels(GameId::Bloch) >= CIRCUITS_UNLOCK_THRESHOLD
    }

    /// Grants the jester outfit for every game whose 12 levels are all done.
    pub fn check_rewards(&self) -> Self {
        let mut next = self.clone();
        for game in GameId::ALL {
            if self.completed_levels(game) >= usize::from(LEVELS_PER_GAME) {
                next.rewards.insert(Reward::JesterOutfit(game));
            }
        }
        next
    }

    pub fn ledger_total(&self) -> u64 {
        self.ledger.iter().map(|e| u64::from(e.awarded)).sum()
    }

    /// Checks that the stored total matches the award ledger.
    pub fn verify_ledger(&self) -> Result<(), ProgressionError> {
        let recomputed = self.ledger_total();
        if recomputed != self.total_points {
            return Err(ProgressionError::LedgerMismatch {
                stored: self.total_points,
                recomputed,
            });
        }
        Ok(())
    }
}
