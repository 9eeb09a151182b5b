//! Loading level and quiz files from disk.
//!
//! Layout: `<levels>/{bloch,entanglement,circuits}/NN.json` and
//! `<quizzes>/*.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bloch::BlochLevel;
use crate::circuits::CircuitLevel;
use crate::entanglement::EntanglementLevel;
use crate::progression::GameId;
use crate::quiz::{Quiz, QuizError, QuizFile};

#[derive(Debug, Error)]
pub enum ContentError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Quiz {
        path: PathBuf,
        #[source]
        source: QuizError,
    },
    #[error("{path}: file name says level {expected} but the file has id {found}")]
    IdMismatch { path: PathBuf, expected: u8, found: u8 },
    #[error("{path}: level file names must be NN.json")]
    BadFileName { path: PathBuf },
}

/// Level of any game, detected from the document's shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyLevel {
    Circuits(CircuitLevel),
    Entanglement(EntanglementLevel),
    Bloch(BlochLevel),
}

impl AnyLevel {
    pub fn game(&self) -> GameId {
        match self {
            AnyLevel::Bloch(_) => GameId::Bloch,
            AnyLevel::Entanglement(_) => GameId::Entanglement,
            AnyLevel::Circuits(_) => GameId::Circuits,
        }
    }

    pub fn id(&self) -> u8 {
        match self {
            AnyLevel::Bloch(l) => l.id,
            AnyLevel::Entanglement(l) => l.id,
            AnyLevel::Circuits(l) => l.id,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, ContentError> {
        read_json(path)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ContentError> {
    let text = fs::read_to_string(path).map_err(|source| ContentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ContentError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, ContentError> {
    let entries = fs::read_dir(dir).map_err(|source| ContentError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| ContentError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

trait HasId {
    fn level_id(&self) -> u8;
}

impl HasId for BlochLevel {
    fn level_id(&self) -> u8 {
        self.id
    }
}

impl HasId for EntanglementLevel {
    fn level_id(&self) -> u8 {
        self.id
    }
}

impl HasId for CircuitLevel {
    fn level_id(&self) -> u8 {
        self.id
    }
}

fn load_level<T: DeserializeOwned + HasId>(path: &Path) -> Result<T, ContentError> {
    let expected: u8 = path
        .file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ContentError::BadFileName {
            path: path.to_path_buf(),
        })?;
    let level: T = read_json(path)?;
    if level.level_id() != expected {
        return Err(ContentError::IdMismatch {
            path: path.to_path_buf(),
            expected,
            found: level.level_id(),
        });
    }
    Ok(level)
}

/// Each file found in a content directory with its parse result.
pub type Parsed<T> = Vec<(PathBuf, Result<T, ContentError>)>;

/// Every level file in one game's directory, each parsed independently so
/// a report can list all failures.
pub fn load_game_dir<T: LevelFile>(dir: &Path) -> Result<Parsed<T>, ContentError> {
    Ok(json_files(dir)?
        .into_iter()
        .map(|p| {
            let r = T::load(&p);
            (p, r)
        })
        .collect())
}

/// Implemented by the three level types.
pub trait LevelFile: Sized {
    fn load(path: &Path) -> Result<Self, ContentError>;
}

impl LevelFile for BlochLevel {
    fn load(path: &Path) -> Result<Self, ContentError> {
        load_level(path)
    }
}

impl LevelFile for EntanglementLevel {
    fn load(path: &Path) -> Result<Self, ContentError> {
        load_level(path)
    }
}

impl LevelFile for CircuitLevel {
    fn load(path: &Path) -> Result<Self, ContentError> {
        load_level(path)
    }
}

pub fn load_quiz(path: &Path) -> Result<Quiz, ContentError> {
    let file: QuizFile = read_json(path)?;
    Quiz::new(file).map_err(|source| ContentError::Quiz {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_quiz_dir(dir: &Path) -> Result<Parsed<Quiz>, ContentError> {
    Ok(json_files(dir)?
        .into_iter()
        .map(|p| {
            let r = load_quiz(&p);
            (p, r)
        })
        .collect())
}

/// All shipped content, strictly loaded.
#[derive(Clone, Debug)]
pub struct Content {
    pub bloch: Vec<BlochLevel>,
    pub entanglement: Vec<EntanglementLevel>,
    pub circuits: Vec<CircuitLevel>,
    pub quizzes: Vec<Quiz>,
}

fn collect_ok<T>(items: Vec<(PathBuf, Result<T, ContentError>)>) -> Result<Vec<T>, ContentError> {
    items.into_iter().map(|(_, r)| r).collect()
}

impl Content {
    pub fn load(levels_dir: &Path, quizzes_dir: &Path) -> Result<Self, ContentError> {
        let dir = |g: GameId| levels_dir.join(g.as_str());
        Ok(Content {
            bloch: collect_ok(load_game_dir(&dir(GameId::Bloch))?)?,
            entanglement: collect_ok(load_game_dir(&dir(GameId::Entanglement))?)?,
            circuits: collect_ok(load_game_dir(&dir(GameId::Circuits))?)?,
            quizzes: collect_ok(load_quiz_dir(quizzes_dir)?)?,
        })
    }

    pub fn bloch_level(&self, id: u8) -> Option<&BlochLevel> {
        self.bloch.iter().find(|l| l.id == id)
    }

    pub fn entanglement_level(&self, id: u8) -> Option<&EntanglementLevel> {
        self.entanglement.iter().find(|l| l.id == id)
    }

    pub fn circuit_level(&self, id: u8) -> Option<&CircuitLevel> {
        self.circuits.iter().find(|l| l.id == id)
    }

    pub fn quiz(&self, id: &str) -> Option<&Quiz> {
        self.quizzes.iter().find(|q| q.id == id)
    }

    pub fn level_count(&self, game: GameId) -> usize {
        match game {
            GameId::Bloch => self.bloch.len(),
            GameId::Entanglement => self.entanglement.len(),
            GameId::Circuits => self.circuits.len(),
        }
    }
}
