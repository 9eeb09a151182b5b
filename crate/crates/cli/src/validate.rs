//! `qq validate-all`: schema checks, engine invariants and solver
//! cross-checks over a whole content tree.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use qubitquest_core::bloch::BlochLevel;
use qubitquest_core::circuits::CircuitLevel;
use qubitquest_core::content::{load_game_dir, load_quiz_dir, ContentError, LevelFile};
use qubitquest_core::entanglement::EntanglementLevel;
use qubitquest_core::progression::GameId;
use qubitquest_core::quiz::{Quiz, QuizKind};
use qubitquest_core::LEVELS_PER_GAME;

use crate::solver::{solve_bloch, solve_circuit, solve_entanglement, DEFAULT_MAX_DEPTH};

pub const IN_GAME_QUIZZES: usize = 3;

#[derive(Debug, Default)]
pub struct Report {
    pub levels_checked: BTreeMap<GameId, usize>,
    pub quizzes_checked: usize,
    /// Per-level solver results, for display.
    pub notes: Vec<String>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, path: &Path, msg: impl std::fmt::Display) {
        self.violations.push(format!("{}: {msg}", path.display()));
    }
}

pub fn validate_all(levels_dir: &Path, quizzes_dir: &Path) -> Report {
    let mut report = Report::default();
    validate_bloch(&levels_dir.join(GameId::Bloch.as_str()), &mut report);
    validate_entanglement(&levels_dir.join(GameId::Entanglement.as_str()), &mut report);
    validate_circuits(&levels_dir.join(GameId::Circuits.as_str()), &mut report);
    validate_quizzes(quizzes_dir, &mut report);
    report
}

/// Loads one game's directory, recording parse failures and checking that
/// ids 1..=12 are each present exactly once.
fn load_game<T: LevelFile>(dir: &Path, game: GameId, id_of: impl Fn(&T) -> u8, report: &mut Report) -> Vec<(PathBuf, T)> {
    let files = match load_game_dir::<T>(dir) {
        Ok(f) => f,
        Err(e) => {
            report.violations.push(e.to_string());
            return Vec::new();
        }
    };
    let mut levels = Vec::new();
    for (path, result) in files {
        match result {
            Ok(level) => levels.push((path, level)),
            Err(e) => report.violations.push(e.to_string()),
        }
    }
    let ids: Vec<u8> = levels.iter().map(|(_, l)| id_of(l)).collect();
    let unique: BTreeSet<u8> = ids.iter().copied().collect();
    let expected: BTreeSet<u8> = (1..=LEVELS_PER_GAME).collect();
    if ids.len() != unique.len() || unique != expected {
        report.violations.push(format!(
            "{}: expected levels 1..={LEVELS_PER_GAME} exactly once, found {ids:?}",
            dir.display()
        ));
    }
    report.levels_checked.insert(game, levels.len());
    levels.sort_by_key(|(_, l)| id_of(l));
    levels
}

fn validate_bloch(dir: &Path, report: &mut Report) {
    let levels = load_game::<BlochLevel>(dir, GameId::Bloch, |l| l.id, report);
    let mut previous_min = 0;
    for (path, level) in &levels {
        if level.allowed_gates.is_empty() || level.allowed_gates.iter().any(|k| !k.is_single_qubit()) {
            report.violation(path, "allowed_gates must be a non-empty set of single-qubit gates");
        }
        if level.start_state.num_qubits() != 1 || level.target_state.num_qubits() != 1 {
            report.violation(path, "start and target must be single-qubit states");
            continue;
        }
        match solve_bloch(level, DEFAULT_MAX_DEPTH) {
            Ok(sol) => {
                report.notes.push(format!("bloch {:02}: solved in {} ({})", level.id, sol.len(), crate::solver::Solution::Bloch(sol.clone())));
                if sol.len() != level.min_solution_length {
                    report.violation(
                        path,
                        format!(
                            "min_solution_length is {} but the solver needs {}",
                            level.min_solution_length,
                            sol.len()
                        ),
                    );
                }
            }
            Err(e) => report.violation(path, e),
        }
        if level.min_solution_length < previous_min {
            report.violation(
                path,
                format!(
                    "min_solution_length {} is lower than the previous level's {previous_min}",
                    level.min_solution_length
                ),
            );
        }
        previous_min = level.min_solution_length;
    }
}

fn validate_entanglement(dir: &Path, report: &mut Report) {
    let levels = load_game::<EntanglementLevel>(dir, GameId::Entanglement, |l| l.id, report);
    for (path, level) in &levels {
        match solve_entanglement(level) {
            Ok(run) => report
                .notes
                .push(format!("entanglement {:02}: perfect run of {} actions", level.id, run.len())),
            Err(e) => report.violation(path, e),
        }
    }
}

fn validate_circuits(dir: &Path, report: &mut Report) {
    let levels = load_game::<CircuitLevel>(dir, GameId::Circuits, |l| l.id, report);
    for (path, level) in &levels {
        let structural = level.violations();
        for v in &structural {
            report.violation(path, v);
        }
        if !structural.is_empty() {
            continue;
        }
        match solve_circuit(level, DEFAULT_MAX_DEPTH) {
            Ok(sol) => {
                report.notes.push(format!(
                    "circuits {:02}: solved in {} columns ({})",
                    level.id,
                    sol.len(),
                    crate::solver::Solution::Circuits(sol.clone())
                ));
                if sol.len() != level.min_solution_length {
                    report.violation(
                        path,
                        format!(
                            "min_solution_length is {} but the solver needs {}",
                            level.min_solution_length,
                            sol.len()
                        ),
                    );
                }
            }
            Err(e) => report.violation(path, e),
        }
    }
}

fn validate_quizzes(dir: &Path, report: &mut Report) {
    let files = match load_quiz_dir(dir) {
        Ok(f) => f,
        Err(e) => {
            report.violations.push(e.to_string());
            return;
        }
    };
    let mut quizzes: Vec<(PathBuf, Quiz)> = Vec::new();
    for (path, result) in files {
        match result {
            Ok(q) => quizzes.push((path, q)),
            Err(ContentError::Quiz { path, source }) => report.violation(&path, source),
            Err(e) => report.violations.push(e.to_string()),
        }
    }
    report.quizzes_checked = quizzes.len();

    let mut ids = BTreeSet::new();
    for (path, q) in &quizzes {
        if !ids.insert(q.id.clone()) {
            report.violation(path, format!("duplicate quiz id {:?}", q.id));
        }
    }
    let assessments: Vec<&Quiz> = quizzes
        .iter()
        .filter(|(_, q)| q.kind == QuizKind::Assessment)
        .map(|(_, q)| q)
        .collect();
    let in_game = quizzes.iter().filter(|(_, q)| q.kind == QuizKind::InGame).count();
    if assessments.len() != 1 {
        report.violations.push(format!(
            "{}: expected exactly one assessment quiz, found {}",
            dir.display(),
            assessments.len()
        ));
    }
    if in_game != IN_GAME_QUIZZES {
        report.violations.push(format!(
            "{}: expected {IN_GAME_QUIZZES} in-game quizzes, found {in_game}",
            dir.display()
        ));
    }
    let assessment_prompts: BTreeSet<&str> = assessments
        .iter()
        .flat_map(|q| q.questions.iter().map(|x| x.prompt.as_str()))
        .collect();
    for (path, q) in quizzes.iter().filter(|(_, q)| q.kind == QuizKind::InGame) {
        for question in &q.questions {
            if assessment_prompts.contains(question.prompt.as_str()) {
                report.violation(path, format!("question {} repeats an assessment question", question.id));
            }
        }
    }
}
