//! Golden transcripts: each directory under `tests/golden` holds a level,
//! a move script and the expected transcript. Set `UPDATE_GOLDEN=1` to
//! rewrite the expectations after an intended change.

use std::fs;
use std::path::{Path, PathBuf};

use qubitquest_cli::simulate::{simulate, Transcript};
use qubitquest_core::content::AnyLevel;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(case: &Path) -> Transcript {
    let level = AnyLevel::from_path(&case.join("level.json")).unwrap();
    let moves = fs::read_to_string(case.join("moves.txt")).unwrap();
    simulate(&level, &moves).unwrap()
}

fn check(name: &str) -> Transcript {
    let case = golden_dir().join(name);
    let transcript = run(&case);
    let expected_path = case.join("expected.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&expected_path, transcript.render()).unwrap();
    }
    let expected = fs::read_to_string(&expected_path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", expected_path.display()));
    assert_eq!(transcript.render(), expected, "transcript for {name} changed");
    transcript
}

#[test]
fn every_case_has_an_expectation() {
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let dir = entry.unwrap().path();
        for file in ["level.json", "moves.txt", "expected.txt"] {
            assert!(dir.join(file).exists(), "{} is missing {file}", dir.display());
        }
    }
}

#[test]
fn bloch_x_wins_level_1() {
    let t = check("bloch_x_wins_level_1");
    assert_eq!(t.status, "Won");
    assert_eq!(t.score, Some(10));
}

#[test]
fn entanglement_anti_correlated_pairs() {
    let t = check("entanglement_anti_correlated_pairs");
    let text = t.render();
    assert!(text.contains("A Jump B Crawl -> synced"));
    assert!(text.contains("A Crawl B Jump -> missed"));
    assert!(text.contains("A Balance B Weave -> synced"));
    assert!(text.contains("A Climb B Pause -> synced"));
    assert_eq!(t.status, "Won");
    // 3 synced, 1 wrong: round(7.5) = 8.
    assert_eq!(t.score, Some(8));
}

#[test]
fn entanglement_wrong_limit() {
    let t = check("entanglement_wrong_limit");
    assert_eq!(t.status, "Failed");
    assert!(t.render().contains("wrong_count 6"));
}

#[test]
fn circuits_bell() {
    let t = check("circuits_bell");
    assert_eq!(t.status, "Won");
    assert_eq!(t.score, Some(10));
}

#[test]
fn circuits_removal_penalty() {
    let t = check("circuits_removal_penalty");
    assert_eq!(t.status, "Exhausted");
    let lines = &t.lines;
    // Each removal line shows fish and points dropping by one.
    for k in 1..=9u32 {
        let removal = lines
            .iter()
            .find(|l| l.starts_with(&format!("move {}: remove", 2 * k)))
            .unwrap();
        let fish = 9 - k;
        let points = (10 - k).max(1);
        let outfit = k / 3;
        assert!(
            removal.contains(&format!("fish {fish} points {points} outfit {outfit} ")),
            "{removal}"
        );
    }
    assert!(lines.iter().any(|l| l.starts_with("move 19: place H 0 0 rejected")));
}

#[test]
fn circuits_level_1_free_removals() {
    let t = check("circuits_level_1_free_removals");
    assert_eq!(t.status, "Won");
    assert_eq!(t.score, Some(10));
    assert!(t.lines.iter().all(|l| !l.contains("fish 8")));
}
