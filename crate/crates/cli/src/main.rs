use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qubitquest_cli::exit;
use qubitquest_cli::simulate::simulate;
use qubitquest_cli::solver::{solve, DEFAULT_MAX_DEPTH};
use qubitquest_cli::validate::validate_all;
use qubitquest_core::content::{AnyLevel, LevelFile};
use qubitquest_core::progression::GameId;

#[derive(Parser)]
#[command(name = "qq", version, about = "QubitQuest content tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every level and quiz file; exits 1 on any violation.
    ValidateAll {
        #[arg(long, default_value = "levels")]
        levels_dir: PathBuf,
        #[arg(long, default_value = "quizzes")]
        quizzes_dir: PathBuf,
        /// Print per-level solver results.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Print a shortest solution for one level file.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Replay a move script against a level and print the transcript.
    Simulate {
        game: GameId,
        level: u8,
        script: PathBuf,
        #[arg(long, default_value = "levels")]
        levels_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let code = match cli.command {
        Command::ValidateAll {
            levels_dir,
            quizzes_dir,
            verbose,
        } => run_validate(&levels_dir, &quizzes_dir, verbose),
        Command::Solve { file, max_depth } => run_solve(&file, max_depth),
        Command::Simulate {
            game,
            level,
            script,
            levels_dir,
        } => run_simulate(game, level, &script, &levels_dir),
    };
    ExitCode::from(code as u8)
}

fn run_validate(levels_dir: &Path, quizzes_dir: &Path, verbose: bool) -> i32 {
    let report = validate_all(levels_dir, quizzes_dir);
    if verbose {
        for note in &report.notes {
            println!("{note}");
        }
    }
    for v in &report.violations {
        eprintln!("error: {v}");
    }
    let levels: usize = report.levels_checked.values().sum();
    if report.is_clean() {
        println!("ok: {levels} levels, {} quizzes", report.quizzes_checked);
        exit::OK
    } else {
        eprintln!(
            "{} violation(s) in {levels} levels and {} quizzes",
            report.violations.len(),
            report.quizzes_checked
        );
        exit::CONTENT_ERROR
    }
}

fn run_solve(file: &Path, max_depth: usize) -> i32 {
    let level = match AnyLevel::from_path(file) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::CONTENT_ERROR;
        }
    };
    match solve(&level, max_depth) {
        Ok(sol) => {
            println!("{} level {}: {} moves", level.game().as_str(), level.id(), sol.len());
            println!("{sol}");
            exit::OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit::CONTENT_ERROR
        }
    }
}

fn level_path(levels_dir: &Path, game: GameId, level: u8) -> PathBuf {
    levels_dir.join(game.as_str()).join(format!("{level:02}.json"))
}

fn run_simulate(game: GameId, level: u8, script: &Path, levels_dir: &Path) -> i32 {
    let path = level_path(levels_dir, game, level);
    let loaded = match game {
        GameId::Bloch => LevelFile::load(&path).map(AnyLevel::Bloch),
        GameId::Entanglement => LevelFile::load(&path).map(AnyLevel::Entanglement),
        GameId::Circuits => LevelFile::load(&path).map(AnyLevel::Circuits),
    };
    let level = match loaded {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::CONTENT_ERROR;
        }
    };
    let text = match std::fs::read_to_string(script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", script.display());
            return exit::USAGE;
        }
    };
    match simulate(&level, &text) {
        Ok(t) => {
            print!("{}", t.render());
            exit::OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit::USAGE
        }
    }
}
