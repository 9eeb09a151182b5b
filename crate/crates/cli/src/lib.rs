//! Authoring and verification tools for QubitQuest content: a BFS level
//! solver, a whole-tree validator and a headless session simulator.

pub mod simulate;
pub mod solver;
pub mod validate;

/// Process exit codes used by `qq`.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONTENT_ERROR: i32 = 1;
    pub const USAGE: i32 = 2;
}
