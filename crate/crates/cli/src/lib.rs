//! Library surface of the workbench CLI: configuration, checks, emission.
//! The binary in `main.rs` is a thin wrapper over these.

pub mod checks;
pub mod config;
pub mod emit;
