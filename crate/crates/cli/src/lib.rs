//! I/O layer for the upgrade-plan tool: catalog CSV, JSON config,
//! plan-string parsing, and report rendering. The binary in `main.rs` wires
//! these onto the solver; everything here is also usable as a library.

pub mod catalog;
pub mod config;
pub mod planstr;
pub mod report;
