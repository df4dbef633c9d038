//! Exact solvers: finite regions (attractor over the position graph) and the
//! bounded-horizon multi-board game.

pub mod bounded;
pub mod finite;
