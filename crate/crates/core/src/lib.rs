//! Differential invariants and invariant second-order PDEs for prescribed
//! Lie symmetry groups.

#![allow(clippy::needless_range_loop)]

pub mod expr;
pub mod jet;
pub mod liealg;
pub mod covariant;
pub mod invariants;
pub mod verify;
pub mod cli;
