//! Structural invariants and subsystem constructions.

pub mod classify;
pub mod closed;
pub mod exotic;
pub mod hyperfocal;
pub mod irreducible;
pub mod normality;
pub mod normalizer;
