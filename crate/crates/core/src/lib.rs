//! Probabilistic coherence distillation from mixed states under strictly
//! incoherent operations, with catalyst-existence tests.
//!
//! The pipeline: find the maximal pure coherent-state subspaces of a state
//! ([`subspaces`]), turn them into a maximal success probability and an
//! explicit Kraus protocol ([`distill`]), then ask whether a catalyst helps
//! ([`catalysis`]). [`oracles`] re-derives each answer independently.

pub mod catalysis;
pub mod cli;
mod clique;
pub mod distill;
pub mod error;
mod linalg;
pub mod measures;
pub mod oracles;
pub mod registry;
pub mod states;
pub mod subspaces;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use num_complex::Complex64;
