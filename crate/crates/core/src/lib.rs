//! Finite-model verification of software independence for voting systems.
//!
//! The crate models a voting system as a finite table: software variants
//! (the ideal system plus its mutations) run on election inputs, each run
//! carrying evidence, a probability, and an announced-outcome distribution,
//! with audits mapping evidence to reject probabilities. On such models it
//! decides the possibilistic independence notions (SI1, the strong variant,
//! SI2, SI3, SI4, software resilience, audit soundness), extracts replayable
//! witnesses, and computes the exact game-theoretic false-negative and
//! false-positive rates ε and δ with worst-case attack strategies.
//!
//! All semantics run on arbitrary-precision rationals; Monte Carlo sampling
//! exists only as a cross-check of the exact engine.
//!
//! Module map:
//! - [`model`]: the semantic domain and validation.
//! - [`format`]: the on-disk JSON document format and canonical digests.
//! - [`checks`]: possibilistic and threshold definitions with witnesses.
//! - [`game`]: attack/defense strategies, ε, δ, and SI classification.
//! - [`monte_carlo`]: seeded sampling cross-checks.
//! - [`exemplars`]: generators for the reference systems and random models.

pub mod checks;
pub mod error;
pub mod exemplars;
pub mod format;
pub mod game;
pub mod model;
pub mod monte_carlo;
pub mod rational;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::EngineError;
pub use rational::Rational;
