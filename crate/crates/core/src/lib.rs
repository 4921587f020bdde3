//! Almost-sure synthesis for regular games with imperfect information.
//!
//! A [`Game`] is given by finite automata: a move alphabet with its action
//! map, a Moore machine colouring histories, and a synchronous relation for
//! indistinguishability. A rectangular [`Morphism`] abstracts histories to a
//! finite state space on which the solver computes the almost-sure winning
//! region and a uniform randomised strategy.

pub mod automata;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod generate;
pub mod instances;
pub mod io;
pub mod morphism;
pub mod probability;
pub mod rational;
pub mod refinement;
pub mod reif;
pub mod solver;
pub mod strategy;

pub use error::{Result, RigError};
pub use game::{validate_game, ActMap, Game, MooreMachine, Objective, SyncRelation, ValidationReport};
pub use morphism::{compute_approx, compute_targets, validate_rectangularity, validate_refinement, Morphism};
pub use rational::Rational;
pub use solver::{solve_buchi, solve_reach, Arena, FixpointResult};
pub use strategy::{build_spoiler, extract_strategy, verify_almost_sure, FiniteMemoryStrategy};
