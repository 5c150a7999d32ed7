//! Exact solver and verifier for discrete-time, finite-horizon, two-player
//! nonzero-sum stopping games in which Player 1 observes a filtration `F`
//! that refines Player 2's filtration `G`.
//!
//! All arithmetic is over exact rationals. The main entry points are
//! [`equilibrium::solve`], which runs the recursive construction to its
//! fixpoint, and [`verify::verify_nash`], which certifies a strategy pair
//! against best responses computed either by backward induction or by brute
//! force enumeration.

pub mod asym;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod gen;
pub mod prob;
pub mod rational;
pub mod snell;
pub mod verify;

pub use error::{Error, Result};
pub use game::GameSpec;
pub use prob::{AdaptedProcess, Filtration, Partition, SampleSpace, StoppingTime};
pub use rational::{ExtRational, Rational};
