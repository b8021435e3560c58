//! Exact analysis of periodic orbits of continuous piecewise-linear interval
//! maps, with the Sharkovsky ordering, covering-graph witnesses and the
//! truncated tent map family.
//!
//! Every coordinate is an exact [`Rational`]; iterates are handled through
//! their exact lap decompositions, so orbit enumeration is exhaustive.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod forcing;
pub mod laps;
pub mod orbits;
pub mod order;
pub mod plmap;
pub mod rational;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use laps::{fixed_points, iterate_laps, Affine, LapDecomposition, DEFAULT_PIECE_BUDGET};
pub use orbits::{enumerate_orbits, least_period, minimal_orbit, Orbit, OrbitSelection};
pub use order::{is_tail, precedes, tail, PeriodKey};
pub use plmap::{MapFile, PLMap};
pub use rational::Rational;
