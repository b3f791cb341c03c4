//! Information divergences, goal-oriented uncertainty-quantification bounds
//! and their application to Markov chains, lattice Gibbs measures and
//! exactly solvable Ising / mean-field models.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command-line front end live in the `infoscale` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod distribution;
pub mod divergences;
pub mod error;
pub mod exact_models;
pub mod gibbs;
pub mod goal_oriented;
pub mod linalg;
pub mod markov;
pub mod numeric;
pub mod optimize;
pub mod quadrature;

pub use distribution::{DiscreteDistribution, Observable};
pub use error::{Error, Result};
pub use goal_oriented::{Cgf, GoalBound};
