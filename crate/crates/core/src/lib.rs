//! Dynamical distributed-storage networks.
//!
//! Nodes fail one at a time and are rebuilt from helper transmissions. The
//! order of the most recent failures is a random permutation, and the amount
//! of data the network can keep alive is governed by cuts in the information
//! flow graph that the repairs produce. This crate holds the exact machinery:
//!
//! - [`model`]: configurations, permutations, weight rules
//! - [`flow_graph`]: the information flow graph and an exact max-flow oracle
//! - [`cut`]: closed-form cuts, selection policies, static and average cuts
//! - [`bounds`]: capacity bounds
//! - [`chain`]: the failure chain, mixing and the block stationary law
//! - [`sim`]: trajectory simulation, adaptive weights, bandwidth audits
//!
//! Everything is `no_std` with `alloc`. Values are exact rationals.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod chain;
pub mod combinatorics;
pub mod cut;
pub mod error;
pub mod flow_graph;
pub mod model;
pub mod rational;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    CutReport, FailureModel, NetworkConfig, NodeClass, Permutation, Selection, Violation,
    WeightMatrix, WeightRule,
};
pub use rational::Rational;
