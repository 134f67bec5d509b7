//! Tail probabilities `Pr(S > s)` for sums of dependent Pareto risks whose
//! dependence is an Archimedean copula (or its survival copula).
//!
//! The crate provides Clayton and Gumbel generators, two exact Archimedean
//! samplers, four conditional Monte Carlo estimators with replication and
//! tuning, deterministic grid bounds for two and three components, and the
//! experiment driver used by the `tailsum` binary.

pub mod archimedean;
pub mod bounds;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod marginals;
pub mod numerics;
pub mod samplers;

pub use error::{Error, Result};
