//! A simulation and estimation laboratory for nonuniformly hyperbolic maps
//! with slow (polynomial) mixing.
//!
//! The crate simulates three concrete systems — a linked-twist map on the
//! torus, the Bunimovich stadium, and a semi-dispersing billiard — together
//! with their induced return maps on a distinguished subset `M` of phase
//! space. On top of the dynamics it provides Monte Carlo estimators for
//! return-time tail laws, correlation decay, the slow-coupling sets
//! `C_{n,b}`, and a CLT diagnostic, plus exact numerical implementations of
//! the renewal-sequence recursion, cell-index transition chains, and the
//! coupling mass budget that together explain *why* correlations decay at
//! the return-time tail rate.
//!
//! Most capabilities have a runnable example under `examples/`; the `mixlab`
//! binary drives reproducible experiments from a TOML config (see README).

pub mod chain;
pub mod config;
pub mod coupling;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod inducing;
pub mod numeric;
pub mod observable;
pub mod renewal;
pub mod rng;
pub mod runner;
pub mod stats;

pub mod acceptance;

pub use error::{Error, Result};
