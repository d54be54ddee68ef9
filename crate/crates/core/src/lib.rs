//! Policy games of a monetary union.
//!
//! A committed central bank faces two discretionary national fiscal
//! authorities under rational expectations. The crate covers:
//!
//! - [`structural`]: IS-LM-supply block and its reduced form.
//! - [`closed_policy`]: single-economy discretion, commitment, inflation
//!   targeting and the monetary/fiscal timing game.
//! - [`union_game`]: the two-country game under the rule
//!   `m = -u - lambda (g1 + g2)`, including the `lambda = 1/2` pathology.
//! - [`sanctions`]: linear penalties on fiscal instruments, the
//!   bias-removing penalty rate and regime welfare comparison.
//! - [`mc_engine`]: seeded, counter-based Monte Carlo cross-checks and sweeps.
//! - [`cli`]: scenario files, commands and CSV output behind the `emulab` binary.

pub mod cli;
pub mod closed_policy;
pub mod error;
pub mod mc_engine;
pub mod numeric;
pub mod sanctions;
pub mod structural;
pub mod union_game;

pub use error::{PolicyError, Result};

/// Tolerance for treating a rule coefficient as one of the singular cases.
pub const LAMBDA_EPS: f64 = 1e-12;
