//! Proximal gradient descent for ℓ1-regularized least squares with constant
//! and locally adapted step sizes, plus executable checks of the classical
//! convergence bounds and a reproducible synthetic benchmark.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod error;
pub mod linalg;
pub mod objective;
pub mod prox;
pub mod solvers;
pub mod theory;
pub mod trace;

pub use data::{LabeledDataset, SyntheticSpec};
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use objective::{LassoProblem, LipschitzMode};
pub use solvers::{AdamConfig, Method, SolverConfig};
pub use trace::{IterationTrace, SolveResult, StopReason, TraceRecord};
