// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-horizon diagnostics for windowed (αβ) statistical convergence of
//! order γ, for real sequences and for sequences of random variables.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod invariants;
pub mod models;
pub mod montecarlo;
pub mod numeric;
mod serde_big;
pub mod windows;

pub use error::{Error, Result};
pub use windows::{Formula, SchemeKind, Window, WindowScheme};
