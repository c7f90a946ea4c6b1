// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Sequences of random variables `{X_k}` and their limits.

mod combine;
mod index_set;
mod law;
pub(crate) mod rules;
mod sequence;

pub use combine::{combine_linear, LinearBound};
pub use index_set::IndexSet;
pub use law::{
    AtomValue, ContinuousLaw, DiscreteDistribution, JointDistribution, Law, LimitLaw, ProbRule,
    ProbValue, PROB_TOL,
};
pub use sequence::{Branch, RVSequenceModel};
