// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid window scheme at n={n}: {reason}")]
    InvalidScheme { n: u64, reason: String },

    #[error("window index n={n} outside horizon 1..={horizon}")]
    OutOfHorizon { n: u64, horizon: u64 },

    #[error("slow-ratio block construction failed at j={j}: {reason}")]
    ConstructionFailed { j: u64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("exceedance at k={k} needs a joint law: the limit is not a point mass")]
    NonPointLimitWithoutJoint { k: u64 },

    #[error("absolute moment unavailable at k={k}: branch has no atom law")]
    MomentUnavailable { k: u64 },

    #[error("CDF unavailable at k={k}")]
    CdfUnavailable { k: u64 },

    #[error("pushforward unavailable: {0}")]
    PushforwardUnavailable(String),

    #[error("sampling unavailable at k={k}: branch has no atom law")]
    SamplingUnavailable { k: u64 },

    #[error("analytic counting unavailable on window n={n}: {reason}")]
    AnalyticCountingUnavailable { n: u64, reason: String },

    #[error("analytic summation unavailable on window n={n}: {reason}")]
    AnalyticSummationUnavailable { n: u64, reason: String },

    #[error("grid point x={x} lies on a jump of the limit CDF")]
    GridHitsDiscontinuity { x: f64 },

    #[error("empty window range")]
    EmptyWindowRange,

    #[error("window n={n} has width {width}, above the enumeration limit {limit}")]
    WindowTooLarge { n: u64, width: String, limit: u64 },

    #[error("unknown corpus id `{0}`")]
    UnknownId(String),
}
