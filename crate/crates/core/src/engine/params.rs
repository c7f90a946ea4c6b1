// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Threshold;
use crate::windows::WindowScheme;

/// Order and threshold parameters shared by all modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OrderParams {
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Cesàro exponent.
    pub p: f64,
    /// Moment order.
    pub r: f64,
}

impl Default for OrderParams {
    fn default() -> Self {
        Self {
            gamma: 0.5,
            epsilon: 0.5,
            delta: 0.5,
            p: 1.0,
            r: 1.0,
        }
    }
}

impl OrderParams {
    pub fn new(gamma: f64, epsilon: f64, delta: f64) -> Self {
        Self {
            gamma,
            epsilon,
            delta,
            ..Self::default()
        }
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }

    pub fn with_r(self, r: f64) -> Self {
        Self { r, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!(
                "{what} = {v} out of range"
            )))
        };
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad("gamma", self.gamma);
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon", self.epsilon);
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad("delta", self.delta);
        }
        if !(self.p.is_finite() && self.p > 0.0) {
            return bad("p", self.p);
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return bad("r", self.r);
        }
        Ok(())
    }

    pub(crate) fn delta_threshold(&self) -> Result<Threshold> {
        Threshold::new(self.delta)
    }
}

/// Which window indices `n` to evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum NRange {
    /// `from, from+step, …, ≤ to`.
    Range {
        from: u64,
        to: u64,
        #[serde(default = "one")]
        step: u64,
    },
    /// About `points` values spaced geometrically from `from` to `to`, rounded
    /// and deduplicated.
    Geometric {
        from: u64,
        to: u64,
        points: u64,
    },
    List {
        values: Vec<u64>,
    },
}

fn one() -> u64 {
    1
}

impl NRange {
    pub fn range(from: u64, to: u64) -> Self {
        NRange::Range { from, to, step: 1 }
    }

    pub fn stepped(from: u64, to: u64, step: u64) -> Self {
        NRange::Range { from, to, step }
    }

    pub fn geometric(from: u64, to: u64, points: u64) -> Self {
        NRange::Geometric { from, to, points }
    }

    pub fn list(values: Vec<u64>) -> Self {
        NRange::List { values }
    }

    /// The indices in increasing order, validated against the scheme horizon.
    pub fn indices(&self, scheme: &WindowScheme) -> Result<Vec<u64>> {
        let mut ns: Vec<u64> = match self {
            NRange::Range { from, to, step } => {
                if *step == 0 {
                    return Err(Error::InvalidParameter(
                        "nRange step must be positive".into(),
                    ));
                }
                (*from..=*to).step_by(*step as usize).collect()
            }
            NRange::Geometric { from, to, points } => {
                if *from == 0 || from > to || *points == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "geometric nRange needs 1 ≤ from ≤ to and points ≥ 1, got {from}..{to} x{points}"
                    )));
                }
                let (a, b) = ((*from as f64).ln(), (*to as f64).ln());
                let mut v: Vec<u64> = (0..*points)
                    .map(|i| {
                        let t = if *points == 1 {
                            1.0
                        } else {
                            i as f64 / (*points - 1) as f64
                        };
                        ((a + t * (b - a)).exp().round() as u64).clamp(*from, *to)
                    })
                    .collect();
                v[0] = *from;
                *v.last_mut().expect("points ≥ 1") = *to;
                v
            }
            NRange::List { values } => values.clone(),
        };
        ns.sort_unstable();
        ns.dedup();
        if ns.is_empty() {
            return Err(Error::EmptyWindowRange);
        }
        for &n in &ns {
            if n == 0 || n > scheme.horizon() {
                return Err(Error::OutOfHorizon {
                    n,
                    horizon: scheme.horizon(),
                });
            }
        }
        Ok(ns)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BackendChoice {
    /// Enumerate windows up to the limit, analytic beyond.
    #[default]
    Auto,
    Enumerated,
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EngineConfig {
    #[serde(default = "default_enum_limit")]
    pub enum_limit: u64,
    #[serde(default)]
    pub backend: BackendChoice,
}

fn default_enum_limit() -> u64 {
    EngineConfig::DEFAULT_ENUM_LIMIT
}

impl EngineConfig {
    pub const DEFAULT_ENUM_LIMIT: u64 = 1_000_000;

    pub fn enumerated() -> Self {
        Self {
            backend: BackendChoice::Enumerated,
            ..Self::default()
        }
    }

    pub fn analytic() -> Self {
        Self {
            backend: BackendChoice::Analytic,
            ..Self::default()
        }
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            enum_limit: Self::DEFAULT_ENUM_LIMIT,
            backend: BackendChoice::Auto,
        }
    }
}
