// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Real sequences `x_k`: windowed statistical density of `|x_k − x| ≥ δ` and
//! statistical limit superior and inferior.

use std::fmt;
use std::sync::Arc;

use crate::engine::params::{EngineConfig, NRange};
use crate::engine::series::{build_series, window_count, DiagnosticSeries, Mode};
use crate::error::{Error, Result};
use crate::models::rules::{Compiled, IndexRule, PowerTail};
use crate::models::IndexSet;
use crate::numeric::{Exponent, Threshold};
use crate::windows::WindowScheme;

#[derive(Clone)]
pub enum RealSeq {
    /// `x_k = 1/k`.
    Reciprocal,
    /// `x_k = (−1)^k`.
    Alternating,
    Constant(f64),
    /// `x_k = values[k−1]`; indices beyond the table are an error.
    Table(Vec<f64>),
    /// `x_k = value` on `set`, `0` elsewhere.
    Indicator {
        set: IndexSet,
        value: f64,
    },
    Func(Arc<dyn Fn(u64) -> Result<f64> + Send + Sync>),
}

impl fmt::Debug for RealSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSeq::Reciprocal => write!(f, "Reciprocal"),
            RealSeq::Alternating => write!(f, "Alternating"),
            RealSeq::Constant(c) => write!(f, "Constant({c})"),
            RealSeq::Table(v) => write!(f, "Table(len={})", v.len()),
            RealSeq::Indicator { set, value } => write!(f, "Indicator({set:?}, {value})"),
            RealSeq::Func(_) => write!(f, "Func"),
        }
    }
}

impl RealSeq {
    pub fn func(f: impl Fn(u64) -> Result<f64> + Send + Sync + 'static) -> Self {
        RealSeq::Func(Arc::new(f))
    }

    pub fn value(&self, k: u64) -> Result<f64> {
        Ok(match self {
            RealSeq::Reciprocal => 1.0 / k as f64,
            RealSeq::Alternating => {
                if k.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            RealSeq::Constant(c) => *c,
            RealSeq::Table(v) => *v.get((k as usize).wrapping_sub(1)).ok_or_else(|| {
                Error::InvalidParameter(format!("sequence table has no entry for k={k}"))
            })?,
            RealSeq::Indicator { set, value } => {
                if set.contains_u64(k)? {
                    *value
                } else {
                    0.0
                }
            }
            RealSeq::Func(f) => f(k)?,
        })
    }

    fn deviation_rules(&self, limit: f64, delta: f64) -> Result<Compiled<'_, IndexRule>> {
        let far = move |v: f64| (v - limit).abs() >= delta;
        Ok(match self {
            RealSeq::Constant(c) => Compiled {
                special: Vec::new(),
                default: IndexRule::Const(far(*c)),
            },
            RealSeq::Indicator { set, value } => Compiled {
                special: vec![(set, IndexRule::Const(far(*value)))],
                default: IndexRule::Const(far(0.0)),
            },
            RealSeq::Reciprocal if limit == 0.0 => Compiled {
                special: Vec::new(),
                default: IndexRule::PowerTail(PowerTail::new(
                    &Exponent::ratio(1, 1),
                    false,
                    &Threshold::new(delta)?,
                )),
            },
            _ => {
                let seq = self.clone();
                Compiled {
                    special: Vec::new(),
                    default: IndexRule::Opaque(Arc::new(move |k| Ok(far(seq.value(k)?)))),
                }
            }
        })
    }
}

/// Density of `{k ∈ window : |x_k − x| ≥ δ}`.
pub fn real_stat_density(
    seq: &RealSeq,
    limit: f64,
    scheme: &WindowScheme,
    gamma: f64,
    delta: f64,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<DiagnosticSeries> {
    if !(gamma > 0.0 && gamma <= 1.0 && delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gamma={gamma}, delta={delta} out of range"
        )));
    }
    let rules = seq.deviation_rules(limit, delta)?;
    build_series(Mode::RealSequence, scheme, nrange, gamma, |w| {
        let (count, backend) = window_count(&rules, w, cfg)?;
        Ok((count, backend, None))
    })
}

/// Knobs for statistical limit superior and inferior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatLimitKnobs {
    /// Density cut-off read as "non-zero density".
    pub eta: f64,
    /// Fraction of the windows, counted from the end, that are examined.
    pub tail_fraction: f64,
}

impl Default for StatLimitKnobs {
    fn default() -> Self {
        Self {
            eta: 0.01,
            tail_fraction: 0.5,
        }
    }
}

/// For each tail window, the `m`-th largest value, where `m = ⌈η·h^γ⌉` is the
/// smallest count reaching density `η`.
fn order_levels(
    seq: &RealSeq,
    scheme: &WindowScheme,
    gamma: f64,
    knobs: &StatLimitKnobs,
    nrange: &NRange,
    cfg: &EngineConfig,
    largest: bool,
) -> Result<Vec<f64>> {
    if !(knobs.eta > 0.0 && knobs.tail_fraction > 0.0 && knobs.tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("{knobs:?} out of range")));
    }
    let ns = nrange.indices(scheme)?;
    let tail = (ns.len() as f64 * knobs.tail_fraction).ceil() as usize;
    let mut levels = Vec::new();
    for &n in &ns[ns.len() - tail.max(1)..] {
        let w = scheme.window(n)?;
        let (lo, hi) = match w.as_u64() {
            Some(b) if hi_ok(&w, cfg) => b,
            _ => {
                return Err(Error::WindowTooLarge {
                    n,
                    width: w.width.to_string(),
                    limit: cfg.enum_limit,
                })
            }
        };
        let mut values = (lo..=hi)
            .map(|k| seq.value(k))
            .collect::<Result<Vec<_>>>()?;
        let m = (knobs.eta * w.h_gamma(gamma)).ceil().max(1.0) as usize;
        if m > values.len() {
            continue;
        }
        values.sort_by(f64::total_cmp);
        levels.push(if largest {
            values[values.len() - m]
        } else {
            values[m - 1]
        });
    }
    Ok(levels)
}

fn hi_ok(w: &crate::windows::Window, cfg: &EngineConfig) -> bool {
    w.width <= num_bigint::BigUint::from(cfg.enum_limit)
}

/// Largest observed level `v` such that `{k : x_k ≥ v}` reaches density `η` on
/// some tail window; `−∞` when none does.
pub fn stat_lim_sup(
    seq: &RealSeq,
    scheme: &WindowScheme,
    gamma: f64,
    knobs: &StatLimitKnobs,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<f64> {
    let levels = order_levels(seq, scheme, gamma, knobs, nrange, cfg, true)?;
    Ok(levels.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest observed level `v` such that `{k : x_k ≤ v}` reaches density `η`
/// on some tail window; `+∞` when none does.
pub fn stat_lim_inf(
    seq: &RealSeq,
    scheme: &WindowScheme,
    gamma: f64,
    knobs: &StatLimitKnobs,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<f64> {
    let levels = order_levels(seq, scheme, gamma, knobs, nrange, cfg, false)?;
    Ok(levels.into_iter().fold(f64::INFINITY, f64::min))
}
