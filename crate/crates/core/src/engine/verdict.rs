// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-horizon convergence verdicts from a stored series.

use serde::{Deserialize, Serialize};

use crate::engine::series::{DiagnosticSeries, Mode};
use crate::error::{Error, Result};
use crate::models::{DiscreteDistribution, LimitLaw};

/// Slopes within this band count as flat.
pub const TREND_DEAD_BAND: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VerdictKnobs {
    pub tau: f64,
    pub tail_fraction: f64,
}

impl Default for VerdictKnobs {
    fn default() -> Self {
        Self {
            tau: 0.05,
            tail_fraction: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Trend {
    Decreasing,
    Increasing,
    Flat,
    Oscillating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Decision {
    ConvergesTo,
    Fails,
    Inconclusive,
}

impl Decision {
    pub fn name(&self) -> &'static str {
        match self {
            Decision::ConvergesTo => "convergesTo",
            Decision::Fails => "fails",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CandidateLimit {
    Point(f64),
    Law(DiscreteDistribution),
}

impl From<&LimitLaw> for CandidateLimit {
    fn from(l: &LimitLaw) -> Self {
        match l {
            LimitLaw::Point(v) => CandidateLimit::Point(*v),
            LimitLaw::Discrete(d) => match d.as_point() {
                Some(v) => CandidateLimit::Point(v),
                None => CandidateLimit::Law(d.clone()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub mode: Mode,
    pub candidate_limit: CandidateLimit,
    pub tail_max: f64,
    pub tail_min: f64,
    pub tail_trend: Trend,
    pub slope: f64,
    pub decision: Decision,
    pub horizon_used: u64,
    pub tail_len: usize,
    pub knobs: VerdictKnobs,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn trend_of(xs: &[f64], ys: &[f64]) -> (Trend, f64) {
    let slope = least_squares_slope(xs, ys);
    let diffs: Vec<f64> = ys
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .collect();
    let changes = diffs
        .windows(2)
        .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
        .count();
    let trend = if diffs.len() >= 2 && 2 * changes >= diffs.len() {
        Trend::Oscillating
    } else if slope > TREND_DEAD_BAND {
        Trend::Increasing
    } else if slope < -TREND_DEAD_BAND {
        Trend::Decreasing
    } else {
        Trend::Flat
    };
    (trend, slope)
}

/// Decides convergence from the last `tail_fraction` of the series.
///
/// `convergesTo` needs every tail value below `τ` and a decreasing or flat
/// trend; `fails` needs every tail value above `τ` and a trend that is not
/// decreasing. Cesàro series use their certified upper bounds for the first
/// test and lower bounds for the second.
pub fn verdict(
    series: &DiagnosticSeries,
    limit: CandidateLimit,
    knobs: &VerdictKnobs,
) -> Result<Verdict> {
    if series.records.is_empty() {
        return Err(Error::EmptyWindowRange);
    }
    if !(knobs.tau > 0.0 && knobs.tail_fraction > 0.0 && knobs.tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("{knobs:?} out of range")));
    }
    let len = series.records.len();
    let tail_len = ((len as f64 * knobs.tail_fraction).ceil() as usize).clamp(1, len);
    let tail = &series.records[len - tail_len..];
    let bounds: Vec<(f64, f64)> = tail.iter().map(|r| r.value_bounds(series.mode)).collect();
    let tail_max = bounds.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
    let tail_min = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = tail.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = bounds.iter().map(|b| b.1).collect();
    let (tail_trend, slope) = trend_of(&xs, &ys);
    let decision = if tail_max < knobs.tau && matches!(tail_trend, Trend::Decreasing | Trend::Flat)
    {
        Decision::ConvergesTo
    } else if tail_min > knobs.tau && tail_trend != Trend::Decreasing {
        Decision::Fails
    } else {
        Decision::Inconclusive
    };
    Ok(Verdict {
        mode: series.mode,
        candidate_limit: limit,
        tail_max,
        tail_min,
        tail_trend,
        slope,
        decision,
        horizon_used: series.records[len - 1].n,
        tail_len,
        knobs: *knobs,
    })
}
