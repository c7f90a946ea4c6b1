// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::engine::modes::{
    cdf_density_series, cesaro_series, continuity_grid, density_series, moment_series,
};
use crate::engine::params::{EngineConfig, NRange, OrderParams};
use crate::engine::series::DiagnosticSeries;
use crate::engine::verdict::{verdict, CandidateLimit, Decision, Verdict, VerdictKnobs};
use crate::error::Result;
use crate::models::RVSequenceModel;
use crate::windows::WindowScheme;

/// Relative slack for pointwise inequality certification.
pub const CERT_TOL: f64 = 1e-12;

/// A mode's verdict, or why the mode could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ModeOutcome {
    Verdict(Verdict),
    Unavailable(String),
}

impl ModeOutcome {
    pub fn decision(&self) -> Option<Decision> {
        match self {
            ModeOutcome::Verdict(v) => Some(v.decision),
            ModeOutcome::Unavailable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    pub probability: ModeOutcome,
    pub cesaro: ModeOutcome,
    pub expectation: ModeOutcome,
    pub distribution: ModeOutcome,
    /// Windows checked for `d_n ≤ cesaro_n / δ^p`.
    pub markov_checked: usize,
    /// Windows where it failed.
    pub markov_violations: Vec<u64>,
    /// Windows checked for `cesaro_n ≤ δ^p + d_n` (only at `γ = 1`).
    pub reverse_checked: usize,
    pub reverse_violations: Vec<u64>,
}

impl CompareReport {
    pub fn certified(&self) -> bool {
        self.markov_violations.is_empty() && self.reverse_violations.is_empty()
    }
}

fn outcome(v: Result<Verdict>) -> ModeOutcome {
    match v {
        Ok(v) => ModeOutcome::Verdict(v),
        Err(e) => ModeOutcome::Unavailable(e.to_string()),
    }
}

fn series_outcome(
    series: Result<DiagnosticSeries>,
    limit: &CandidateLimit,
    knobs: &VerdictKnobs,
) -> Result<ModeOutcome> {
    match series {
        Ok(s) => Ok(ModeOutcome::Verdict(verdict(&s, limit.clone(), knobs)?)),
        Err(e) => Ok(ModeOutcome::Unavailable(e.to_string())),
    }
}

/// `d_n ≤ c_hi / δ^p`, within relative slack.
pub fn markov_holds(density: f64, cesaro_hi: f64, delta: f64, p: f64) -> bool {
    let bound = cesaro_hi / delta.powf(p);
    density <= bound * (1.0 + CERT_TOL)
}

/// `c_lo ≤ δ^p + d_n`, within relative slack.
pub fn reverse_holds(density: f64, cesaro_lo: f64, delta: f64, p: f64) -> bool {
    let bound = delta.powf(p) + density;
    cesaro_lo <= bound * (1.0 + CERT_TOL)
}

/// Distribution verdict over the continuity grid: converges when every grid
/// point converges, fails when any fails. The reported figures are those of the
/// grid point with the largest tail maximum. The per-point series are returned
/// alongside.
pub fn distribution_verdict(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    nrange: &NRange,
    cfg: &EngineConfig,
    knobs: &VerdictKnobs,
) -> Result<(Verdict, Vec<(f64, DiagnosticSeries)>)> {
    let limit = CandidateLimit::from(model.limit());
    let grid = continuity_grid(model);
    let per_x = cdf_density_series(model, scheme, params, &grid, nrange, cfg)?;
    let verdicts = per_x
        .iter()
        .map(|(_, s)| verdict(s, limit.clone(), knobs))
        .collect::<Result<Vec<_>>>()?;
    let decision = if verdicts.iter().all(|v| v.decision == Decision::ConvergesTo) {
        Decision::ConvergesTo
    } else if verdicts.iter().any(|v| v.decision == Decision::Fails) {
        Decision::Fails
    } else {
        Decision::Inconclusive
    };
    let mut worst = verdicts
        .into_iter()
        .max_by(|a, b| a.tail_max.total_cmp(&b.tail_max))
        .expect("non-empty grid");
    worst.decision = decision;
    Ok((worst, per_x))
}

/// All four mode verdicts plus pointwise certification of the inequalities
/// linking the probability and Cesàro series.
pub fn compare_modes(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    nrange: &NRange,
    cfg: &EngineConfig,
    knobs: &VerdictKnobs,
) -> Result<CompareReport> {
    params.validate()?;
    let limit = CandidateLimit::from(model.limit());
    let prob = density_series(model, scheme, params, nrange, cfg)?;
    let probability = ModeOutcome::Verdict(verdict(&prob, limit.clone(), knobs)?);
    let ces = cesaro_series(model, scheme, params, nrange, cfg);
    let (mut markov_checked, mut markov_violations) = (0, Vec::new());
    let (mut reverse_checked, mut reverse_violations) = (0, Vec::new());
    if let Ok(c) = &ces {
        for r in &c.records {
            let (lo, hi) = r.cesaro.expect("cesaro series");
            markov_checked += 1;
            if !markov_holds(r.density, hi, params.delta, params.p) {
                markov_violations.push(r.n);
            }
            if params.gamma == 1.0 {
                reverse_checked += 1;
                if !reverse_holds(r.density, lo, params.delta, params.p) {
                    reverse_violations.push(r.n);
                }
            }
        }
    }
    Ok(CompareReport {
        probability,
        cesaro: series_outcome(ces, &limit, knobs)?,
        expectation: series_outcome(
            moment_series(model, scheme, params, nrange, cfg),
            &limit,
            knobs,
        )?,
        distribution: outcome(
            distribution_verdict(model, scheme, params, nrange, cfg, knobs).map(|(v, _)| v),
        ),
        markov_checked,
        markov_violations,
        reverse_checked,
        reverse_violations,
    })
}
