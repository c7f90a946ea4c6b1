// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::engine::params::{BackendChoice, EngineConfig, NRange};
use crate::error::{Error, Result};
use crate::models::rules::{Compiled, IndexRule, ValueRule};
use crate::numeric;
use crate::serde_big;
use crate::windows::{Window, WindowScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    Probability,
    Cesaro,
    Expectation,
    Distribution,
    RealSequence,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Probability => "probability",
            Mode::Cesaro => "cesaro",
            Mode::Expectation => "expectation",
            Mode::Distribution => "distribution",
            Mode::RealSequence => "realSequence",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Backend {
    Analytic,
    Enumerated,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Enumerated => "enumerated",
        }
    }
}

/// One window of a diagnostic series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesRecord {
    pub n: u64,
    #[serde(with = "serde_big::single")]
    pub lo: BigUint,
    #[serde(with = "serde_big::single")]
    pub hi: BigUint,
    #[serde(with = "serde_big::single")]
    pub width: BigUint,
    #[serde(with = "serde_big::single")]
    pub count: BigUint,
    /// `count / width^γ`.
    pub density: f64,
    /// Lower and upper bound on the normalised Cesàro sum; equal when enumerated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cesaro: Option<(f64, f64)>,
    pub backend: Backend,
}

impl SeriesRecord {
    /// The value a verdict looks at, as (lower, upper).
    pub fn value_bounds(&self, mode: Mode) -> (f64, f64) {
        match (mode, self.cesaro) {
            (Mode::Cesaro, Some(c)) => c,
            _ => (self.density, self.density),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticSeries {
    pub mode: Mode,
    pub gamma: f64,
    pub records: Vec<SeriesRecord>,
}

impl DiagnosticSeries {
    pub fn densities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.density).collect()
    }

    pub fn counts(&self) -> Vec<BigUint> {
        self.records.iter().map(|r| r.count.clone()).collect()
    }

    pub fn record(&self, n: u64) -> Option<&SeriesRecord> {
        self.records.iter().find(|r| r.n == n)
    }
}

fn use_enumeration(w: &Window, cfg: &EngineConfig) -> Result<bool> {
    let small = w.width <= BigUint::from(cfg.enum_limit) && w.as_u64().is_some();
    match cfg.backend {
        BackendChoice::Auto => Ok(small),
        BackendChoice::Analytic => Ok(false),
        BackendChoice::Enumerated if small => Ok(true),
        BackendChoice::Enumerated => Err(Error::WindowTooLarge {
            n: w.n,
            width: w.width.to_string(),
            limit: cfg.enum_limit,
        }),
    }
}

pub(crate) fn enumerate_count(rules: &Compiled<'_, IndexRule>, lo: u64, hi: u64) -> Result<u64> {
    let mut count = 0u64;
    for k in lo..=hi {
        if rules.rule_for(k)?.holds(k)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact count of counted indices in the window from closed-form structure.
pub(crate) fn analytic_count(rules: &Compiled<'_, IndexRule>, w: &Window) -> Result<BigUint> {
    let unavailable = |reason: &str| Error::AnalyticCountingUnavailable {
        n: w.n,
        reason: reason.into(),
    };
    if !rules.sets_disjoint() {
        return Err(unavailable("special index sets are not provably disjoint"));
    }
    let mut total = BigUint::zero();
    for (set, rule) in &rules.special {
        let ranges = rule.satisfied_ranges(&w.lo, &w.hi).ok_or_else(|| {
            unavailable("a special branch has no closed-form threshold structure")
        })?;
        for (a, b) in ranges {
            total += set.count_in_range(&a, &b)?;
        }
    }
    let ranges = rules
        .default
        .satisfied_ranges(&w.lo, &w.hi)
        .ok_or_else(|| unavailable("the default branch has no closed-form threshold structure"))?;
    for (a, b) in ranges {
        let mut len = &b - &a + 1u32;
        for (set, _) in &rules.special {
            len -= set.count_in_range(&a, &b)?;
        }
        total += len;
    }
    Ok(total)
}

pub(crate) fn window_count(
    rules: &Compiled<'_, IndexRule>,
    w: &Window,
    cfg: &EngineConfig,
) -> Result<(BigUint, Backend)> {
    if use_enumeration(w, cfg)? {
        let (lo, hi) = w.as_u64().expect("checked");
        Ok((enumerate_count(rules, lo, hi)?.into(), Backend::Enumerated))
    } else {
        Ok((analytic_count(rules, w)?, Backend::Analytic))
    }
}

/// Bounds on the window sum of per-index values.
pub(crate) fn window_sum(
    rules: &Compiled<'_, ValueRule>,
    w: &Window,
    cfg: &EngineConfig,
) -> Result<((f64, f64), Backend)> {
    if use_enumeration(w, cfg)? {
        let (lo, hi) = w.as_u64().expect("checked");
        let mut s = 0.0;
        for k in lo..=hi {
            s += rules.rule_for(k)?.value(k)?;
        }
        return Ok(((s, s), Backend::Enumerated));
    }
    let unavailable = |reason: &str| Error::AnalyticSummationUnavailable {
        n: w.n,
        reason: reason.into(),
    };
    if !rules.sets_disjoint() {
        return Err(unavailable("special index sets are not provably disjoint"));
    }
    let (mut lo_sum, mut hi_sum) = (0.0, 0.0);
    let mut members = BigUint::zero();
    for (set, rule) in &rules.special {
        let c = set.count_in_range(&w.lo, &w.hi)?;
        let (a, b) = rule
            .subset_sum_bounds(&c, &w.lo, &w.hi)
            .ok_or_else(|| unavailable("a special branch has no summable closed form"))?;
        lo_sum += a;
        hi_sum += b;
        members += c;
    }
    let (da, db) = rules
        .default
        .range_sum_bounds(&w.lo, &w.hi)
        .ok_or_else(|| unavailable("the default branch has no summable closed form"))?;
    let (ma, mb) = rules
        .default
        .subset_sum_bounds(&members, &w.lo, &w.hi)
        .ok_or_else(|| unavailable("the default branch has no summable closed form"))?;
    lo_sum += (da - mb).max(0.0);
    hi_sum += (db - ma).max(0.0);
    Ok(((lo_sum, hi_sum), Backend::Analytic))
}

/// Runs `per_window` over every window of the range and assembles records.
pub(crate) fn build_series(
    mode: Mode,
    scheme: &WindowScheme,
    nrange: &NRange,
    gamma: f64,
    mut per_window: impl FnMut(&Window) -> Result<(BigUint, Backend, Option<(f64, f64)>)>,
) -> Result<DiagnosticSeries> {
    let mut records = Vec::new();
    for n in nrange.indices(scheme)? {
        let w = scheme.window(n)?;
        let (count, backend, cesaro_sum) = per_window(&w)?;
        let hg = w.h_gamma(gamma);
        records.push(SeriesRecord {
            n,
            density: numeric::density(&count, &w.width, gamma),
            cesaro: cesaro_sum.map(|(a, b)| (a / hg, b / hg)),
            count,
            backend,
            lo: w.lo,
            hi: w.hi,
            width: w.width,
        });
    }
    Ok(DiagnosticSeries {
        mode,
        gamma,
        records,
    })
}
