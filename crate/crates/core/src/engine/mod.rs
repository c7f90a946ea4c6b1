// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Diagnostic series for the four convergence modes, real-sequence densities
//! and finite-horizon verdicts.

mod compare;
mod modes;
mod params;
mod real;
mod series;
mod verdict;

pub use compare::{
    compare_modes, distribution_verdict, markov_holds, reverse_holds, CompareReport, ModeOutcome,
    CERT_TOL,
};
pub use modes::{
    cdf_density_series, cesaro_series, continuity_grid, density_series, moment_series, JUMP_TOL,
};
pub use params::{BackendChoice, EngineConfig, NRange, OrderParams};
pub use real::{real_stat_density, stat_lim_inf, stat_lim_sup, RealSeq, StatLimitKnobs};
pub use series::{Backend, DiagnosticSeries, Mode, SeriesRecord};
pub use verdict::{
    verdict, CandidateLimit, Decision, Trend, Verdict, VerdictKnobs, TREND_DEAD_BAND,
};
