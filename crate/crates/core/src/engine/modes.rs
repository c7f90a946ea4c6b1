// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use crate::engine::params::{EngineConfig, NRange, OrderParams};
use crate::engine::series::{build_series, window_count, window_sum, DiagnosticSeries, Mode};
use crate::error::{Error, Result};
use crate::models::RVSequenceModel;
use crate::windows::WindowScheme;

/// Tolerance for a grid point being a jump of the limit CDF.
pub const JUMP_TOL: f64 = 1e-9;

/// Density of `{k ∈ window : P(|X_k − X| ≥ ε) ≥ δ}`.
pub fn density_series(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<DiagnosticSeries> {
    params.validate()?;
    let rules = model.compile_exceedance(params.epsilon, &params.delta_threshold()?)?;
    build_series(Mode::Probability, scheme, nrange, params.gamma, |w| {
        let (count, backend) = window_count(&rules, w, cfg)?;
        Ok((count, backend, None))
    })
}

/// Normalised `Σ_{k ∈ window} P(|X_k − X| ≥ ε)^p`, alongside the probability-mode
/// count of the same window.
pub fn cesaro_series(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<DiagnosticSeries> {
    params.validate()?;
    let counts = model.compile_exceedance(params.epsilon, &params.delta_threshold()?)?;
    let values = model.compile_exceedance_values(params.epsilon, params.p)?;
    build_series(Mode::Cesaro, scheme, nrange, params.gamma, |w| {
        let (count, _) = window_count(&counts, w, cfg)?;
        let (sum, backend) = window_sum(&values, w, cfg)?;
        Ok((count, backend, Some(sum)))
    })
}

/// Density of `{k ∈ window : E|X_k − X|^r ≥ ε}`.
pub fn moment_series(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<DiagnosticSeries> {
    params.validate()?;
    let rules = model.compile_moment(params.r, params.epsilon)?;
    build_series(Mode::Expectation, scheme, nrange, params.gamma, |w| {
        let (count, backend) = window_count(&rules, w, cfg)?;
        Ok((count, backend, None))
    })
}

/// For each grid point `x`, the density of `{k : |F_k(x) − F(x)| ≥ δ}`.
pub fn cdf_density_series(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    x_grid: &[f64],
    nrange: &NRange,
    cfg: &EngineConfig,
) -> Result<Vec<(f64, DiagnosticSeries)>> {
    params.validate()?;
    let jumps = model.limit().jumps();
    x_grid
        .iter()
        .map(|&x| {
            if jumps.iter().any(|j| (x - j).abs() <= JUMP_TOL) {
                return Err(Error::GridHitsDiscontinuity { x });
            }
            let rules = model.compile_cdf(x, params.delta)?;
            let series = build_series(Mode::Distribution, scheme, nrange, params.gamma, |w| {
                let (count, backend) = window_count(&rules, w, cfg)?;
                Ok((count, backend, None))
            })?;
            Ok((x, series))
        })
        .collect()
}

/// Continuity points of the limit CDF: one spacing below the smallest atom,
/// midpoints between atoms, one spacing above the largest.
pub fn continuity_grid(model: &RVSequenceModel) -> Vec<f64> {
    let jumps = model.limit().jumps();
    let gap = jumps
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let spacing = if gap.is_finite() { gap / 2.0 } else { 0.5 };
    let mut grid = vec![jumps[0] - spacing];
    grid.extend(jumps.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    grid.push(jumps[jumps.len() - 1] + spacing);
    grid
}
