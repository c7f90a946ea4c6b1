// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded sampling estimates of exceedance probabilities with Hoeffding bands.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{EngineConfig, NRange, OrderParams};
use crate::error::{Error, Result};
use crate::models::RVSequenceModel;
use crate::numeric;
use crate::serde_big;
use crate::windows::WindowScheme;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MCConfig {
    pub samples_per_index: u64,
    pub seed: u64,
    /// Miss probability `α` of each Hoeffding interval.
    pub confidence: f64,
}

impl MCConfig {
    pub fn new(samples_per_index: u64, seed: u64, confidence: f64) -> Result<Self> {
        let cfg = Self {
            samples_per_index,
            seed,
            confidence,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_index == 0 {
            return Err(Error::InvalidParameter(
                "samplesPerIndex must be at least 1".into(),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }

    /// `w = √(ln(2/α) / (2S))`.
    pub fn half_width(&self) -> f64 {
        ((2.0 / self.confidence).ln() / (2.0 * self.samples_per_index as f64)).sqrt()
    }

    /// The stream for index `k`; independent of every other index.
    fn rng_for(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Estimate {
    pub k: u64,
    pub estimate: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn lower(&self) -> f64 {
        self.estimate - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.half_width
    }
}

/// Fraction of sampled `(X_k, X)` pairs with `|X_k − X| ≥ ε`.
pub fn estimate_exceedance(
    model: &RVSequenceModel,
    k: u64,
    eps: f64,
    cfg: &MCConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    model.check_epsilon(eps)?;
    let mut rng = cfg.rng_for(k);
    let mut hits = 0u64;
    for _ in 0..cfg.samples_per_index {
        let (x, y) = model.sample_pair(k, &mut rng)?;
        if (x - y).abs() >= eps {
            hits += 1;
        }
    }
    Ok(Estimate {
        k,
        estimate: hits as f64 / cfg.samples_per_index as f64,
        half_width: cfg.half_width(),
    })
}

/// One window of a banded series: counts with `p̂ − w`, `p̂` and `p̂ + w` in
/// place of the exact probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BandRecord {
    pub n: u64,
    #[serde(with = "serde_big::single")]
    pub lo: BigUint,
    #[serde(with = "serde_big::single")]
    pub hi: BigUint,
    #[serde(with = "serde_big::single")]
    pub width: BigUint,
    pub count_lo: u64,
    pub count_hat: u64,
    pub count_hi: u64,
    pub d_lo: f64,
    pub d_hat: f64,
    pub d_hi: f64,
    /// Indices whose interval `(p̂ − w, p̂ + w]` contains `δ`.
    pub uncertain: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BandSeries {
    pub gamma: f64,
    pub half_width: f64,
    pub records: Vec<BandRecord>,
}

/// Sampled density band for `{k ∈ window : P(|X_k − X| ≥ ε) ≥ δ}`.
pub fn mc_density_series(
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    cfg: &MCConfig,
    nrange: &NRange,
    engine: &EngineConfig,
) -> Result<BandSeries> {
    params.validate()?;
    cfg.validate()?;
    let mut records = Vec::new();
    for n in nrange.indices(scheme)? {
        let w = scheme.window(n)?;
        let (lo, hi) = match w.as_u64() {
            Some(b) if w.width <= BigUint::from(engine.enum_limit) => b,
            _ => {
                return Err(Error::WindowTooLarge {
                    n,
                    width: w.width.to_string(),
                    limit: engine.enum_limit,
                })
            }
        };
        let estimates = (lo..=hi)
            .into_par_iter()
            .map(|k| estimate_exceedance(model, k, params.epsilon, cfg))
            .collect::<Result<Vec<_>>>()?;
        let delta = params.delta;
        let count =
            |f: fn(&Estimate) -> f64| estimates.iter().filter(|e| f(e) >= delta).count() as u64;
        let (count_lo, count_hat, count_hi) = (
            count(Estimate::lower),
            count(|e| e.estimate),
            count(Estimate::upper),
        );
        let uncertain = estimates
            .iter()
            .filter(|e| e.lower() < delta && delta <= e.upper())
            .map(|e| e.k)
            .collect();
        let d = |c: u64| numeric::density(&BigUint::from(c), &w.width, params.gamma);
        records.push(BandRecord {
            n,
            d_lo: d(count_lo),
            d_hat: d(count_hat),
            d_hi: d(count_hi),
            count_lo,
            count_hat,
            count_hi,
            uncertain,
            lo: w.lo,
            hi: w.hi,
            width: w.width,
        });
    }
    Ok(BandSeries {
        gamma: params.gamma,
        half_width: cfg.half_width(),
        records,
    })
}
