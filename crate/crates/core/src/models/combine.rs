// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Union-bound exceedance for linear combinations `c_A X_k + c_B Y_k`.

use crate::error::{Error, Result};
use crate::models::RVSequenceModel;

/// Upper bound on `P(|c_A X_k + c_B Y_k − (c_A X + c_B Y)| ≥ ε)`.
#[derive(Clone, Debug)]
pub struct LinearBound {
    terms: Vec<(RVSequenceModel, f64)>,
}

pub fn combine_linear(
    a: &RVSequenceModel,
    b: &RVSequenceModel,
    ca: f64,
    cb: f64,
) -> Result<LinearBound> {
    if !(ca.is_finite() && cb.is_finite()) || (ca == 0.0 && cb == 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coefficients must be finite and not both zero, got ({ca}, {cb})"
        )));
    }
    let terms = [(a, ca), (b, cb)]
        .into_iter()
        .filter(|t| t.1 != 0.0)
        .map(|(m, c)| (m.clone(), c))
        .collect();
    Ok(LinearBound { terms })
}

impl LinearBound {
    /// `min(1, Σ p_k(ε / (2|c|)))` over the non-zero terms.
    pub fn exceedance_prob(&self, k: u64, eps: f64) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            total += m.exceedance_prob(k, eps / (2.0 * c.abs()))?;
        }
        Ok(total.min(1.0))
    }
}
