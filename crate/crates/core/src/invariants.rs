// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Pointwise inclusion inequalities, checked over a grid of models, schemes
//! and parameters.

use serde::{Deserialize, Serialize};

use crate::corpus::{self, NamedScheme};
use crate::engine::{
    cesaro_series, density_series, markov_holds, moment_series, reverse_holds, DiagnosticSeries,
    EngineConfig, NRange, OrderParams, SeriesRecord, CERT_TOL,
};
use crate::error::{Error, Result};
use crate::models::RVSequenceModel;
use crate::numeric;
use crate::windows::{Formula, WindowScheme};

pub const GAMMA_MONOTONE: &str = "gammaMonotone";
pub const DELTA_MONOTONE: &str = "deltaMonotone";
pub const P_MONOTONE: &str = "pMonotone";
pub const MARKOV: &str = "markovBound";
pub const REVERSE: &str = "reverseBound";
pub const REFINEMENT: &str = "refinementDomination";
pub const CHEBYSHEV_TRANSFER: &str = "chebyshevTransfer";
pub const CHEBYSHEV_POINTWISE: &str = "chebyshevPointwise";
pub const BOUNDED_MOMENT: &str = "boundedMoment";
pub const BACKEND_EQUIVALENCE: &str = "backendEquivalence";

const ALL: [&str; 10] = [
    GAMMA_MONOTONE,
    DELTA_MONOTONE,
    P_MONOTONE,
    MARKOV,
    REVERSE,
    REFINEMENT,
    CHEBYSHEV_TRANSFER,
    CHEBYSHEV_POINTWISE,
    BOUNDED_MOMENT,
    BACKEND_EQUIVALENCE,
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridModel {
    pub name: String,
    pub model: RVSequenceModel,
}

/// `fine` windows lie inside the `coarse` windows of the same index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Refinement {
    pub fine: String,
    pub coarse: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantGrid {
    pub models: Vec<GridModel>,
    /// Every window `1..=horizon` of each scheme is enumerated.
    pub schemes: Vec<NamedScheme>,
    pub params: Vec<OrderParams>,
    #[serde(default)]
    pub refinements: Vec<Refinement>,
    /// Indices `1..=k_max` for the per-index inequalities.
    pub k_max: u64,
}

/// Corpus ids used by the standard grid.
pub const STANDARD_MODELS: [&str; 6] = ["ex2_1", "ex2_3", "ex2_4", "thm2_4", "ex3_1", "ex4_1"];

impl InvariantGrid {
    pub fn standard() -> Result<Self> {
        let models = STANDARD_MODELS
            .iter()
            .map(|id| {
                Ok(GridModel {
                    name: id.to_string(),
                    model: corpus::build(id)?.model,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let named = |name: &str, scheme| NamedScheme {
            name: name.into(),
            scheme,
        };
        Ok(Self {
            models,
            schemes: vec![
                named("classical", WindowScheme::classical(300)?),
                named("squares", WindowScheme::squares(60)?),
                named("powerOfN2", WindowScheme::power_of_n(2, 40)?),
                named(
                    "squaresHead",
                    WindowScheme::custom(Formula::SquaresHead, 60)?,
                ),
            ],
            params: standard_params(),
            refinements: vec![Refinement {
                fine: "squaresHead".into(),
                coarse: "squares".into(),
            }],
            k_max: 2000,
        })
    }

    fn scheme(&self, name: &str) -> Result<&WindowScheme> {
        self.schemes
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.scheme)
            .ok_or_else(|| Error::UnknownId(format!("no scheme named {name} in the grid")))
    }
}

/// Four combinations of `(γ, ε, δ, p, r)`.
pub fn standard_params() -> Vec<OrderParams> {
    vec![
        OrderParams::new(0.5, 0.5, 0.5),
        OrderParams::new(0.3, 0.25, 0.2).with_p(2.0).with_r(2.0),
        OrderParams::new(0.8, 0.75, 0.1).with_p(0.5).with_r(0.5),
        OrderParams::new(1.0, 0.5, 0.05).with_p(3.0),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub invariant: String,
    pub model: String,
    pub scheme: Option<String>,
    pub params: OrderParams,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantTally {
    pub invariant: String,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantReport {
    pub tallies: Vec<InvariantTally>,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tally(&self, invariant: &str) -> Option<&InvariantTally> {
        self.tallies.iter().find(|t| t.invariant == invariant)
    }
}

struct Ctx<'a> {
    report: &'a mut InvariantReport,
    model: &'a str,
    scheme: Option<&'a str>,
    params: OrderParams,
}

impl Ctx<'_> {
    fn check(
        &mut self,
        invariant: &str,
        ok: bool,
        n: Option<u64>,
        k: Option<u64>,
        detail: impl FnOnce() -> String,
    ) {
        let t = self
            .report
            .tallies
            .iter_mut()
            .find(|t| t.invariant == invariant)
            .expect("known invariant");
        t.checked += 1;
        if !ok {
            t.violations += 1;
            self.report.violations.push(Violation {
                invariant: invariant.into(),
                model: self.model.into(),
                scheme: self.scheme.map(Into::into),
                params: self.params,
                n,
                k,
                detail: detail(),
            });
        }
    }
}

fn with_gamma(p: &OrderParams, gamma: f64) -> OrderParams {
    OrderParams { gamma, ..*p }
}

fn pairs<'a>(
    a: &'a DiagnosticSeries,
    b: &'a DiagnosticSeries,
) -> impl Iterator<Item = (&'a SeriesRecord, &'a SeriesRecord)> {
    a.records.iter().zip(&b.records)
}

/// Runs every invariant over the grid. Series are enumerated exactly; the
/// analytic backend is compared against them wherever it applies.
pub fn check_invariants(grid: &InvariantGrid) -> Result<InvariantReport> {
    let mut report = InvariantReport {
        tallies: ALL
            .iter()
            .map(|name| InvariantTally {
                invariant: name.to_string(),
                checked: 0,
                violations: 0,
            })
            .collect(),
        violations: Vec::new(),
    };
    let exact = EngineConfig::enumerated();
    for gm in &grid.models {
        let model = &gm.model;
        for params in &grid.params {
            params.validate()?;
            pointwise(
                &mut Ctx {
                    report: &mut report,
                    model: &gm.name,
                    scheme: None,
                    params: *params,
                },
                model,
                grid.k_max,
            )?;
            for ns in &grid.schemes {
                let mut ctx = Ctx {
                    report: &mut report,
                    model: &gm.name,
                    scheme: Some(&ns.name),
                    params: *params,
                };
                per_scheme(&mut ctx, model, &ns.scheme, params, &exact)?;
            }
            for rf in &grid.refinements {
                let label = format!("{} in {}", rf.fine, rf.coarse);
                let mut ctx = Ctx {
                    report: &mut report,
                    model: &gm.name,
                    scheme: Some(&label),
                    params: *params,
                };
                refinement(
                    &mut ctx,
                    model,
                    grid.scheme(&rf.fine)?,
                    grid.scheme(&rf.coarse)?,
                    params,
                    &exact,
                )?;
            }
        }
    }
    Ok(report)
}

fn per_scheme(
    ctx: &mut Ctx<'_>,
    model: &RVSequenceModel,
    scheme: &WindowScheme,
    params: &OrderParams,
    exact: &EngineConfig,
) -> Result<()> {
    let nr = NRange::range(1, scheme.horizon());
    let prob = density_series(model, scheme, params, &nr, exact)?;

    let top = density_series(model, scheme, &with_gamma(params, 1.0), &nr, exact)?;
    for (a, b) in pairs(&prob, &top) {
        ctx.check(
            GAMMA_MONOTONE,
            a.count == b.count && a.density >= b.density,
            Some(a.n),
            None,
            || format!("d(γ={})={} < d(γ=1)={}", params.gamma, a.density, b.density),
        );
    }

    let delta2 = (2.0 * params.delta).min(1.0);
    let strict = density_series(
        model,
        scheme,
        &OrderParams {
            delta: delta2,
            ..*params
        },
        &nr,
        exact,
    )?;
    for (a, b) in pairs(&prob, &strict) {
        ctx.check(DELTA_MONOTONE, a.count >= b.count, Some(a.n), None, || {
            format!(
                "count(δ={})={} < count(δ={delta2})={}",
                params.delta, a.count, b.count
            )
        });
    }

    let ces = cesaro_series(model, scheme, params, &nr, exact)?;
    let ces_q = cesaro_series(model, scheme, &params.with_p(2.0 * params.p), &nr, exact)?;
    for (a, b) in pairs(&ces, &ces_q) {
        let (lo_p, hi_q) = (a.cesaro.expect("cesaro").0, b.cesaro.expect("cesaro").1);
        ctx.check(P_MONOTONE, hi_q <= lo_p, Some(a.n), None, || {
            format!(
                "cesaro(q={})={hi_q} > cesaro(p={})={lo_p}",
                2.0 * params.p,
                params.p
            )
        });
    }
    for r in &ces.records {
        let hi = r.cesaro.expect("cesaro").1;
        ctx.check(
            MARKOV,
            markov_holds(r.density, hi, params.delta, params.p),
            Some(r.n),
            None,
            || {
                format!(
                    "d={} > cesaro/δ^p={}",
                    r.density,
                    hi / params.delta.powf(params.p)
                )
            },
        );
    }

    let ces1 = cesaro_series(model, scheme, &with_gamma(params, 1.0), &nr, exact)?;
    for r in &ces1.records {
        let lo = r.cesaro.expect("cesaro").0;
        ctx.check(
            REVERSE,
            reverse_holds(r.density, lo, params.delta, params.p),
            Some(r.n),
            None,
            || {
                format!(
                    "cesaro={lo} > δ^p + d={}",
                    params.delta.powf(params.p) + r.density
                )
            },
        );
    }

    let cheb = OrderParams {
        epsilon: params.delta * params.epsilon.powf(params.r),
        ..*params
    };
    match moment_series(model, scheme, &cheb, &nr, exact) {
        Ok(m) => {
            for (a, b) in pairs(&m, &prob) {
                ctx.check(
                    CHEBYSHEV_TRANSFER,
                    a.count >= b.count,
                    Some(a.n),
                    None,
                    || format!("moment count {} < probability count {}", a.count, b.count),
                );
            }
        }
        Err(Error::MomentUnavailable { .. }) => {}
        Err(e) => return Err(e),
    }

    match density_series(model, scheme, params, &nr, &EngineConfig::analytic()) {
        Ok(an) => {
            for (a, b) in pairs(&an, &prob) {
                ctx.check(
                    BACKEND_EQUIVALENCE,
                    a.count == b.count,
                    Some(a.n),
                    None,
                    || format!("analytic {} != enumerated {}", a.count, b.count),
                );
            }
        }
        Err(Error::AnalyticCountingUnavailable { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

fn refinement(
    ctx: &mut Ctx<'_>,
    model: &RVSequenceModel,
    fine: &WindowScheme,
    coarse: &WindowScheme,
    params: &OrderParams,
    exact: &EngineConfig,
) -> Result<()> {
    let nr = NRange::range(1, fine.horizon().min(coarse.horizon()));
    let df = density_series(model, fine, params, &nr, exact)?;
    let dc = density_series(model, coarse, params, &nr, exact)?;
    let mut c = 0.0f64;
    for (f, g) in pairs(&df, &dc) {
        if f.lo < g.lo || f.hi > g.hi {
            return Err(Error::InvalidParameter(format!(
                "window {} of the fine scheme is not inside the coarse one",
                f.n
            )));
        }
        c = c.max(
            numeric::h_gamma(&g.width, params.gamma) / numeric::h_gamma(&f.width, params.gamma),
        );
    }
    for (f, g) in pairs(&df, &dc) {
        ctx.check(
            REFINEMENT,
            f.density <= c * g.density * (1.0 + CERT_TOL),
            Some(f.n),
            None,
            || format!("d'={} > C·d={}", f.density, c * g.density),
        );
    }
    Ok(())
}

/// Per-index Chebyshev and bounded-moment inequalities.
fn pointwise(ctx: &mut Ctx<'_>, model: &RVSequenceModel, k_max: u64) -> Result<()> {
    let (eps, r) = (ctx.params.epsilon, ctx.params.r);
    let bound = model.atom_bound();
    for k in 1..=k_max {
        let p = model.exceedance_prob(k, eps)?;
        let m = match model.abs_moment(k, r) {
            Ok(m) => m,
            Err(Error::MomentUnavailable { .. }) => return Ok(()),
            Err(e) => return Err(e),
        };
        let er = eps.powf(r);
        ctx.check(
            CHEBYSHEV_POINTWISE,
            p * er <= m * (1.0 + CERT_TOL),
            None,
            Some(k),
            || format!("P={p} > E/ε^r={}", m / er),
        );
        if let Some(big_m) = bound {
            let rhs = er + (2.0 * big_m).powf(r) * p;
            ctx.check(
                BOUNDED_MOMENT,
                m <= rhs * (1.0 + CERT_TOL),
                None,
                Some(k),
                || format!("E={m} > ε^r + (2M)^r·P={rhs}"),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_meets_minimum_sizes() {
        let g = InvariantGrid::standard().unwrap();
        assert!(g.models.len() >= 3);
        assert!(g.schemes.len() >= 3);
        assert!(g.params.len() >= 4);
    }
}
