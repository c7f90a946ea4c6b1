// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::law::{AtomValue, ContinuousLaw, Law, LimitLaw, ProbRule, ProbValue};
use crate::models::rules::{inv_pow, Compiled, IndexRule, PowerTail, ValueRule};
use crate::models::IndexSet;
use crate::numeric::Threshold;

/// One special branch: indices in `set` follow `law`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub set: IndexSet,
    pub law: Law,
}

/// A sequence `{X_k}` described branch by branch, together with its limit `X`.
///
/// Special branches are tried in order and the first whose set contains `k`
/// decides the law of `X_k`; every other index follows the default law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct RVSequenceModel {
    branches: Vec<Branch>,
    default: Law,
    limit: LimitLaw,
    epsilon_below: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ModelRepr {
    #[serde(default)]
    branches: Vec<Branch>,
    default: Law,
    limit: LimitLaw,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon_below: Option<f64>,
}

impl TryFrom<ModelRepr> for RVSequenceModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        let m = RVSequenceModel::new(r.branches, r.default, r.limit)?;
        match r.epsilon_below {
            Some(e) => m.with_epsilon_below(e),
            None => Ok(m),
        }
    }
}

impl From<RVSequenceModel> for ModelRepr {
    fn from(m: RVSequenceModel) -> Self {
        ModelRepr {
            branches: m.branches,
            default: m.default,
            limit: m.limit,
            epsilon_below: m.epsilon_below,
        }
    }
}

/// The set `{k ≥ 1 : |k − x0| < ε}` as an inclusive range, if non-empty.
fn calm_indices(x0: f64, eps: f64) -> Option<Option<(u64, u64)>> {
    const LIMIT: f64 = (1u64 << 50) as f64;
    if !(x0.abs() < LIMIT && eps < LIMIT) {
        return None;
    }
    let calm = |k: i64| k >= 1 && ((k as f64) - x0).abs() < eps;
    let start = ((x0 - eps).floor() as i64).max(1);
    let Some(first) = (start..start + 3).find(|&k| calm(k)) else {
        return Some(None);
    };
    let top = (x0 + eps).floor() as i64 + 1;
    let last = (first..=top).rev().find(|&k| calm(k)).unwrap_or(first);
    Some(Some((first as u64, last as u64)))
}

fn ln_prob(p: &ProbRule, k: u64, complement: bool) -> f64 {
    match (p, complement) {
        (ProbRule::Const(c), false) => c.ln(),
        (ProbRule::Const(c), true) => (1.0 - c).ln(),
        (ProbRule::InversePower(s), false) => -s.value() * (k as f64).ln(),
        (ProbRule::InversePower(s), true) => (1.0 - inv_pow(s.value(), (k as f64).ln())).ln(),
    }
}

fn two_point_moment(a: &AtomValue, b: &AtomValue, p: &ProbRule, k: u64, x0: f64, r: f64) -> f64 {
    let (va, vb) = (a.at(k), b.at(k));
    if va == vb {
        return if va == x0 {
            0.0
        } else {
            (va - x0).abs().powf(r)
        };
    }
    let term = |v: f64, lp: f64| {
        if v == x0 {
            0.0
        } else {
            (r * (v - x0).abs().ln() + lp).exp()
        }
    };
    term(va, ln_prob(p, k, false)) + term(vb, ln_prob(p, k, true))
}

fn law_exceedance(law: &Law, x0: Option<f64>, k: u64, eps: f64) -> Result<ProbValue> {
    if let Law::Joint { joint } = law {
        return Ok(ProbValue::Exact(joint.exceedance(eps)?));
    }
    let x0 = x0.ok_or(Error::NonPointLimitWithoutJoint { k })?;
    Ok(match law {
        Law::Fixed { dist } => ProbValue::Exact(dist.exceedance_about(x0, eps)?),
        Law::TwoPoint { a, b, p_a } => {
            let ex_a = (a.at(k) - x0).abs() >= eps;
            let ex_b = (b.at(k) - x0).abs() >= eps;
            match (ex_a, ex_b) {
                (true, true) => ProbValue::Exact(BigRational::one()),
                (false, false) => ProbValue::Exact(BigRational::zero()),
                (true, false) => p_a.value(k, false)?,
                (false, true) => p_a.value(k, true)?,
            }
        }
        Law::Continuous { law } => ProbValue::Real(law.exceedance(k, x0, eps)),
        Law::Joint { .. } => unreachable!(),
    })
}

fn law_moment(law: &Law, x0: Option<f64>, k: u64, r: f64) -> Result<f64> {
    if let Law::Joint { joint } = law {
        return Ok(joint.abs_moment(r));
    }
    let x0 = x0.ok_or(Error::NonPointLimitWithoutJoint { k })?;
    match law {
        Law::Fixed { dist } => Ok(dist.abs_moment_about(x0, r)),
        Law::TwoPoint { a, b, p_a } => Ok(two_point_moment(a, b, p_a, k, x0, r)),
        _ => Err(Error::MomentUnavailable { k }),
    }
}

/// Start indices of the ranges on which every index-valued atom of a
/// two-point law keeps its exceedance status; `None` when the boundaries are
/// out of native range.
fn two_point_starts(a: &AtomValue, b: &AtomValue, x0: f64, eps: f64) -> Option<Vec<u64>> {
    if !matches!(a, AtomValue::Index) && !matches!(b, AtomValue::Index) {
        return Some(vec![1]);
    }
    let mut starts = vec![1];
    if let Some((first, last)) = calm_indices(x0, eps)? {
        if first > 1 {
            starts.push(first);
        }
        starts.push(last + 1);
    }
    Some(starts)
}

fn piecewise<R>(
    starts: &[u64],
    mut f: impl FnMut(u64) -> Result<R>,
    wrap: fn(Vec<(u64, R)>) -> R,
) -> Result<R> {
    if starts.len() == 1 {
        return f(starts[0]);
    }
    Ok(wrap(
        starts
            .iter()
            .map(|&s| Ok((s, f(s)?)))
            .collect::<Result<Vec<_>>>()?,
    ))
}

fn continuous_exceedance_rule(
    law: &ContinuousLaw,
    x0: f64,
    eps: f64,
    delta: &Threshold,
) -> IndexRule {
    let thr = delta.value();
    match *law {
        ContinuousLaw::Uniform { .. } => IndexRule::Const(law.exceedance(1, x0, eps) >= thr),
        ContinuousLaw::ScaledMax { upper } => {
            let (q1, q2) = ((x0 - eps) / upper, (x0 + eps) / upper);
            if q2 >= 1.0 {
                if q1 <= 0.0 {
                    IndexRule::Const(false)
                } else if q1 >= 1.0 {
                    IndexRule::Const(true)
                } else {
                    IndexRule::Geometric {
                        ln_q: q1.ln(),
                        complement: false,
                        thr,
                    }
                }
            } else if q1 <= 0.0 {
                if q2 <= 0.0 {
                    IndexRule::Const(thr <= 1.0)
                } else {
                    IndexRule::Geometric {
                        ln_q: q2.ln(),
                        complement: true,
                        thr,
                    }
                }
            } else {
                let law = *law;
                IndexRule::Opaque(Arc::new(move |k| Ok(law.exceedance(k, x0, eps) >= thr)))
            }
        }
    }
}

fn continuous_value_rule(law: &ContinuousLaw, x0: f64, eps: f64, p: f64) -> ValueRule {
    match *law {
        ContinuousLaw::Uniform { .. } => ValueRule::Const(law.exceedance(1, x0, eps).powf(p)),
        ContinuousLaw::ScaledMax { upper } => {
            let (q1, q2) = ((x0 - eps) / upper, (x0 + eps) / upper);
            if q2 >= 1.0 && q1 > 0.0 && q1 < 1.0 {
                ValueRule::Geometric { ln_q: q1.ln() * p }
            } else {
                let law = *law;
                ValueRule::Opaque(Arc::new(move |k| Ok(law.exceedance(k, x0, eps).powf(p))))
            }
        }
    }
}

impl RVSequenceModel {
    pub fn new(branches: Vec<Branch>, default: Law, limit: LimitLaw) -> Result<Self> {
        for b in &branches {
            b.set.validate()?;
        }
        let limit_dist = limit.to_distribution();
        for law in branches.iter().map(|b| &b.law).chain([&default]) {
            law.validate()?;
            if let Law::Joint { joint } = law {
                if !joint.limit_marginal().approx_eq(&limit_dist) {
                    return Err(Error::InvalidModel(
                        "joint law's second marginal differs from the limit law".into(),
                    ));
                }
            }
        }
        Ok(Self {
            branches,
            default,
            limit,
            epsilon_below: None,
        })
    }

    /// Every `X_k` and `X` equal to the constant `c`.
    pub fn constant(c: f64) -> Self {
        Self::new(Vec::new(), Law::point(c), LimitLaw::Point(c)).expect("constant model")
    }

    /// Restricts exceedance queries to `ε < bound`.
    pub fn with_epsilon_below(mut self, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidModel(format!(
                "epsilon bound {bound} must be positive"
            )));
        }
        self.epsilon_below = Some(bound);
        Ok(self)
    }

    /// The same sequence judged against another limit.
    pub fn with_limit(&self, limit: LimitLaw) -> Result<Self> {
        let m = Self::new(self.branches.clone(), self.default.clone(), limit)?;
        Ok(Self {
            epsilon_below: self.epsilon_below,
            ..m
        })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn default_law(&self) -> &Law {
        &self.default
    }

    pub fn limit(&self) -> &LimitLaw {
        &self.limit
    }

    pub fn epsilon_below(&self) -> Option<f64> {
        self.epsilon_below
    }

    pub fn law_at(&self, k: u64) -> Result<&Law> {
        for b in &self.branches {
            if b.set.contains_u64(k)? {
                return Ok(&b.law);
            }
        }
        Ok(&self.default)
    }

    pub fn check_epsilon(&self, eps: f64) -> Result<()> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {eps}"
            )));
        }
        if let Some(bound) = self.epsilon_below {
            if eps >= bound {
                return Err(Error::InvalidParameter(format!(
                    "this model is defined for epsilon < {bound}, got {eps}"
                )));
            }
        }
        Ok(())
    }

    fn law_exceedance(&self, law: &Law, k: u64, eps: f64) -> Result<ProbValue> {
        law_exceedance(law, self.limit.as_point(), k, eps)
    }

    /// `P(|X_k − X| ≥ ε)`, exact where the law allows.
    pub fn exceedance_value(&self, k: u64, eps: f64) -> Result<ProbValue> {
        self.check_epsilon(eps)?;
        self.law_exceedance(self.law_at(k)?, k, eps)
    }

    pub fn exceedance_prob(&self, k: u64, eps: f64) -> Result<f64> {
        Ok(self.exceedance_value(k, eps)?.to_f64())
    }

    /// `E|X_k − X|^r`.
    pub fn abs_moment(&self, k: u64, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "moment order must be positive, got {r}"
            )));
        }
        law_moment(self.law_at(k)?, self.limit.as_point(), k, r)
    }

    fn law_cdf(law: &Law, k: u64, x: f64) -> f64 {
        match law {
            Law::Continuous { law } => law.cdf(k, x),
            _ => law.marginal_at(k).expect("atomic law").cdf(x),
        }
    }

    /// `P(X_k ≤ x)`.
    pub fn cdf(&self, k: u64, x: f64) -> Result<f64> {
        Ok(Self::law_cdf(self.law_at(k)?, k, x))
    }

    /// `P(X ≤ x)`.
    pub fn limit_cdf(&self, x: f64) -> f64 {
        self.limit.cdf(x)
    }

    fn sample_law<R: Rng + ?Sized>(law: &Law, k: u64, rng: &mut R) -> (f64, Option<f64>) {
        match law {
            Law::Fixed { dist } => (dist.sample(rng), None),
            Law::TwoPoint { a, b, p_a } => {
                let u: f64 = rng.random();
                (if u < p_a.at(k) { a.at(k) } else { b.at(k) }, None)
            }
            Law::Joint { joint } => {
                let (x, y) = joint.sample(rng);
                (x, Some(y))
            }
            Law::Continuous { law } => (law.sample(k, rng), None),
        }
    }

    /// One draw of `X_k`.
    pub fn sample<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> Result<f64> {
        Ok(Self::sample_law(self.law_at(k)?, k, rng).0)
    }

    /// One draw of the pair `(X_k, X)`.
    pub fn sample_pair<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> Result<(f64, f64)> {
        let law = self.law_at(k)?;
        let x0 = self.limit.as_point();
        if x0.is_none() && !matches!(law, Law::Joint { .. }) {
            return Err(Error::NonPointLimitWithoutJoint { k });
        }
        let (x, y) = Self::sample_law(law, k, rng);
        Ok((x, y.or(x0).expect("limit value")))
    }

    /// The model of `g(X_k)` with limit `g(X)`.
    pub fn pushforward(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let map_law = |law: &Law| -> Result<Law> {
            Ok(match law {
                Law::Fixed { dist } => Law::Fixed {
                    dist: dist.map(&g)?,
                },
                Law::Joint { joint } => Law::Joint {
                    joint: joint.map(&g)?,
                },
                Law::TwoPoint {
                    a: AtomValue::Const(a),
                    b: AtomValue::Const(b),
                    p_a,
                } => {
                    let (ga, gb) = (g(*a), g(*b));
                    if ga == gb {
                        Law::point(ga)
                    } else {
                        Law::TwoPoint {
                            a: AtomValue::Const(ga),
                            b: AtomValue::Const(gb),
                            p_a: *p_a,
                        }
                    }
                }
                Law::TwoPoint { .. } => {
                    return Err(Error::PushforwardUnavailable(
                        "atom value depends on the index".into(),
                    ))
                }
                Law::Continuous { .. } => {
                    return Err(Error::PushforwardUnavailable(
                        "branch has a continuous law".into(),
                    ))
                }
            })
        };
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch {
                    set: b.set.clone(),
                    law: map_law(&b.law)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let limit = match &self.limit {
            LimitLaw::Point(v) => LimitLaw::Point(g(*v)),
            LimitLaw::Discrete(d) => LimitLaw::Discrete(d.map(&g)?),
        };
        Self::new(branches, map_law(&self.default)?, limit)
    }

    /// A bound `M` with every atom of every `X_k` and of `X` in `[−M, M]`, when
    /// the model has one.
    pub fn atom_bound(&self) -> Option<f64> {
        let mut m = self
            .limit
            .to_distribution()
            .atoms()
            .iter()
            .map(|a| a.0.abs())
            .fold(0.0, f64::max);
        for law in self.branches.iter().map(|b| &b.law).chain([&self.default]) {
            let lm = match law {
                Law::Fixed { dist } => dist.atoms().iter().map(|a| a.0.abs()).fold(0.0, f64::max),
                Law::Joint { joint } => joint.atoms().iter().map(|a| a.0.abs()).fold(0.0, f64::max),
                Law::TwoPoint {
                    a: AtomValue::Const(a),
                    b: AtomValue::Const(b),
                    ..
                } => a.abs().max(b.abs()),
                _ => return None,
            };
            m = f64::max(m, lm);
        }
        Some(m)
    }

    fn compile<R>(&self, mut f: impl FnMut(&Law) -> Result<R>) -> Result<Compiled<'_, R>> {
        Ok(Compiled {
            special: self
                .branches
                .iter()
                .map(|b| Ok((&b.set, f(&b.law)?)))
                .collect::<Result<Vec<_>>>()?,
            default: f(&self.default)?,
        })
    }

    fn opaque_exceedance(law: &Law, x0: Option<f64>, eps: f64, delta: &Threshold) -> IndexRule {
        let (law, delta) = (law.clone(), delta.clone());
        IndexRule::Opaque(Arc::new(move |k| {
            Ok(law_exceedance(&law, x0, k, eps)?.at_least(&delta))
        }))
    }

    /// Counting rule for `P(|X_k − X| ≥ ε) ≥ δ`.
    pub(crate) fn compile_exceedance(
        &self,
        eps: f64,
        delta: &Threshold,
    ) -> Result<Compiled<'_, IndexRule>> {
        self.check_epsilon(eps)?;
        let x0 = self.limit.as_point();
        let exact = |q: BigRational| IndexRule::Const(ProbValue::Exact(q).at_least(delta));
        self.compile(|law| {
            Ok(match (law, x0) {
                (Law::Joint { joint }, _) => exact(joint.exceedance(eps)?),
                (_, None) => Self::opaque_exceedance(law, x0, eps, delta),
                (Law::Fixed { dist }, Some(x0)) => exact(dist.exceedance_about(x0, eps)?),
                (Law::TwoPoint { a, b, p_a }, Some(x0)) => match two_point_starts(a, b, x0, eps) {
                    None => Self::opaque_exceedance(law, Some(x0), eps, delta),
                    Some(starts) => piecewise(
                        &starts,
                        |k| {
                            let ex_a = (a.at(k) - x0).abs() >= eps;
                            let ex_b = (b.at(k) - x0).abs() >= eps;
                            Ok(match (ex_a, ex_b, p_a) {
                                (true, true, _) => exact(BigRational::one()),
                                (false, false, _) => IndexRule::Const(false),
                                (true, false, ProbRule::InversePower(s)) => {
                                    IndexRule::PowerTail(PowerTail::new(s, false, delta))
                                }
                                (false, true, ProbRule::InversePower(s)) => {
                                    IndexRule::PowerTail(PowerTail::new(s, true, delta))
                                }
                                (_, comp, ProbRule::Const(_)) => {
                                    IndexRule::Const(p_a.value(k, comp)?.at_least(delta))
                                }
                            })
                        },
                        IndexRule::Piecewise,
                    )?,
                },
                (Law::Continuous { law }, Some(x0)) => {
                    continuous_exceedance_rule(law, x0, eps, delta)
                }
            })
        })
    }

    /// Summand rule for `P(|X_k − X| ≥ ε)^p`.
    pub(crate) fn compile_exceedance_values(
        &self,
        eps: f64,
        p: f64,
    ) -> Result<Compiled<'_, ValueRule>> {
        self.check_epsilon(eps)?;
        let x0 = self.limit.as_point();
        let opaque = |law: &Law, x0: Option<f64>| {
            let law = law.clone();
            ValueRule::Opaque(Arc::new(move |k| {
                Ok(law_exceedance(&law, x0, k, eps)?.to_f64().powf(p))
            }))
        };
        let exact = |q: BigRational| ValueRule::Const(ProbValue::Exact(q).to_f64().powf(p));
        self.compile(|law| {
            Ok(match (law, x0) {
                (Law::Joint { joint }, _) => exact(joint.exceedance(eps)?),
                (_, None) => opaque(law, x0),
                (Law::Fixed { dist }, Some(x0)) => exact(dist.exceedance_about(x0, eps)?),
                (Law::TwoPoint { a, b, p_a }, Some(x0)) => match two_point_starts(a, b, x0, eps) {
                    None => opaque(law, Some(x0)),
                    Some(starts) => piecewise(
                        &starts,
                        |k| {
                            let ex_a = (a.at(k) - x0).abs() >= eps;
                            let ex_b = (b.at(k) - x0).abs() >= eps;
                            Ok(match (ex_a, ex_b, p_a) {
                                (true, true, _) => ValueRule::Const(1.0),
                                (false, false, _) => ValueRule::Const(0.0),
                                (true, false, ProbRule::InversePower(s)) => {
                                    ValueRule::PowerDecay { t: s.value() * p }
                                }
                                (false, true, ProbRule::InversePower(s)) => {
                                    let s = s.value();
                                    ValueRule::Opaque(Arc::new(move |k| {
                                        Ok((1.0 - inv_pow(s, (k as f64).ln())).powf(p))
                                    }))
                                }
                                (_, comp, ProbRule::Const(_)) => {
                                    ValueRule::Const(p_a.value(k, comp)?.to_f64().powf(p))
                                }
                            })
                        },
                        ValueRule::Piecewise,
                    )?,
                },
                (Law::Continuous { law }, Some(x0)) => continuous_value_rule(law, x0, eps, p),
            })
        })
    }

    /// Counting rule for `E|X_k − X|^r ≥ thr`.
    pub(crate) fn compile_moment(&self, r: f64, thr: f64) -> Result<Compiled<'_, IndexRule>> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "moment order must be positive, got {r}"
            )));
        }
        let x0 = self.limit.as_point();
        self.compile(|law| {
            Ok(match (law, x0) {
                (Law::Joint { joint }, _) => IndexRule::Const(joint.abs_moment(r) >= thr),
                (Law::Fixed { dist }, Some(x0)) => {
                    IndexRule::Const(dist.abs_moment_about(x0, r) >= thr)
                }
                _ => {
                    let law = law.clone();
                    IndexRule::Opaque(Arc::new(move |k| Ok(law_moment(&law, x0, k, r)? >= thr)))
                }
            })
        })
    }

    /// Counting rule for `|F_k(x) − F(x)| ≥ δ`.
    pub(crate) fn compile_cdf(&self, x: f64, delta: f64) -> Result<Compiled<'_, IndexRule>> {
        let f = self.limit.cdf(x);
        self.compile(|law| {
            Ok(match law {
                Law::Fixed { dist } => IndexRule::Const((dist.cdf(x) - f).abs() >= delta),
                Law::Joint { joint } => {
                    IndexRule::Const((joint.marginal().cdf(x) - f).abs() >= delta)
                }
                _ => {
                    let law = law.clone();
                    IndexRule::Opaque(Arc::new(move |k| {
                        Ok((Self::law_cdf(&law, k, x) - f).abs() >= delta)
                    }))
                }
            })
        })
    }
}
