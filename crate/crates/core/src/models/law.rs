// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-index laws of `X_k` and the law of the limit `X`.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::rules::{geometric, inv_pow, PowerTail};
use crate::numeric::{decimal_rational, Exponent, Threshold};

/// Tolerance on total probability.
pub const PROB_TOL: f64 = 1e-12;

fn check_prob(p: f64) -> Result<()> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidModel(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_total(total: f64) -> Result<()> {
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidModel(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

fn inverse_cdf<T: Copy>(atoms: impl Iterator<Item = (T, f64)>, u: f64) -> Option<T> {
    let mut acc = 0.0;
    let mut last = None;
    for (v, p) in atoms {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(v);
        if u < acc {
            return last;
        }
    }
    last
}

/// A finitely supported law, atoms sorted by value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistRepr", into = "DistRepr")]
pub struct DiscreteDistribution {
    atoms: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DistRepr {
    atoms: Vec<(f64, f64)>,
}

impl TryFrom<DistRepr> for DiscreteDistribution {
    type Error = Error;
    fn try_from(r: DistRepr) -> Result<Self> {
        DiscreteDistribution::new(r.atoms)
    }
}

impl From<DiscreteDistribution> for DistRepr {
    fn from(d: DiscreteDistribution) -> Self {
        DistRepr { atoms: d.atoms }
    }
}

impl DiscreteDistribution {
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidModel("distribution without atoms".into()));
        }
        for &(v, p) in &atoms {
            if !v.is_finite() {
                return Err(Error::InvalidModel(format!("atom value {v} is not finite")));
            }
            check_prob(p)?;
        }
        check_total(atoms.iter().map(|a| a.1).sum())?;
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidModel("atom values must be distinct".into()));
        }
        Ok(Self { atoms })
    }

    pub fn point(v: f64) -> Self {
        Self::new(vec![(v, 1.0)]).expect("finite point mass")
    }

    /// Atoms with exactly equal values merged, probabilities added.
    fn merged(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = pairs.into_iter().collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += p,
                _ => out.push((v, p)),
            }
        }
        Self::new(out)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn as_point(&self) -> Option<f64> {
        match self.atoms.as_slice() {
            [(v, _)] => Some(*v),
            _ => None,
        }
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.0 <= x)
            .map(|a| a.1)
            .sum::<f64>()
            .min(1.0)
    }

    /// `P(|X − x0| ≥ ε)` as the exact sum of the atom probabilities read as decimals.
    pub fn exceedance_about(&self, x0: f64, eps: f64) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for &(v, p) in &self.atoms {
            if (v - x0).abs() >= eps {
                total += decimal_rational(p)?;
            }
        }
        Ok(total)
    }

    /// `E|X − x0|^r`.
    pub fn abs_moment_about(&self, x0: f64, r: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.0 != x0)
            .map(|&(v, p)| (v - x0).abs().powf(r) * p)
            .sum()
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::merged(self.atoms.iter().map(|&(v, p)| (g(v), p)))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        inverse_cdf(self.atoms.iter().copied(), rng.random::<f64>()).expect("non-empty law")
    }

    /// Whether two laws have the same atoms, probabilities within tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() <= PROB_TOL)
    }
}

/// A finitely supported law of the pair `(X_k, X)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRepr", into = "JointRepr")]
pub struct JointDistribution {
    atoms: Vec<(f64, f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct JointRepr {
    atoms: Vec<(f64, f64, f64)>,
}

impl TryFrom<JointRepr> for JointDistribution {
    type Error = Error;
    fn try_from(r: JointRepr) -> Result<Self> {
        JointDistribution::new(r.atoms)
    }
}

impl From<JointDistribution> for JointRepr {
    fn from(d: JointDistribution) -> Self {
        JointRepr { atoms: d.atoms }
    }
}

impl JointDistribution {
    /// Atoms are `(x_k, x, prob)`.
    pub fn new(mut atoms: Vec<(f64, f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidModel("joint law without atoms".into()));
        }
        for &(a, b, p) in &atoms {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "joint atom ({a}, {b}) is not finite"
                )));
            }
            check_prob(p)?;
        }
        check_total(atoms.iter().map(|a| a.2).sum())?;
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        if atoms
            .windows(2)
            .any(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1)
        {
            return Err(Error::InvalidModel("joint atoms must be distinct".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64, f64)] {
        &self.atoms
    }

    pub fn marginal(&self) -> DiscreteDistribution {
        DiscreteDistribution::merged(self.atoms.iter().map(|a| (a.0, a.2)))
            .expect("valid joint law")
    }

    pub fn limit_marginal(&self) -> DiscreteDistribution {
        DiscreteDistribution::merged(self.atoms.iter().map(|a| (a.1, a.2)))
            .expect("valid joint law")
    }

    pub fn exceedance(&self, eps: f64) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for &(a, b, p) in &self.atoms {
            if (a - b).abs() >= eps {
                total += decimal_rational(p)?;
            }
        }
        Ok(total)
    }

    pub fn abs_moment(&self, r: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.0 != a.1)
            .map(|&(a, b, p)| (a - b).abs().powf(r) * p)
            .sum()
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let mut atoms: Vec<(f64, f64, f64)> = self
            .atoms
            .iter()
            .map(|&(a, b, p)| (g(a), g(b), p))
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(f64, f64, f64)> = Vec::with_capacity(atoms.len());
        for (a, b, p) in atoms {
            match out.last_mut() {
                Some(l) if l.0 == a && l.1 == b => l.2 += p,
                _ => out.push((a, b, p)),
            }
        }
        Self::new(out)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        inverse_cdf(
            self.atoms.iter().map(|&(a, b, p)| ((a, b), p)),
            rng.random::<f64>(),
        )
        .expect("non-empty law")
    }
}

/// Atom value of a two-point law: a constant or the index `k` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AtomValue {
    Const(f64),
    Index,
}

impl AtomValue {
    pub fn at(&self, k: u64) -> f64 {
        match self {
            AtomValue::Const(v) => *v,
            AtomValue::Index => k as f64,
        }
    }
}

/// Probability of the first atom of a two-point law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ProbRule {
    Const(f64),
    /// `k^{-s}`.
    InversePower(Exponent),
}

impl ProbRule {
    pub fn at(&self, k: u64) -> f64 {
        match self {
            ProbRule::Const(p) => *p,
            ProbRule::InversePower(s) => inv_pow(s.value(), (k as f64).ln()),
        }
    }

    /// Exact value of `p` (or of `1 − p` when `complement`).
    pub fn value(&self, k: u64, complement: bool) -> Result<ProbValue> {
        Ok(match self {
            ProbRule::Const(p) => {
                let p = decimal_rational(*p)?;
                ProbValue::Exact(if complement {
                    BigRational::one() - p
                } else {
                    p
                })
            }
            ProbRule::InversePower(s) => ProbValue::InvPow {
                k,
                s: *s,
                complement,
            },
        })
    }
}

/// Laws with a density, given through their CDF.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ContinuousLaw {
    /// Uniform on `(lo, hi)`, the same for every `k`.
    Uniform { lo: f64, hi: f64 },
    /// `upper · max(U_1, …, U_k)`: CDF `(x/upper)^k` on `[0, upper]`.
    ScaledMax { upper: f64 },
}

impl ContinuousLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ContinuousLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            ContinuousLaw::ScaledMax { upper } => upper.is_finite() && upper > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!(
                "ill-formed continuous law {self:?}"
            )))
        }
    }

    pub fn cdf(&self, k: u64, x: f64) -> f64 {
        match *self {
            ContinuousLaw::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            ContinuousLaw::ScaledMax { upper } => {
                let q = x / upper;
                if q <= 0.0 {
                    0.0
                } else if q >= 1.0 {
                    1.0
                } else {
                    geometric(q.ln(), k as f64)
                }
            }
        }
    }

    /// `P(|X_k − x0| ≥ ε)`.
    pub fn exceedance(&self, k: u64, x0: f64, eps: f64) -> f64 {
        (self.cdf(k, x0 - eps) + 1.0 - self.cdf(k, x0 + eps)).clamp(0.0, 1.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match *self {
            ContinuousLaw::Uniform { lo, hi } => lo + u * (hi - lo),
            ContinuousLaw::ScaledMax { upper } => upper * (u.ln() / k as f64).exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Law {
    /// The same discrete law for every index of the branch.
    Fixed {
        dist: DiscreteDistribution,
    },
    /// `P(X_k = a(k)) = p(k)`, `P(X_k = b(k)) = 1 − p(k)`.
    #[serde(rename_all = "camelCase")]
    TwoPoint {
        a: AtomValue,
        b: AtomValue,
        p_a: ProbRule,
    },
    /// The same joint law of `(X_k, X)` for every index of the branch.
    Joint {
        joint: JointDistribution,
    },
    Continuous {
        law: ContinuousLaw,
    },
}

impl Law {
    pub fn fixed(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Law::Fixed {
            dist: DiscreteDistribution::new(atoms)?,
        })
    }

    pub fn point(v: f64) -> Self {
        Law::Fixed {
            dist: DiscreteDistribution::point(v),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Law::TwoPoint { a, b, p_a } => {
                for v in [a, b] {
                    if let AtomValue::Const(x) = v {
                        if !x.is_finite() {
                            return Err(Error::InvalidModel(format!(
                                "atom value {x} is not finite"
                            )));
                        }
                    }
                }
                if let ProbRule::Const(p) = p_a {
                    check_prob(*p)?;
                }
                Ok(())
            }
            Law::Continuous { law } => law.validate(),
            _ => Ok(()),
        }
    }

    /// The discrete marginal of `X_k`, if the law has atoms.
    pub fn marginal_at(&self, k: u64) -> Option<DiscreteDistribution> {
        match self {
            Law::Fixed { dist } => Some(dist.clone()),
            Law::TwoPoint { a, b, p_a } => {
                let p = p_a.at(k);
                let pairs = [(a.at(k), p), (b.at(k), 1.0 - p)];
                Some(
                    DiscreteDistribution::merged(pairs.into_iter().filter(|x| x.1 > 0.0))
                        .expect("two-point law"),
                )
            }
            Law::Joint { joint } => Some(joint.marginal()),
            Law::Continuous { .. } => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Law::Continuous { .. })
    }
}

/// Law of the limit variable `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum LimitLaw {
    Point(f64),
    Discrete(DiscreteDistribution),
}

impl LimitLaw {
    pub fn as_point(&self) -> Option<f64> {
        match self {
            LimitLaw::Point(v) => Some(*v),
            LimitLaw::Discrete(d) => d.as_point(),
        }
    }

    pub fn to_distribution(&self) -> DiscreteDistribution {
        match self {
            LimitLaw::Point(v) => DiscreteDistribution::point(*v),
            LimitLaw::Discrete(d) => d.clone(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            LimitLaw::Point(v) => {
                if x >= *v {
                    1.0
                } else {
                    0.0
                }
            }
            LimitLaw::Discrete(d) => d.cdf(x),
        }
    }

    /// Jump points of the limit CDF.
    pub fn jumps(&self) -> Vec<f64> {
        match self {
            LimitLaw::Point(v) => vec![*v],
            LimitLaw::Discrete(d) => d
                .atoms()
                .iter()
                .filter(|a| a.1 > 0.0)
                .map(|a| a.0)
                .collect(),
        }
    }
}

/// An exceedance probability, kept exact when the law allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbValue {
    Exact(BigRational),
    /// `k^{-s}`, or `1 − k^{-s}` when `complement`.
    InvPow {
        k: u64,
        s: Exponent,
        complement: bool,
    },
    Real(f64),
}

impl ProbValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ProbValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            ProbValue::InvPow { k, s, complement } => {
                let v = inv_pow(s.value(), (*k as f64).ln());
                if *complement {
                    1.0 - v
                } else {
                    v
                }
            }
            ProbValue::Real(x) => *x,
        }
    }

    /// `self ≥ δ`, decided exactly for rational and power-law values.
    pub fn at_least(&self, delta: &Threshold) -> bool {
        match self {
            ProbValue::Exact(q) => q >= delta.exact(),
            ProbValue::InvPow { k, s, complement } => {
                PowerTail::new(s, *complement, delta).holds_u64(*k)
            }
            ProbValue::Real(x) => *x >= delta.value(),
        }
    }
}
