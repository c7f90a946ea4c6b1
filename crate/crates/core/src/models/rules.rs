// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-branch rules compiled for fixed query parameters.
//!
//! An [`IndexRule`] answers "is index k counted?" and, when its structure is
//! known, returns the counted indices of a range as intervals. A [`ValueRule`]
//! gives the per-index summand of a Cesàro sum together with certified bounds
//! on range sums.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;
use crate::models::IndexSet;
use crate::numeric::{
    self, big_ln, big_to_f64, ceil_root, checked_pow_u128, div_ceil, iroot, Exponent, Threshold,
};

/// `k^{-s}` evaluated in the log domain.
pub(crate) fn inv_pow(s: f64, ln_k: f64) -> f64 {
    (-s * ln_k).exp()
}

/// `q^k` given `ln q`.
pub(crate) fn geometric(ln_q: f64, k: f64) -> f64 {
    (k * ln_q).exp()
}

/// Decides `k^{-s} ≥ δ` (or `1 − k^{-s} ≥ δ` for the complement) exactly when
/// `s` and `δ` are rational, by cross-multiplied integer powers.
#[derive(Clone, Debug)]
pub(crate) struct PowerTail {
    s: f64,
    complement: bool,
    thr: f64,
    exact: Option<ExactTail>,
}

#[derive(Clone, Debug)]
struct ExactTail {
    u: u32,
    lhs: BigUint,
    rhs: BigUint,
    lhs128: Option<u128>,
    rhs128: Option<u128>,
}

impl PowerTail {
    pub(crate) fn new(s: &Exponent, complement: bool, thr: &Threshold) -> Self {
        let exact = match s.exact() {
            Some((u, v)) if thr.is_positive() => {
                let (a, b) = thr.parts();
                // k^{-u/v} ≥ a/b  ⇔  a^v k^u ≤ b^v
                // 1 − k^{-u/v} ≥ a/b  ⇔  (b−a)^v k^u ≥ b^v
                let base = if complement {
                    if a > b {
                        BigUint::zero()
                    } else {
                        &b - &a
                    }
                } else {
                    a
                };
                let lhs = num_traits::pow(base, v as usize);
                let rhs = num_traits::pow(b, v as usize);
                Some(ExactTail {
                    u,
                    lhs128: lhs.to_u128(),
                    rhs128: rhs.to_u128(),
                    lhs,
                    rhs,
                })
            }
            _ => None,
        };
        Self {
            s: s.value(),
            complement,
            thr: thr.value(),
            exact,
        }
    }

    fn float_holds(&self, ln_k: f64) -> bool {
        let v = inv_pow(self.s, ln_k);
        if self.complement {
            1.0 - v >= self.thr
        } else {
            v >= self.thr
        }
    }

    fn cmp_exact(&self, e: &ExactTail, lhs_times_ku: impl FnOnce() -> BigUint) -> bool {
        let prod = lhs_times_ku();
        if self.complement {
            prod >= e.rhs
        } else {
            prod <= e.rhs
        }
    }

    pub(crate) fn holds_u64(&self, k: u64) -> bool {
        match &self.exact {
            Some(e) => {
                if let (Some(l), Some(r), Some(ku)) = (e.lhs128, e.rhs128, checked_pow_u128(k, e.u))
                {
                    if let Some(prod) = l.checked_mul(ku) {
                        return if self.complement {
                            prod >= r
                        } else {
                            prod <= r
                        };
                    }
                }
                self.cmp_exact(e, || {
                    &e.lhs * num_traits::pow(BigUint::from(k), e.u as usize)
                })
            }
            None => self.float_holds((k as f64).ln()),
        }
    }

    pub(crate) fn holds_big(&self, k: &BigUint) -> bool {
        match &self.exact {
            Some(e) => self.cmp_exact(e, || &e.lhs * num_traits::pow(k.clone(), e.u as usize)),
            None => self.float_holds(big_ln(k)),
        }
    }

    /// The counted part of `[lo, hi]`, a single interval by monotonicity.
    pub(crate) fn satisfied_range(&self, lo: &BigUint, hi: &BigUint) -> Option<(BigUint, BigUint)> {
        if lo > hi {
            return None;
        }
        match &self.exact {
            Some(e) if e.u > 0 => {
                if self.complement {
                    if e.lhs.is_zero() {
                        return None;
                    }
                    let start = ceil_root(&div_ceil(&e.rhs, &e.lhs), e.u).max(lo.clone());
                    (start <= *hi).then(|| (start, hi.clone()))
                } else {
                    let end = iroot(&(&e.rhs / &e.lhs), e.u).min(hi.clone());
                    (end >= *lo).then(|| (lo.clone(), end))
                }
            }
            Some(_) => self.holds_big(lo).then(|| (lo.clone(), hi.clone())),
            None => {
                if self.complement {
                    numeric::first_true(lo, hi, |k| self.holds_big(k)).map(|s| (s, hi.clone()))
                } else {
                    numeric::last_true(lo, hi, |k| self.holds_big(k)).map(|e| (lo.clone(), e))
                }
            }
        }
    }
}

pub(crate) type IndexPredicate = Arc<dyn Fn(u64) -> Result<bool> + Send + Sync>;
pub(crate) type IndexValue = Arc<dyn Fn(u64) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
pub(crate) enum IndexRule {
    Const(bool),
    PowerTail(PowerTail),
    /// `q^k ≥ δ`, or `1 − q^k ≥ δ` for the complement, with `0 < q < 1`.
    Geometric {
        ln_q: f64,
        complement: bool,
        thr: f64,
    },
    /// Sub-rules by index: each entry applies from its start index up to the
    /// next entry's start. The first start is 1.
    Piecewise(Vec<(u64, IndexRule)>),
    Opaque(IndexPredicate),
}

impl fmt::Debug for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexRule::Const(b) => write!(f, "Const({b})"),
            IndexRule::PowerTail(t) => write!(f, "{t:?}"),
            IndexRule::Geometric {
                ln_q,
                complement,
                thr,
            } => {
                write!(
                    f,
                    "Geometric(ln_q={ln_q}, complement={complement}, thr={thr})"
                )
            }
            IndexRule::Piecewise(p) => f.debug_list().entries(p).finish(),
            IndexRule::Opaque(_) => write!(f, "Opaque"),
        }
    }
}

fn geometric_holds(ln_q: f64, complement: bool, thr: f64, k: f64) -> bool {
    let v = geometric(ln_q, k);
    if complement {
        1.0 - v >= thr
    } else {
        v >= thr
    }
}

/// Splits `[lo, hi]` along piece starts, yielding the overlap with each piece.
fn piece_overlaps<'a, T>(
    pieces: &'a [(u64, T)],
    lo: &BigUint,
    hi: &BigUint,
) -> impl Iterator<Item = (&'a T, BigUint, BigUint)> + 'a {
    let (lo, hi) = (lo.clone(), hi.clone());
    pieces
        .iter()
        .enumerate()
        .filter_map(move |(i, (start, rule))| {
            let s = BigUint::from(*start).max(lo.clone());
            let e = match pieces.get(i + 1) {
                Some((next, _)) => BigUint::from(*next - 1).min(hi.clone()),
                None => hi.clone(),
            };
            (s <= e).then_some((rule, s, e))
        })
}

fn piece_at<T>(pieces: &[(u64, T)], k: u64) -> &T {
    let i = pieces.partition_point(|(s, _)| *s <= k);
    &pieces[i.saturating_sub(1)].1
}

impl IndexRule {
    pub(crate) fn holds(&self, k: u64) -> Result<bool> {
        Ok(match self {
            IndexRule::Const(b) => *b,
            IndexRule::PowerTail(t) => t.holds_u64(k),
            IndexRule::Geometric {
                ln_q,
                complement,
                thr,
            } => geometric_holds(*ln_q, *complement, *thr, k as f64),
            IndexRule::Piecewise(pieces) => return piece_at(pieces, k).holds(k),
            IndexRule::Opaque(f) => return f(k),
        })
    }

    /// Counted indices of `[lo, hi]` as disjoint increasing intervals, or
    /// `None` when the rule has no closed-form structure.
    pub(crate) fn satisfied_ranges(
        &self,
        lo: &BigUint,
        hi: &BigUint,
    ) -> Option<Vec<(BigUint, BigUint)>> {
        if lo > hi {
            return Some(Vec::new());
        }
        match self {
            IndexRule::Const(true) => Some(vec![(lo.clone(), hi.clone())]),
            IndexRule::Const(false) => Some(Vec::new()),
            IndexRule::PowerTail(t) => Some(t.satisfied_range(lo, hi).into_iter().collect()),
            IndexRule::Geometric {
                ln_q,
                complement,
                thr,
            } => {
                let pred = |k: &BigUint| geometric_holds(*ln_q, *complement, *thr, big_to_f64(k));
                Some(if *complement {
                    numeric::first_true(lo, hi, pred)
                        .map(|s| (s, hi.clone()))
                        .into_iter()
                        .collect()
                } else {
                    numeric::last_true(lo, hi, pred)
                        .map(|e| (lo.clone(), e))
                        .into_iter()
                        .collect()
                })
            }
            IndexRule::Piecewise(pieces) => {
                let mut out = Vec::new();
                for (rule, s, e) in piece_overlaps(pieces, lo, hi) {
                    out.extend(rule.satisfied_ranges(&s, &e)?);
                }
                Some(out)
            }
            IndexRule::Opaque(_) => None,
        }
    }
}

/// Per-index summand of a Cesàro sum.
#[derive(Clone)]
pub(crate) enum ValueRule {
    Const(f64),
    /// `k^{-t}` with `t ≥ 0`.
    PowerDecay {
        t: f64,
    },
    /// `q^k` given `ln q ≤ 0`.
    Geometric {
        ln_q: f64,
    },
    Piecewise(Vec<(u64, ValueRule)>),
    Opaque(IndexValue),
}

impl fmt::Debug for ValueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRule::Const(c) => write!(f, "Const({c})"),
            ValueRule::PowerDecay { t } => write!(f, "PowerDecay({t})"),
            ValueRule::Geometric { ln_q } => write!(f, "Geometric({ln_q})"),
            ValueRule::Piecewise(p) => f.debug_list().entries(p).finish(),
            ValueRule::Opaque(_) => write!(f, "Opaque"),
        }
    }
}

/// Relative widening applied to analytic sum bounds to absorb rounding.
const SUM_SLACK: f64 = 1e-9;

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    (
        (lo * (1.0 - SUM_SLACK)).max(0.0),
        hi * (1.0 + SUM_SLACK) + f64::MIN_POSITIVE,
    )
}

type RealFn<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

impl ValueRule {
    pub(crate) fn value(&self, k: u64) -> Result<f64> {
        Ok(match self {
            ValueRule::Const(c) => *c,
            ValueRule::PowerDecay { t } => inv_pow(*t, (k as f64).ln()),
            ValueRule::Geometric { ln_q } => geometric(*ln_q, k as f64),
            ValueRule::Piecewise(pieces) => return piece_at(pieces, k).value(k),
            ValueRule::Opaque(f) => return f(k),
        })
    }

    /// Decreasing summand `f`, its antiderivative `F`, for integral comparison.
    fn decreasing_parts(&self) -> Option<(RealFn<'_>, RealFn<'_>)> {
        match *self {
            ValueRule::PowerDecay { t } => {
                let f = Box::new(move |x: f64| inv_pow(t, x.ln()));
                let anti: Box<dyn Fn(f64) -> f64> = if (t - 1.0).abs() < 1e-15 {
                    Box::new(|x: f64| x.ln())
                } else {
                    Box::new(move |x: f64| ((1.0 - t) * x.ln()).exp() / (1.0 - t))
                };
                Some((f, anti))
            }
            ValueRule::Geometric { ln_q } if ln_q < 0.0 => Some((
                Box::new(move |x: f64| geometric(ln_q, x)),
                Box::new(move |x: f64| geometric(ln_q, x) / ln_q),
            )),
            _ => None,
        }
    }

    /// Certified bounds on `Σ_{k=lo}^{hi} f(k)`.
    pub(crate) fn range_sum_bounds(&self, lo: &BigUint, hi: &BigUint) -> Option<(f64, f64)> {
        if lo > hi {
            return Some((0.0, 0.0));
        }
        let len = big_to_f64(&(hi - lo + 1u32));
        match self {
            ValueRule::Const(c) => Some(widen((c * len, c * len))),
            ValueRule::Geometric { ln_q } if *ln_q == 0.0 => Some(widen((len, len))),
            ValueRule::Piecewise(pieces) => {
                let (mut a, mut b) = (0.0, 0.0);
                for (rule, s, e) in piece_overlaps(pieces, lo, hi) {
                    let (x, y) = rule.range_sum_bounds(&s, &e)?;
                    a += x;
                    b += y;
                }
                Some((a, b))
            }
            _ => {
                let (f, anti) = self.decreasing_parts()?;
                let (a, b) = (big_to_f64(lo), big_to_f64(hi));
                let lower = anti(b + 1.0) - anti(a);
                let upper = f(a) + anti(b) - anti(a);
                Some(widen((lower, upper)))
            }
        }
    }

    /// Certified bounds on the sum of `f` over some `count` distinct indices
    /// of `[lo, hi]`, whichever they are.
    pub(crate) fn subset_sum_bounds(
        &self,
        count: &BigUint,
        lo: &BigUint,
        hi: &BigUint,
    ) -> Option<(f64, f64)> {
        if count.is_zero() {
            return Some((0.0, 0.0));
        }
        match self {
            ValueRule::Const(c) => {
                let m = big_to_f64(count);
                Some(widen((c * m, c * m)))
            }
            ValueRule::Piecewise(pieces) => {
                let mut overlaps = piece_overlaps(pieces, lo, hi);
                let (rule, s, e) = overlaps.next()?;
                if overlaps.next().is_some() {
                    return None;
                }
                rule.subset_sum_bounds(count, &s, &e)
            }
            _ => {
                // decreasing: the first `count` indices maximise, the last minimise
                let _ = self.decreasing_parts()?;
                let head_end = lo + count - BigUint::one();
                let tail_start = hi + BigUint::one() - count;
                let (_, upper) = self.range_sum_bounds(lo, &head_end)?;
                let (lower, _) = self.range_sum_bounds(&tail_start, hi)?;
                Some((lower, upper))
            }
        }
    }
}

/// Rules for every branch of a model: special sets in priority order, then
/// the default.
#[derive(Clone, Debug)]
pub(crate) struct Compiled<'a, R> {
    pub(crate) special: Vec<(&'a IndexSet, R)>,
    pub(crate) default: R,
}

impl<R> Compiled<'_, R> {
    pub(crate) fn rule_for(&self, k: u64) -> Result<&R> {
        for (set, rule) in &self.special {
            if set.contains_u64(k)? {
                return Ok(rule);
            }
        }
        Ok(&self.default)
    }

    /// Whether special sets are pairwise disjoint, so that counts over each
    /// set can be added.
    pub(crate) fn sets_disjoint(&self) -> bool {
        let s = &self.special;
        (0..s.len()).all(|i| (i + 1..s.len()).all(|j| s[i].0.provably_disjoint(s[j].0)))
    }
}
