// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Window schemes `n ↦ [α_n, β_n]`.
//!
//! Every scheme here produces integer bounds, stored as big integers so that
//! factorial-scale windows stay exact. A window `[α_n, β_n]` contains the
//! integers `k` with `α_n ≤ k ≤ β_n`, endpoints included.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, big_ln, F64_EXACT_INT};
use crate::serde_big;

/// Closed-form schemes that do not fit one of the classical families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Formula {
    /// `[n!, (n+1)!]`.
    ConsecutiveFactorials,
    /// `[n, n + ⌈√n⌉]`; the ratio `β_n/α_n` tends to 1.
    SqrtGap,
    /// `[(n−1)²+1, (n−1)²+n]`, the first `n` integers of each squares window.
    SquaresHead,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "camelCase")]
pub enum SchemeKind {
    /// `[1, n]`.
    Classical,
    /// `[k_{r−1}+1, k_r]` for strictly increasing cut points `k_0 < k_1 < …`.
    Lacunary {
        #[serde(with = "serde_big::vec")]
        cuts: Vec<BigUint>,
    },
    /// `[n − λ_n + 1, n]`.
    Lambda {
        lambdas: Vec<u64>,
    },
    /// `[(n−1)²+1, n²]`.
    Squares,
    /// `[1, n^e]`.
    #[serde(rename = "powerOfN")]
    PowerOfN {
        exponent: u32,
    },
    /// `[(2n)!, (2n+1)!]`.
    FactorialEven,
    /// `[(2n+1)!, (2n+2)!]`.
    FactorialOdd,
    ExplicitTable {
        #[serde(with = "serde_big::vec")]
        alpha: Vec<BigUint>,
        #[serde(with = "serde_big::vec")]
        beta: Vec<BigUint>,
    },
    Custom {
        formula: Formula,
    },
}

#[derive(Serialize, Deserialize)]
struct SchemeConfig {
    #[serde(flatten)]
    kind: SchemeKind,
    horizon: u64,
    /// Keys left over after `kind`, `params` and `horizon`; must be empty.
    #[serde(flatten, skip_serializing)]
    unknown: BTreeMap<String, IgnoredAny>,
}

/// A validated window scheme with a finite horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeConfig", into = "SchemeConfig")]
pub struct WindowScheme {
    kind: SchemeKind,
    horizon: u64,
}

impl TryFrom<SchemeConfig> for WindowScheme {
    type Error = Error;

    fn try_from(c: SchemeConfig) -> Result<Self> {
        if let Some(key) = c.unknown.keys().next() {
            return Err(Error::InvalidParameter(format!(
                "unknown scheme field `{key}`"
            )));
        }
        WindowScheme::new(c.kind, c.horizon)
    }
}

impl From<WindowScheme> for SchemeConfig {
    fn from(s: WindowScheme) -> Self {
        SchemeConfig {
            kind: s.kind,
            horizon: s.horizon,
            unknown: BTreeMap::new(),
        }
    }
}

/// One window `[lo, hi]` of a scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub n: u64,
    pub lo: BigUint,
    pub hi: BigUint,
    pub width: BigUint,
}

impl Window {
    /// `(β_n − α_n + 1)^γ`.
    pub fn h_gamma(&self, gamma: f64) -> f64 {
        numeric::h_gamma(&self.width, gamma)
    }

    pub fn ln_width(&self) -> f64 {
        big_ln(&self.width)
    }

    /// Bounds as `u64` when the whole window fits.
    pub fn as_u64(&self) -> Option<(u64, u64)> {
        Some((self.lo.to_u64()?, self.hi.to_u64()?))
    }

    pub fn contains(&self, k: &BigUint) -> bool {
        &self.lo <= k && k <= &self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RatioTrend {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

/// Finite-horizon estimate of `liminf β_n/α_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub min_ratio: f64,
    pub argmin: u64,
    pub trend: RatioTrend,
    pub ratios: Vec<(u64, f64)>,
}

/// Finite-horizon diagnostic for `β_n − α_n → ∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    /// Smallest `n₀` such that widths strictly increase on `[n₀, scanned_to]`.
    pub strict_from: Option<u64>,
    pub scanned_to: u64,
    pub first_width: String,
    pub last_width: String,
}

/// Blocks `I_{r(j)} = [α_{r(j)}, β_{r(j)}]` selected along a slow-ratio subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlowRatioBlocks {
    pub indices: Vec<u64>,
    #[serde(with = "serde_big::pairs")]
    pub blocks: Vec<(BigUint, BigUint)>,
}

const GROWTH_SCAN_LIMIT: u64 = 100_000;

impl WindowScheme {
    /// Builds and validates a scheme.
    pub fn new(kind: SchemeKind, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidScheme {
                n: 0,
                reason: "horizon must be at least 1".into(),
            });
        }
        let scheme = Self { kind, horizon };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn classical(horizon: u64) -> Result<Self> {
        Self::new(SchemeKind::Classical, horizon)
    }

    pub fn squares(horizon: u64) -> Result<Self> {
        Self::new(SchemeKind::Squares, horizon)
    }

    pub fn power_of_n(exponent: u32, horizon: u64) -> Result<Self> {
        Self::new(SchemeKind::PowerOfN { exponent }, horizon)
    }

    pub fn custom(formula: Formula, horizon: u64) -> Result<Self> {
        Self::new(SchemeKind::Custom { formula }, horizon)
    }

    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Same scheme with a different horizon.
    pub fn with_horizon(&self, horizon: u64) -> Result<Self> {
        Self::new(self.kind.clone(), horizon)
    }

    fn validate(&self) -> Result<()> {
        let bad = |n: u64, reason: &str| Error::InvalidScheme {
            n,
            reason: reason.to_string(),
        };
        match &self.kind {
            SchemeKind::Lacunary { cuts } => {
                if cuts.len() < 2 {
                    return Err(bad(0, "lacunary scheme needs at least two cut points"));
                }
                if let Some(r) = cuts.windows(2).position(|w| w[0] >= w[1]) {
                    return Err(bad(r as u64 + 1, "cut points must be strictly increasing"));
                }
                if self.horizon > cuts.len() as u64 - 1 {
                    return Err(bad(
                        self.horizon,
                        "horizon exceeds the number of cut points",
                    ));
                }
            }
            SchemeKind::Lambda { lambdas } => {
                if (lambdas.len() as u64) < self.horizon {
                    return Err(bad(self.horizon, "fewer λ values than the horizon"));
                }
                for (i, &l) in lambdas.iter().take(self.horizon as usize).enumerate() {
                    let n = i as u64 + 1;
                    if l == 0 || l > n {
                        return Err(bad(n, "λ_n must satisfy 1 ≤ λ_n ≤ n"));
                    }
                    if i > 0 && l < lambdas[i - 1] {
                        return Err(bad(n, "λ_n must be non-decreasing"));
                    }
                }
                self.check_monotone_exact()?;
            }
            SchemeKind::PowerOfN { exponent } => {
                if *exponent == 0 {
                    return Err(bad(0, "exponent must be at least 1"));
                }
            }
            SchemeKind::ExplicitTable { alpha, beta } => {
                let h = self.horizon as usize;
                if alpha.len() < h || beta.len() < h {
                    return Err(bad(self.horizon, "table shorter than the horizon"));
                }
                if alpha[0].is_zero() {
                    return Err(bad(1, "α_1 must be positive"));
                }
                self.check_monotone_exact()?;
            }
            // Closed forms are monotone with α ≤ β by construction.
            SchemeKind::Classical
            | SchemeKind::Squares
            | SchemeKind::FactorialEven
            | SchemeKind::FactorialOdd
            | SchemeKind::Custom { .. } => {}
        }
        Ok(())
    }

    fn check_monotone_exact(&self) -> Result<()> {
        let mut prev: Option<(BigUint, BigUint)> = None;
        for n in 1..=self.horizon {
            let (a, b) = self.raw_bounds(n);
            if a > b {
                return Err(Error::InvalidScheme {
                    n,
                    reason: format!("α_n = {a} exceeds β_n = {b}"),
                });
            }
            if let Some((pa, pb)) = &prev {
                if &a < pa || &b < pb {
                    return Err(Error::InvalidScheme {
                        n,
                        reason: "α and β must be non-decreasing".into(),
                    });
                }
            }
            prev = Some((a, b));
        }
        Ok(())
    }

    fn raw_bounds(&self, n: u64) -> (BigUint, BigUint) {
        let big = BigUint::from;
        match &self.kind {
            SchemeKind::Classical => (BigUint::one(), big(n)),
            SchemeKind::Lacunary { cuts } => {
                (&cuts[n as usize - 1] + 1u32, cuts[n as usize].clone())
            }
            SchemeKind::Lambda { lambdas } => (big(n - lambdas[n as usize - 1] + 1), big(n)),
            SchemeKind::Squares => {
                let m = big(n - 1);
                (&m * &m + 1u32, big(n) * big(n))
            }
            SchemeKind::PowerOfN { exponent } => {
                (BigUint::one(), num_traits::pow(big(n), *exponent as usize))
            }
            SchemeKind::FactorialEven => {
                let a = numeric::factorial(2 * n);
                let b = &a * (2 * n + 1);
                (a, b)
            }
            SchemeKind::FactorialOdd => {
                let a = numeric::factorial(2 * n + 1);
                let b = &a * (2 * n + 2);
                (a, b)
            }
            SchemeKind::ExplicitTable { alpha, beta } => {
                (alpha[n as usize - 1].clone(), beta[n as usize - 1].clone())
            }
            SchemeKind::Custom { formula } => match formula {
                Formula::ConsecutiveFactorials => {
                    let a = numeric::factorial(n);
                    let b = &a * (n + 1);
                    (a, b)
                }
                Formula::SqrtGap => {
                    let s = n.sqrt();
                    let ceil = if s * s == n { s } else { s + 1 };
                    (big(n), big(n + ceil))
                }
                Formula::SquaresHead => {
                    let m = big(n - 1);
                    let base = &m * &m;
                    (&base + 1u32, base + n)
                }
            },
        }
    }

    /// The `n`-th window.
    pub fn window(&self, n: u64) -> Result<Window> {
        if n == 0 || n > self.horizon {
            return Err(Error::OutOfHorizon {
                n,
                horizon: self.horizon,
            });
        }
        let (lo, hi) = self.raw_bounds(n);
        let width = &hi - &lo + 1u32;
        Ok(Window { n, lo, hi, width })
    }

    /// Whether `β_n < α_{n+1}` for every `n` below the horizon, so each `k`
    /// lies in at most one window.
    pub fn has_disjoint_windows(&self) -> bool {
        match &self.kind {
            SchemeKind::Squares
            | SchemeKind::Lacunary { .. }
            | SchemeKind::Custom {
                formula: Formula::SquaresHead,
            } => true,
            SchemeKind::Classical | SchemeKind::PowerOfN { .. } => self.horizon == 1,
            // factorial schemes share endpoints: β_n = α_{n+1}
            SchemeKind::FactorialEven
            | SchemeKind::FactorialOdd
            | SchemeKind::Custom {
                formula: Formula::ConsecutiveFactorials,
            } => self.horizon == 1,
            _ => (1..self.horizon).all(|n| self.raw_bounds(n).1 < self.raw_bounds(n + 1).0),
        }
    }

    /// Index of the window containing `k`, for schemes with disjoint windows.
    pub fn locate(&self, k: &BigUint) -> Result<Option<u64>> {
        if !self.has_disjoint_windows() {
            return Err(Error::InvalidScheme {
                n: 0,
                reason: "windows overlap; an index has no unique window".into(),
            });
        }
        if k.is_zero() {
            return Ok(None);
        }
        let n = match self.kind {
            SchemeKind::Squares => {
                let km1: BigUint = k - 1u32;
                match (km1.sqrt() + 1u32).to_u64() {
                    Some(n) => n,
                    None => return Ok(None),
                }
            }
            _ => {
                // largest n with α_n ≤ k
                let one = BigUint::one();
                let top = BigUint::from(self.horizon);
                match numeric::last_true(&one, &top, |n| {
                    self.raw_bounds(n.to_u64().expect("within horizon")).0 <= *k
                }) {
                    Some(n) => n.to_u64().expect("within horizon"),
                    None => return Ok(None),
                }
            }
        };
        if n > self.horizon {
            return Ok(None);
        }
        let (a, b) = self.raw_bounds(n);
        Ok((a <= *k && *k <= b).then_some(n))
    }

    /// Fast `locate` for small `k`; falls back to the big-integer path.
    pub fn locate_u64(&self, k: u64) -> Result<Option<u64>> {
        if let SchemeKind::Squares = self.kind {
            if k == 0 {
                return Ok(None);
            }
            let n = (k - 1).sqrt() + 1;
            return Ok((n <= self.horizon).then_some(n));
        }
        self.locate(&BigUint::from(k))
    }

    /// `min β_n/α_n` over `[n_min, n_max]` with the ratio table and its trend.
    pub fn liminf_ratio(&self, n_min: u64, n_max: u64) -> Result<RatioReport> {
        if n_min == 0 || n_min > n_max {
            return Err(Error::InvalidParameter(format!(
                "ratio range [{n_min}, {n_max}] must satisfy 1 ≤ nMin ≤ nMax"
            )));
        }
        if n_max > self.horizon {
            return Err(Error::OutOfHorizon {
                n: n_max,
                horizon: self.horizon,
            });
        }
        let ratios: Vec<(u64, f64)> = (n_min..=n_max)
            .map(|n| {
                let (a, b) = self.raw_bounds(n);
                (n, ratio_f64(&b, &a))
            })
            .collect();
        let (argmin, min_ratio) =
            ratios
                .iter()
                .copied()
                .fold((n_min, f64::INFINITY), |best, (n, r)| {
                    if r < best.1 {
                        (n, r)
                    } else {
                        best
                    }
                });
        Ok(RatioReport {
            min_ratio,
            argmin,
            trend: trend_of(ratios.iter().map(|&(_, r)| r)),
            ratios,
        })
    }

    /// Greedy selection of `r(1) < r(2) < … < r(j_max)` with
    /// `β_{r(j)}/α_{r(j)} < 1 + 1/j` and, for `j ≥ 2`,
    /// `β_{r(j)−1} ≥ j·β_{r(j−1)}` and `α_{r(j)} > β_{r(j−1)}`.
    ///
    /// The smallest admissible `r(j)` is taken at every step.
    pub fn construct_slow_ratio_blocks(&self, j_max: u64) -> Result<SlowRatioBlocks> {
        let mut indices = Vec::new();
        let mut blocks: Vec<(BigUint, BigUint)> = Vec::new();
        for j in 1..=j_max {
            let start = indices.last().map_or(1, |&r: &u64| r + 1);
            let prev_beta = blocks.last().map(|(_, b)| b.clone());
            let found = (start..=self.horizon).find(|&r| {
                let (a, b) = self.raw_bounds(r);
                // β/α < 1 + 1/j  ⇔  j·β < (j+1)·α
                if &b * j >= &a * (j + 1) {
                    return false;
                }
                match &prev_beta {
                    None => true,
                    Some(pb) => r >= 2 && self.raw_bounds(r - 1).1 >= pb * j && a > *pb,
                }
            });
            match found {
                Some(r) => {
                    indices.push(r);
                    blocks.push(self.raw_bounds(r));
                }
                None => {
                    return Err(Error::ConstructionFailed {
                        j,
                        reason: format!("no admissible index up to horizon {}", self.horizon),
                    })
                }
            }
        }
        Ok(SlowRatioBlocks { indices, blocks })
    }

    /// Scans widths up to `min(horizon, 10⁵)` for a strict-increase tail.
    pub fn width_growth(&self) -> GrowthReport {
        let scanned_to = self.horizon.min(GROWTH_SCAN_LIMIT);
        let width = |n: u64| {
            let (a, b) = self.raw_bounds(n);
            b - a + 1u32
        };
        let mut strict_from = Some(scanned_to);
        let mut next = width(scanned_to);
        for n in (1..scanned_to).rev() {
            let w = width(n);
            if w < next {
                strict_from = Some(n);
                next = w;
            } else {
                break;
            }
        }
        if scanned_to == 1 {
            strict_from = None;
        }
        GrowthReport {
            strict_from,
            scanned_to,
            first_width: width(1).to_string(),
            last_width: width(scanned_to).to_string(),
        }
    }
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    match (num.to_u64(), den.to_u64()) {
        (Some(a), Some(b)) if a < F64_EXACT_INT && b < F64_EXACT_INT => a as f64 / b as f64,
        _ => (big_ln(num) - big_ln(den)).exp(),
    }
}

fn trend_of(values: impl Iterator<Item = f64>) -> RatioTrend {
    let values: Vec<f64> = values.collect();
    let diffs = values.windows(2).map(|w| w[1] - w[0]);
    let (mut up, mut down) = (false, false);
    for d in diffs {
        if d > 0.0 {
            up = true;
        } else if d < 0.0 {
            down = true;
        }
    }
    match (up, down) {
        (true, false) => RatioTrend::Increasing,
        (false, true) => RatioTrend::Decreasing,
        (false, false) => RatioTrend::Constant,
        (true, true) => RatioTrend::NonMonotone,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn closed_form_windows() {
        let sq = WindowScheme::squares(10).unwrap();
        let w = sq.window(5).unwrap();
        assert_eq!(
            (w.lo.clone(), w.hi.clone(), w.width.clone()),
            (big(17), big(25), big(9))
        );

        let cl = WindowScheme::classical(10).unwrap();
        assert_eq!(cl.window(7).unwrap().hi, big(7));
        assert_eq!(cl.window(1).unwrap().width, big(1));

        let fe = WindowScheme::new(SchemeKind::FactorialEven, 4).unwrap();
        let w = fe.window(3).unwrap();
        assert_eq!((w.lo, w.hi, w.width), (big(720), big(5040), big(4321)));

        let fo = WindowScheme::new(SchemeKind::FactorialOdd, 4).unwrap();
        let w = fo.window(2).unwrap();
        assert_eq!((w.lo, w.hi), (big(120), big(720)));

        let p2 = WindowScheme::power_of_n(2, 10).unwrap();
        let w = p2.window(4).unwrap();
        assert_eq!((w.lo, w.hi), (big(1), big(16)));
    }

    #[test]
    fn out_of_horizon() {
        let sq = WindowScheme::squares(10).unwrap();
        assert_eq!(
            sq.window(11),
            Err(Error::OutOfHorizon { n: 11, horizon: 10 })
        );
        assert!(sq.window(0).is_err());
    }

    #[test]
    fn invalid_tables_report_the_index() {
        let lac = WindowScheme::new(
            SchemeKind::Lacunary {
                cuts: vec![big(0), big(4), big(3)],
            },
            2,
        );
        assert!(matches!(lac, Err(Error::InvalidScheme { n: 2, .. })));

        let lam = WindowScheme::new(
            SchemeKind::Lambda {
                lambdas: vec![1, 2, 1],
            },
            3,
        );
        assert!(matches!(lam, Err(Error::InvalidScheme { n: 3, .. })));

        // α jumps back: λ grows by two
        let lam = WindowScheme::new(
            SchemeKind::Lambda {
                lambdas: vec![1, 1, 3],
            },
            3,
        );
        assert!(matches!(lam, Err(Error::InvalidScheme { n: 3, .. })));

        let table = WindowScheme::new(
            SchemeKind::ExplicitTable {
                alpha: vec![big(1), big(5)],
                beta: vec![big(4), big(4)],
            },
            2,
        );
        assert!(matches!(table, Err(Error::InvalidScheme { n: 2, .. })));
    }

    #[test]
    fn lacunary_and_lambda_windows() {
        let cuts = (0..6).map(|r| big(1 << r)).collect::<Vec<_>>();
        let lac = WindowScheme::new(SchemeKind::Lacunary { cuts }, 5).unwrap();
        let w = lac.window(3).unwrap();
        assert_eq!((w.lo, w.hi), (big(5), big(8)));

        let lam = WindowScheme::new(
            SchemeKind::Lambda {
                lambdas: vec![1, 2, 2, 3, 4],
            },
            5,
        )
        .unwrap();
        let w = lam.window(5).unwrap();
        assert_eq!((w.lo, w.hi), (big(2), big(5)));
    }

    #[test]
    fn factorial_ratio_table() {
        let f = WindowScheme::custom(Formula::ConsecutiveFactorials, 10).unwrap();
        let rep = f.liminf_ratio(1, 10).unwrap();
        assert_eq!(rep.min_ratio, 2.0);
        assert_eq!(rep.argmin, 1);
        assert_eq!(rep.trend, RatioTrend::Increasing);
        for (n, r) in rep.ratios {
            assert_eq!(r, (n + 1) as f64);
        }
    }

    #[test]
    fn classical_and_sqrt_gap_ratios() {
        let c = WindowScheme::classical(100).unwrap();
        let rep = c.liminf_ratio(1, 100).unwrap();
        assert_eq!((rep.min_ratio, rep.argmin), (1.0, 1));
        assert_eq!(rep.ratios[41], (42, 42.0));

        let g = WindowScheme::custom(Formula::SqrtGap, 10_000).unwrap();
        let rep = g.liminf_ratio(10, 10_000).unwrap();
        assert_eq!(rep.argmin, 10_000);
        assert!((rep.min_ratio - 1.01).abs() < 1e-12);
        assert!(rep.ratios.iter().all(|&(_, r)| r > 1.0));
    }

    #[test]
    fn slow_ratio_blocks_sqrt_gap() {
        let g = WindowScheme::custom(Formula::SqrtGap, 10_000).unwrap();
        let blocks = g.construct_slow_ratio_blocks(3).unwrap();
        assert_eq!(blocks.indices, vec![3, 8, 28]);
        assert_eq!(
            blocks.blocks,
            vec![(big(3), big(5)), (big(8), big(11)), (big(28), big(34))]
        );
        assert!(g.construct_slow_ratio_blocks(0).unwrap().indices.is_empty());
    }

    #[test]
    fn slow_ratio_blocks_fail_for_factorials() {
        let f = WindowScheme::custom(Formula::ConsecutiveFactorials, 20).unwrap();
        assert!(matches!(
            f.construct_slow_ratio_blocks(3),
            Err(Error::ConstructionFailed { j: 1, .. })
        ));
    }

    #[test]
    fn locate_in_disjoint_schemes() {
        let sq = WindowScheme::squares(100).unwrap();
        assert_eq!(sq.locate_u64(17).unwrap(), Some(5));
        assert_eq!(sq.locate_u64(25).unwrap(), Some(5));
        assert_eq!(sq.locate_u64(26).unwrap(), Some(6));
        assert_eq!(sq.locate(&big(26)).unwrap(), Some(6));
        let cuts = (0..6).map(|r| big(1 << r)).collect::<Vec<_>>();
        let lac = WindowScheme::new(SchemeKind::Lacunary { cuts }, 5).unwrap();
        assert_eq!(lac.locate(&big(7)).unwrap(), Some(3));
        assert_eq!(lac.locate(&big(33)).unwrap(), None);
        assert!(WindowScheme::classical(5).unwrap().locate(&big(2)).is_err());
    }

    #[test]
    fn growth_report() {
        let sq = WindowScheme::squares(50).unwrap();
        assert_eq!(sq.width_growth().strict_from, Some(1));
        let g = WindowScheme::custom(Formula::SqrtGap, 50).unwrap();
        // width ⌈√n⌉+1 is a staircase, so only the last step is strict
        let rep = g.width_growth();
        assert!(rep.strict_from.unwrap() > 40);
    }

    #[test]
    fn config_round_trip() {
        let json = r#"{"kind":"squares","horizon":10}"#;
        let s: WindowScheme = serde_json::from_str(json).unwrap();
        assert_eq!(s, WindowScheme::squares(10).unwrap());
        let lac = r#"{"kind":"lacunary","params":{"cuts":["0","2","4",8]},"horizon":3}"#;
        let s: WindowScheme = serde_json::from_str(lac).unwrap();
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(
            back,
            r#"{"kind":"lacunary","params":{"cuts":["0","2","4","8"]},"horizon":3}"#
        );
        let bad = r#"{"kind":"lacunary","params":{"cuts":["0","2","2"]},"horizon":2}"#;
        assert!(serde_json::from_str::<WindowScheme>(bad).is_err());
        let p = r#"{"kind":"powerOfN","params":{"exponent":2},"horizon":4}"#;
        assert_eq!(
            serde_json::from_str::<WindowScheme>(p).unwrap(),
            WindowScheme::power_of_n(2, 4).unwrap()
        );
    }
}
