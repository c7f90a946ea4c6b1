// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Special index families with exact membership and range counting.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, checked_pow_u128, iroot, iroot_u128, Exponent};
use crate::serde_big;
use crate::windows::{SchemeKind, WindowScheme};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum IndexSet {
    /// `{m² : m ≥ 1}`.
    PerfectSquares,
    /// `{⌊m^{1/c}⌋ : m ≥ 1}` for rational `c ∈ (0, 1]`.
    FloorPowers {
        c: Exponent,
    },
    /// `{m^m : m ≥ 1}`.
    SelfPowers,
    /// `{m! : m ≥ 2}`.
    FactorialPoints,
    /// Open factorial blocks: `((2n)!, (2n+1)!)` for `n ≥ 1`, or
    /// `((2n+1)!, (2n+2)!)` when `odd`.
    FactorialInteriors {
        odd: bool,
    },
    /// Union of disjoint closed integer intervals, sorted.
    BlockUnion {
        #[serde(with = "serde_big::pairs")]
        blocks: Vec<(BigUint, BigUint)>,
    },
    /// The first `⌊h_r^c⌋` integers of every window of a scheme with disjoint
    /// windows, where `h_r` is the window width.
    FirstOfEachWindow {
        scheme: WindowScheme,
        c: Exponent,
    },
    Empty,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

impl IndexSet {
    pub fn floor_powers(c: Exponent) -> Result<Self> {
        let s = IndexSet::FloorPowers { c };
        s.validate()?;
        Ok(s)
    }

    pub fn block_union(blocks: Vec<(BigUint, BigUint)>) -> Result<Self> {
        let s = IndexSet::BlockUnion { blocks };
        s.validate()?;
        Ok(s)
    }

    pub fn first_of_each_window(scheme: WindowScheme, c: Exponent) -> Result<Self> {
        let s = IndexSet::FirstOfEachWindow { scheme, c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IndexSet::FloorPowers { c } | IndexSet::FirstOfEachWindow { c, .. } => {
                match c.exact() {
                    Some((p, q)) if p > 0 && p <= q => {}
                    _ => {
                        return Err(Error::InvalidIndexSet(format!(
                            "exponent c={} must be a small exact rational in (0, 1]",
                            c.value()
                        )))
                    }
                }
                if let IndexSet::FirstOfEachWindow { scheme, .. } = self {
                    if !scheme.has_disjoint_windows() {
                        return Err(Error::InvalidIndexSet(
                            "firstOfEachWindow needs a scheme with disjoint windows".into(),
                        ));
                    }
                }
            }
            IndexSet::BlockUnion { blocks } => {
                for (i, (a, b)) in blocks.iter().enumerate() {
                    if a.is_zero() || a > b {
                        return Err(Error::InvalidIndexSet(format!(
                            "block {i} = [{a}, {b}] must satisfy 1 ≤ lo ≤ hi"
                        )));
                    }
                    if i > 0 && *a <= blocks[i - 1].1 {
                        return Err(Error::InvalidIndexSet(format!(
                            "block {i} overlaps or precedes block {}",
                            i - 1
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn exact_c(c: &Exponent) -> (u32, u32) {
        c.exact().expect("validated exact exponent")
    }

    /// Number of members in `[1, x]`, for families with a closed-form counter.
    fn count_upto(&self, x: &BigUint) -> Option<BigUint> {
        Some(match self {
            IndexSet::PerfectSquares => x.sqrt(),
            IndexSet::FloorPowers { c } => {
                // ⌊m^{q/p}⌋ ≤ x  ⇔  m^q < (x+1)^p
                let (p, q) = Self::exact_c(c);
                let bound: BigUint = num_traits::pow(x + 1u32, p as usize) - 1u32;
                iroot(&bound, q)
            }
            IndexSet::SelfPowers => {
                let mut m = 1u64;
                while num_traits::pow(big(m), m as usize) <= *x {
                    m += 1;
                }
                big(m - 1)
            }
            IndexSet::FactorialPoints => {
                let mut count = 0u64;
                let mut f = big(2);
                let mut m = 2u64;
                while f <= *x {
                    count += 1;
                    m += 1;
                    f *= m;
                }
                big(count)
            }
            IndexSet::FactorialInteriors { odd } => {
                let mut total = BigUint::zero();
                let mut n = 1u64;
                loop {
                    let a = numeric::factorial(2 * n + *odd as u64);
                    if a >= *x {
                        break;
                    }
                    let b = &a * (2 * n + *odd as u64 + 1);
                    let top = (&b - 1u32).min(x.clone());
                    let first = &a + 1u32;
                    if top >= first {
                        total += top - first + 1u32;
                    }
                    n += 1;
                }
                total
            }
            IndexSet::Empty => BigUint::zero(),
            IndexSet::BlockUnion { .. } | IndexSet::FirstOfEachWindow { .. } => return None,
        })
    }

    /// Number of members in `[lo, hi]`.
    pub fn count_in_range(&self, lo: &BigUint, hi: &BigUint) -> Result<BigUint> {
        let lo = lo.max(&BigUint::one()).clone();
        if lo > *hi {
            return Ok(BigUint::zero());
        }
        match self {
            IndexSet::BlockUnion { blocks } => Ok(blocks
                .iter()
                .filter_map(|(a, b)| {
                    let s = a.max(&lo);
                    let e = b.min(hi);
                    (s <= e).then(|| e - s + 1u32)
                })
                .sum()),
            IndexSet::FirstOfEachWindow { scheme, c } => {
                let (p, q) = Self::exact_c(c);
                let one = BigUint::one();
                let top = big(scheme.horizon());
                // first window whose upper end reaches lo
                let Some(first) = numeric::first_true(&one, &top, |r| {
                    scheme
                        .window(r.to_u64().expect("horizon"))
                        .expect("within horizon")
                        .hi
                        >= lo
                }) else {
                    return Ok(BigUint::zero());
                };
                let mut total = BigUint::zero();
                let mut r = first.to_u64().expect("horizon");
                while r <= scheme.horizon() {
                    let w = scheme.window(r)?;
                    if w.lo > *hi {
                        break;
                    }
                    let m = iroot(&num_traits::pow(w.width.clone(), p as usize), q);
                    if !m.is_zero() {
                        let head_end = &w.lo + &m - 1u32;
                        let s = (&w.lo).max(&lo);
                        let e = (&head_end).min(hi);
                        if s <= e {
                            total += e - s + 1u32;
                        }
                    }
                    r += 1;
                }
                Ok(total)
            }
            _ => {
                let upto_hi = self.count_upto(hi).expect("closed-form counter");
                let upto_lo = self.count_upto(&(&lo - 1u32)).expect("closed-form counter");
                Ok(upto_hi - upto_lo)
            }
        }
    }

    pub fn contains(&self, k: &BigUint) -> Result<bool> {
        if k.is_zero() {
            return Ok(false);
        }
        match self {
            IndexSet::PerfectSquares => {
                let s = k.sqrt();
                Ok(&s * &s == *k)
            }
            IndexSet::BlockUnion { blocks } => {
                let i = blocks.partition_point(|(a, _)| a <= k);
                Ok(i > 0 && *k <= blocks[i - 1].1)
            }
            IndexSet::FirstOfEachWindow { scheme, c } => {
                let Some(r) = scheme.locate(k)? else {
                    return Ok(false);
                };
                let (p, q) = Self::exact_c(c);
                let w = scheme.window(r)?;
                let m = iroot(&num_traits::pow(w.width, p as usize), q);
                Ok(k - &w.lo < m)
            }
            _ => Ok(self.count_in_range(k, k)? == BigUint::one()),
        }
    }

    /// Membership for native indices, avoiding big-integer work where possible.
    pub fn contains_u64(&self, k: u64) -> Result<bool> {
        if k == 0 {
            return Ok(false);
        }
        match self {
            IndexSet::PerfectSquares => {
                let s = k.sqrt();
                Ok(s * s == k)
            }
            IndexSet::FloorPowers { c } => {
                let (p, q) = Self::exact_c(c);
                let count = |x: u64| -> Option<u128> {
                    let b = checked_pow_u128(x + 1, p)? - 1;
                    Some(iroot_u128(b, q))
                };
                match (count(k), count(k - 1)) {
                    (Some(a), Some(b)) => Ok(a - b == 1),
                    _ => self.contains(&big(k)),
                }
            }
            IndexSet::SelfPowers => {
                let mut m = 1u64;
                loop {
                    match m.checked_pow(m as u32) {
                        Some(v) if v < k => m += 1,
                        Some(v) => return Ok(v == k),
                        None => return Ok(false),
                    }
                }
            }
            IndexSet::FactorialPoints => {
                let (mut f, mut m) = (2u64, 2u64);
                while f < k {
                    m += 1;
                    match f.checked_mul(m) {
                        Some(v) => f = v,
                        None => return Ok(false),
                    }
                }
                Ok(f == k)
            }
            IndexSet::FirstOfEachWindow { scheme, c }
                if matches!(scheme.kind(), SchemeKind::Squares) =>
            {
                let Some(r) = scheme.locate_u64(k)? else {
                    return Ok(false);
                };
                let (p, q) = Self::exact_c(c);
                let lo = (r - 1) * (r - 1) + 1;
                let width = 2 * r - 1;
                match checked_pow_u128(width, p) {
                    Some(hp) => Ok(((k - lo) as u128) < iroot_u128(hp, q)),
                    None => self.contains(&big(k)),
                }
            }
            IndexSet::Empty => Ok(false),
            _ => self.contains(&big(k)),
        }
    }

    /// True when the two sets are known to share no index.
    pub fn provably_disjoint(&self, other: &IndexSet) -> bool {
        use IndexSet::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => true,
            (FactorialPoints, FactorialInteriors { .. })
            | (FactorialInteriors { .. }, FactorialPoints) => true,
            (FactorialInteriors { odd: a }, FactorialInteriors { odd: b }) => a != b,
            (BlockUnion { blocks: x }, BlockUnion { blocks: y }) => {
                x.iter().all(|(a, b)| y.iter().all(|(c, d)| b < c || d < a))
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(set: &IndexSet, lo: u64, hi: u64) -> u64 {
        (lo..=hi).filter(|&k| set.contains_u64(k).unwrap()).count() as u64
    }

    #[test]
    fn squares_and_floor_powers() {
        let sq = IndexSet::PerfectSquares;
        assert_eq!(sq.count_in_range(&big(17), &big(25)).unwrap(), big(1));
        assert!(sq.contains_u64(9).unwrap() && !sq.contains_u64(10).unwrap());
        // c = 1/2 reproduces the squares
        let fp = IndexSet::floor_powers(Exponent::ratio(1, 2)).unwrap();
        for k in 1..2000 {
            assert_eq!(
                fp.contains_u64(k).unwrap(),
                sq.contains_u64(k).unwrap(),
                "k={k}"
            );
        }
        // c = 3/10: ⌊m^{10/3}⌋ = 1, 10, 38, 101, …
        let fp = IndexSet::floor_powers(Exponent::ratio(3, 10)).unwrap();
        let members: Vec<u64> = (1..=110).filter(|&k| fp.contains_u64(k).unwrap()).collect();
        let expect: Vec<u64> = (1..=4u64)
            .map(|m| (m as f64).powf(10.0 / 3.0).floor() as u64)
            .collect();
        assert_eq!(members, expect);
    }

    #[test]
    fn self_powers_and_factorials() {
        let sp = IndexSet::SelfPowers;
        let members: Vec<u64> = (1..=300).filter(|&k| sp.contains_u64(k).unwrap()).collect();
        assert_eq!(members, vec![1, 4, 27, 256]);
        let fp = IndexSet::FactorialPoints;
        let members: Vec<u64> = (1..=800).filter(|&k| fp.contains_u64(k).unwrap()).collect();
        assert_eq!(members, vec![2, 6, 24, 120, 720]);
        let even = IndexSet::FactorialInteriors { odd: false };
        let odd = IndexSet::FactorialInteriors { odd: true };
        assert_eq!(even.count_in_range(&big(1), &big(6)).unwrap(), big(3));
        assert_eq!(odd.count_in_range(&big(1), &big(24)).unwrap(), big(17));
        assert!(
            !even.contains_u64(6).unwrap()
                && even.contains_u64(100).unwrap()
                && !even.contains_u64(121).unwrap()
        );
        assert!(odd.contains_u64(121).unwrap());
        assert!(fp.provably_disjoint(&odd) && even.provably_disjoint(&odd));
        assert!(!even.provably_disjoint(&even));
    }

    #[test]
    fn blocks_and_window_heads() {
        let b = IndexSet::block_union(vec![(big(3), big(5)), (big(8), big(11))]).unwrap();
        assert_eq!(b.count_in_range(&big(4), &big(9)).unwrap(), big(4));
        assert!(IndexSet::block_union(vec![(big(3), big(5)), (big(5), big(6))]).is_err());

        let sq = WindowScheme::squares(200).unwrap();
        let heads = IndexSet::first_of_each_window(sq, Exponent::ratio(3, 10)).unwrap();
        // window r=100: [9802, 10000], width 199, ⌊199^{0.3}⌋ = 4
        assert_eq!(
            heads.count_in_range(&big(9802), &big(10000)).unwrap(),
            big(4)
        );
        assert!(heads.contains_u64(9805).unwrap() && !heads.contains_u64(9806).unwrap());
        assert!(heads.contains(&big(9805)).unwrap() && !heads.contains(&big(9806)).unwrap());
        assert_eq!(
            brute(&heads, 1, 5000),
            heads
                .count_in_range(&big(1), &big(5000))
                .unwrap()
                .to_u64()
                .unwrap()
        );
        assert!(IndexSet::first_of_each_window(
            WindowScheme::classical(5).unwrap(),
            Exponent::ratio(1, 2)
        )
        .is_err());
    }

    #[test]
    fn counts_match_membership_on_small_ranges() {
        let sets = [
            IndexSet::PerfectSquares,
            IndexSet::floor_powers(Exponent::ratio(2, 3)).unwrap(),
            IndexSet::SelfPowers,
            IndexSet::FactorialPoints,
            IndexSet::FactorialInteriors { odd: false },
            IndexSet::FactorialInteriors { odd: true },
            IndexSet::Empty,
        ];
        for set in &sets {
            for (lo, hi) in [(1, 1), (1, 1000), (5, 130), (700, 6000)] {
                assert_eq!(
                    set.count_in_range(&big(lo), &big(hi)).unwrap(),
                    big(brute(set, lo, hi)),
                    "{set:?} on [{lo}, {hi}]"
                );
            }
        }
    }

    #[test]
    fn huge_ranges_count_exactly() {
        let ten = BigUint::from(10u32);
        let x = num_traits::pow(ten, 36);
        assert_eq!(
            IndexSet::PerfectSquares
                .count_in_range(&big(1), &x)
                .unwrap(),
            num_traits::pow(BigUint::from(10u32), 18)
        );
        let self_powers = (1u64..)
            .take_while(|&m| num_traits::pow(big(m), m as usize) <= x)
            .count() as u64;
        let factorials = (2u64..).take_while(|&m| numeric::factorial(m) <= x).count() as u64;
        assert_eq!((self_powers, factorials), (25, 31));
        assert_eq!(
            IndexSet::SelfPowers.count_in_range(&big(1), &x).unwrap(),
            big(self_powers)
        );
        assert_eq!(
            IndexSet::FactorialPoints
                .count_in_range(&big(1), &x)
                .unwrap(),
            big(factorials)
        );
    }
}
