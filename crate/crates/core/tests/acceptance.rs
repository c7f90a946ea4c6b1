//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::error::Error;
use std::time::{Duration, Instant};

use abstat::corpus;
use abstat::engine::{
    cdf_density_series, cesaro_series, density_series, moment_series, Decision, EngineConfig,
    NRange, OrderParams, VerdictKnobs,
};
use abstat::invariants::{check_invariants, InvariantGrid};
use abstat::models::{Branch, IndexSet, Law, LimitLaw, RVSequenceModel};
use abstat::montecarlo::{estimate_exceedance, mc_density_series, MCConfig};
use abstat::numeric::Exponent;
use abstat::{Formula, SchemeKind, WindowScheme};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, Box<dyn Error>>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn isqrt(k: u64) -> u64 {
    let mut s = (k as f64).sqrt() as u64;
    while s * s > k {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= k {
        s += 1;
    }
    s
}

fn is_square(k: u64) -> bool {
    let s = isqrt(k);
    s * s == k
}

fn u(x: &BigUint) -> u64 {
    u64::try_from(x).expect("fits u64")
}

fn within(t: Instant, limit: Duration) -> Check {
    let e = t.elapsed();
    ensure!(e < limit, "took {e:?}, limit {limit:?}");
    Ok(format!("{:.2?}", e))
}

/// Separation of squares and classical windows for ±1-on-squares.
fn ac1() -> Check {
    let t = Instant::now();
    let entry = corpus::build("ex2_1")?;
    let params = OrderParams::new(0.5, 0.5, 0.5);
    // p_k = 1 on squares, 1/k elsewhere; p_k ≥ ½ off the squares only at k = 2.
    let oracle = |lo: u64, hi: u64| (lo..=hi).filter(|&k| is_square(k) || k == 2).count() as u64;

    let squares = entry.scheme("squares")?;
    let s = density_series(
        &entry.model,
        squares,
        &params,
        &NRange::range(1, 5000),
        &EngineConfig::enumerated(),
    )?;
    for r in &s.records {
        let (lo, hi) = (u(&r.lo), u(&r.hi));
        let want = oracle(lo, hi);
        ensure!(
            u(&r.count) == want,
            "squares n={}: engine {} vs oracle {want}",
            r.n,
            r.count
        );
        if r.n >= 3 {
            ensure!(want == 1, "squares n={}: {want} indices counted", r.n);
            let d = 1.0 / ((2 * r.n - 1) as f64).sqrt();
            ensure!(
                (r.density - d).abs() <= 1e-15 * d.max(1.0),
                "squares n={}: d={} vs {d}",
                r.n,
                r.density
            );
        }
    }
    let knobs = VerdictKnobs::default();
    let sq = entry.run(&entry.expected[0], &knobs)?;
    ensure!(
        sq.verdict.decision == Decision::ConvergesTo,
        "squares verdict {:?}",
        sq.verdict.decision
    );
    let last = s.records.last().unwrap().density;

    let cl = entry.run(&entry.expected[1], &knobs)?;
    ensure!(
        cl.verdict.decision == Decision::Fails,
        "classical verdict {:?}",
        cl.verdict.decision
    );
    for r in &cl.series[0].records {
        let n = r.n as f64;
        ensure!(
            r.density >= (n.sqrt() - 1.0) / n.sqrt(),
            "classical n={} below (√n−1)/√n",
            r.n
        );
    }
    let at = cl.series[0].record(10_000).unwrap();
    let oracle_count = oracle(1, 10_000);
    ensure!(
        u(&at.count) == 101 && oracle_count == 101,
        "classical count at 10^4: {} / oracle {oracle_count}",
        at.count
    );
    ensure!(at.density == 1.01, "classical d at 10^4 = {}", at.density);
    let time = within(t, Duration::from_secs(10))?;
    Ok(format!(
        "squares d_5000={last:.4} tailMax={:.4} convergesTo 0; classical d_10000={} fails; {time}",
        sq.verdict.tail_max, at.density
    ))
}

/// Factorial blocks: the even scheme converges to 1, the odd one to 2.
fn ac2() -> Check {
    let t = Instant::now();
    let entry = corpus::build("ex2_3")?;
    let outcomes = entry.verify(&VerdictKnobs::default())?;
    let mut conv = Vec::new();
    for o in &outcomes {
        ensure!(
            o.passed,
            "{} gave {:?}",
            o.expectation.label(),
            o.verdict.decision
        );
        if o.expectation.decision == Decision::ConvergesTo {
            for r in &o.series[0].records {
                ensure!(
                    r.count == BigUint::from(2u32),
                    "{} n={}: count {}",
                    o.expectation.scheme,
                    r.n,
                    r.count
                );
            }
            conv.push(format!(
                "{}->{:?}",
                o.expectation.scheme, o.expectation.limit
            ));
        }
    }
    ensure!(conv.len() == 2, "expected two convergent schemes");

    // Enumerated cross-check for n ≤ 3 against the branch definitions.
    let facts: Vec<u64> = (2..=12u64).map(|m| (1..=m).product()).collect();
    let odd_interior = |k: u64| (1..5).any(|m| facts[2 * m - 1] < k && k < facts[2 * m]);
    let hit = |x: f64, limit: f64| ((x - limit).abs() >= 0.5) as u8 as f64;
    let p = |k: u64, limit: f64| -> f64 {
        if facts.contains(&k) {
            return 1.0; // ±3 against 1 or 2
        }
        let a = if odd_interior(k) { 2.0 } else { 1.0 };
        let pa = 1.0 / k as f64;
        pa * hit(-a, limit) + (1.0 - pa) * hit(a, limit)
    };
    let params = OrderParams::new(0.5, 0.5, 0.5);
    for (kind, limit) in [
        (SchemeKind::FactorialEven, 1.0),
        (SchemeKind::FactorialOdd, 2.0),
    ] {
        let scheme = WindowScheme::new(kind, 3)?;
        let model = entry.model.with_limit(LimitLaw::Point(limit))?;
        let s = density_series(
            &model,
            &scheme,
            &params,
            &NRange::range(1, 3),
            &EngineConfig::enumerated(),
        )?;
        for r in &s.records {
            let want = (u(&r.lo)..=u(&r.hi))
                .filter(|&k| p(k, limit) >= 0.5)
                .count() as u64;
            ensure!(
                u(&r.count) == want && want == 2,
                "n={} count {} oracle {want}",
                r.n,
                r.count
            );
        }
    }
    let time = within(t, Duration::from_secs(5))?;
    Ok(format!("{}; count 2 per window; {time}", conv.join(", ")))
}

/// Self-power spikes: probability converges, Cesàro stays above 1.
fn ac3() -> Check {
    let t = Instant::now();
    let entry = corpus::build("ex2_4")?;
    let prob = entry.run(&entry.expected[0], &VerdictKnobs::default())?;
    ensure!(
        prob.passed && prob.verdict.decision == Decision::ConvergesTo,
        "probability {:?}",
        prob.verdict.decision
    );

    let params = OrderParams::new(0.5, 0.5, 0.5).with_p(1.0);
    let scheme = WindowScheme::power_of_n(2, 200)?;
    let s = cesaro_series(
        &entry.model,
        &scheme,
        &params,
        &NRange::range(2, 200),
        &EngineConfig::enumerated(),
    )?;
    let self_powers: Vec<u64> = (1..=6u64).map(|m| m.pow(m as u32)).collect();
    let mut sum = 1.0; // k = 1
    let mut k = 1u64;
    let mut min = f64::INFINITY;
    for r in &s.records {
        let n = r.n;
        while k < n * n {
            k += 1;
            sum += if self_powers.contains(&k) {
                1.0
            } else {
                1.0 / (k as f64).sqrt()
            };
        }
        let want = sum / n as f64;
        let (lo, hi) = r.cesaro.ok_or("missing Cesàro value")?;
        ensure!(
            (lo - want).abs() <= 1e-9 * want && (hi - want).abs() <= 1e-9 * want,
            "n={n}: [{lo}, {hi}] vs {want}"
        );
        ensure!(lo > 1.0, "n={n}: cesaro {lo} ≤ 1");
        let plain: f64 = (1..=n * n).map(|k| 1.0 / (k as f64).sqrt()).sum();
        ensure!(plain > n as f64, "n={n}: Σ1/√k = {plain} ≤ √(n²)");
        min = min.min(lo);
    }
    let time = within(t, Duration::from_secs(10))?;
    Ok(format!(
        "probability convergesTo 0; min cesaro over n=2..200 is {min:.4} > 1; {time}"
    ))
}

/// Probability converges while every index is counted in expectation mode.
fn ac4() -> Check {
    let entry = corpus::build("ex3_1")?;
    let knobs = VerdictKnobs::default();
    let prob = entry.run(&entry.expected[0], &knobs)?;
    ensure!(prob.passed, "probability {:?}", prob.verdict.decision);
    let scheme = entry.scheme("squares")?;
    let s = moment_series(
        &entry.model,
        scheme,
        &entry.default_params,
        &NRange::range(1, 2000),
        &EngineConfig::enumerated(),
    )?;
    for r in &s.records {
        ensure!(
            r.count == r.width,
            "n={}: count {} of {}",
            r.n,
            r.count,
            r.width
        );
        let want = ((2 * r.n - 1) as f64).sqrt();
        ensure!(
            (r.density - want).abs() <= 1e-12 * want,
            "n={}: d={} vs {want}",
            r.n,
            r.density
        );
    }
    let exp = entry.run(&entry.expected[1], &knobs)?;
    ensure!(
        exp.passed && exp.verdict.decision == Decision::Fails,
        "expectation {:?}",
        exp.verdict.decision
    );
    Ok(format!(
        "probability convergesTo 0 (tailMax {:.4}); expectation d_2000 = {:.4} = √3999, fails",
        prob.verdict.tail_max,
        s.records.last().unwrap().density
    ))
}

/// Distribution converges while probability diverges.
fn ac5() -> Check {
    let entry = corpus::build("ex4_1")?;
    let scheme = entry.scheme("squares")?;
    let params = entry.default_params;
    let per_x = cdf_density_series(
        &entry.model,
        scheme,
        &params,
        &[-0.5, 0.5, 1.5],
        &NRange::range(1, 10_000),
        &EngineConfig::analytic(),
    )?;
    let (_, below) = &per_x[0];
    // ⌊h^{3/10}⌋ is the largest m with m^10 ≤ h^3.
    let floor_root = |h: u64| -> u64 {
        let h3 = (h as u128).pow(3);
        let mut m = (h as f64).powf(0.3) as u128 + 2;
        while m.pow(10) > h3 {
            m -= 1;
        }
        m as u64
    };
    for r in &below.records {
        let h = u(&r.width);
        ensure!(
            u(&r.count) == floor_root(h),
            "r={}: count {} vs ⌊h^0.3⌋={}",
            r.n,
            r.count,
            floor_root(h)
        );
    }
    let r = below.record(10_000).unwrap();
    let want = (19f64.ln() - 0.8 * 19_999f64.ln()).exp();
    ensure!(
        u(&r.count) == 19 && (r.density - want).abs() <= 1e-12,
        "d at 10^4 = {} vs {want}",
        r.density
    );

    let knobs = VerdictKnobs::default();
    let dist = entry.run(&entry.expected[0], &knobs)?;
    ensure!(dist.passed, "distribution {:?}", dist.verdict.decision);
    let prob = entry.run(&entry.expected[1], &knobs)?;
    ensure!(prob.passed, "probability {:?}", prob.verdict.decision);
    for r in &prob.series[0].records {
        let h = u(&r.width) as f64;
        ensure!(
            r.count == r.width,
            "probability r={}: count {} of {}",
            r.n,
            r.count,
            r.width
        );
        ensure!(
            (r.density - h.powf(0.2)).abs() <= 1e-12 * h.powf(0.2),
            "probability r={}: d={}",
            r.n,
            r.density
        );
    }
    Ok(format!(
        "d(x=-0.5) at r=10^4 = 19/19999^0.8 = {:.6e}; distribution convergesTo, probability d=h^0.2 fails",
        r.density
    ))
}

fn ac6() -> Check {
    let t = Instant::now();
    let grid = InvariantGrid::standard()?;
    ensure!(
        grid.models.len() >= 3 && grid.schemes.len() >= 3 && grid.params.len() >= 4,
        "grid too small"
    );
    let report = check_invariants(&grid)?;
    let checked: u64 = report.tallies.iter().map(|t| t.checked).sum();
    if let Some(v) = report.violations.first() {
        return Err(format!("{} violations, first: {v:?}", report.violations.len()).into());
    }
    let time = within(t, Duration::from_secs(60))?;
    Ok(format!(
        "{} models x {} schemes x {} params, {} invariants, {checked} checks, 0 violations; {time}",
        grid.models.len(),
        grid.schemes.len(),
        grid.params.len(),
        report.tallies.len()
    ))
}

/// Analytic and enumerated counts on random windows for every set kind.
fn ac7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_26);
    let squares = WindowScheme::squares(2500)?;
    let facts: Vec<u64> = (2..=10u64).map(|m| (1..=m).product()).collect();
    let selfp: Vec<u64> = (1..=7u64).map(|m| m.pow(m as u32)).collect();
    let coin = Law::fixed(vec![(-1.0, 0.5), (1.0, 0.5)])?;
    let params = OrderParams::new(0.7, 0.5, 0.5);
    let c_values = [(1, 2), (1, 3), (2, 3), (3, 10), (1, 1), (5, 7)];
    let mut per_kind = [0u32; 9];
    for i in 0..1000 {
        let kind = i % 9;
        let set = match kind {
            0 => IndexSet::PerfectSquares,
            1 => {
                let (a, b) = c_values[rng.random_range(0..c_values.len())];
                IndexSet::floor_powers(Exponent::ratio(a, b))?
            }
            2 => IndexSet::SelfPowers,
            3 => IndexSet::FactorialPoints,
            4 => IndexSet::FactorialInteriors { odd: false },
            5 => IndexSet::FactorialInteriors { odd: true },
            6 => {
                let mut cuts: Vec<u64> = (0..12).map(|_| rng.random_range(1..4_000_000)).collect();
                cuts.sort_unstable();
                cuts.dedup();
                let blocks = cuts
                    .chunks_exact(2)
                    .map(|c| (BigUint::from(c[0]), BigUint::from(c[1])))
                    .collect();
                IndexSet::block_union(blocks)?
            }
            7 => {
                let (a, b) = c_values[rng.random_range(0..c_values.len())];
                IndexSet::first_of_each_window(squares.clone(), Exponent::ratio(a, b))?
            }
            _ => IndexSet::Empty,
        };
        let width = rng.random_range(1..=100_000u64);
        let lo = match rng.random_range(0..3) {
            0 => rng.random_range(1..=1000),
            1 => rng.random_range(1..=4_000_000),
            _ => {
                let anchors = [&facts[..], &selfp[..]].concat();
                let a = anchors[rng.random_range(0..anchors.len())];
                a.saturating_sub(rng.random_range(0..width)).max(1)
            }
        };
        let hi = lo + width - 1;
        let model = RVSequenceModel::new(
            vec![Branch {
                set,
                law: coin.clone(),
            }],
            Law::point(0.0),
            LimitLaw::Point(0.0),
        )?;
        let scheme = WindowScheme::new(
            SchemeKind::ExplicitTable {
                alpha: vec![BigUint::from(lo)],
                beta: vec![BigUint::from(hi)],
            },
            1,
        )?;
        let nr = NRange::range(1, 1);
        let a = density_series(&model, &scheme, &params, &nr, &EngineConfig::analytic())?;
        let e = density_series(&model, &scheme, &params, &nr, &EngineConfig::enumerated())?;
        let (ca, ce) = (&a.records[0].count, &e.records[0].count);
        ensure!(
            ca == ce,
            "window [{lo}, {hi}] kind {kind}: analytic {ca} vs enumerated {ce}"
        );
        if ca.bits() > 0 {
            per_kind[kind] += 1;
        }
    }
    Ok(format!("1000 windows of width <= 10^5 over 9 set kinds: analytic == enumerated; nonzero counts per kind {per_kind:?}"))
}

/// Unit-ratio windows: classical convergence without αβ convergence.
fn ac8() -> Check {
    let entry = corpus::build("thm2_7")?;
    let outcomes = entry.verify(&VerdictKnobs::default())?;
    for o in &outcomes {
        ensure!(
            o.passed,
            "{} gave {:?}",
            o.expectation.label(),
            o.verdict.decision
        );
    }
    let blocks = entry.blocks.as_ref().ok_or("no blocks")?;
    let gap = &outcomes[1].series[0];
    for r in &gap.records {
        ensure!(
            r.count == r.width && r.density == 1.0,
            "block n={}: count {} of {}",
            r.n,
            r.count,
            r.width
        );
    }
    let ratio = entry.scheme("sqrtGap")?.liminf_ratio(1, 10_000_000)?;
    let fact = WindowScheme::custom(Formula::ConsecutiveFactorials, 20)?.liminf_ratio(1, 20)?;
    ensure!(
        fact.min_ratio == 2.0,
        "factorial min ratio {}",
        fact.min_ratio
    );
    Ok(format!(
        "classical gamma=1 convergesTo 0 (tailMax {:.2e}); blocks {:?} fully counted, fails; sqrtGap min ratio {:.6}; n! min ratio {}",
        outcomes[0].verdict.tail_max, blocks.indices, ratio.min_ratio, fact.min_ratio
    ))
}

/// Hoeffding coverage and band containment for sampled exceedances.
fn ac9() -> Check {
    let entry = corpus::build("ex2_1")?;
    let ks = [3u64, 5, 10, 101];
    let mut misses = 0;
    let mut trials = 0;
    for seed in 0..100 {
        let cfg = MCConfig::new(10_000, seed, 0.01)?;
        for &k in &ks {
            let p = if is_square(k) { 1.0 } else { 1.0 / k as f64 };
            let e = estimate_exceedance(&entry.model, k, 0.5, &cfg)?;
            trials += 1;
            if (e.estimate - p).abs() > e.half_width {
                misses += 1;
            }
        }
    }
    let rate = misses as f64 / trials as f64;
    let bound = 0.01 + 3.0 * (0.01f64 * 0.99 / trials as f64).sqrt();
    ensure!(rate <= bound, "violation rate {rate} > {bound}");

    let scheme = WindowScheme::squares(30)?;
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let nr = NRange::range(1, 30);
    let exact = density_series(
        &entry.model,
        &scheme,
        &params,
        &nr,
        &EngineConfig::enumerated(),
    )?;
    let mut windows = 0;
    for seed in 0..5 {
        let band = mc_density_series(
            &entry.model,
            &scheme,
            &params,
            &MCConfig::new(10_000, seed, 0.01)?,
            &nr,
            &EngineConfig::default(),
        )?;
        for (b, r) in band.records.iter().zip(&exact.records) {
            ensure!(
                b.d_lo <= r.density && r.density <= b.d_hi,
                "seed {seed} n={}: {} outside [{}, {}]",
                b.n,
                r.density,
                b.d_lo,
                b.d_hi
            );
            windows += 1;
        }
    }
    Ok(format!("violation rate {misses}/{trials} = {rate:.4} <= {bound:.4}; band holds the exact density on {windows} windows"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("{name} PASS  {detail}"),
            Err(e) => {
                failed += 1;
                println!("{name} FAIL  {e}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
