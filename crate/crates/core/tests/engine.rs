use abstat::corpus;
use abstat::engine::{
    compare_modes, density_series, real_stat_density, stat_lim_inf, stat_lim_sup, verdict, Backend,
    CandidateLimit, Decision, DiagnosticSeries, EngineConfig, Mode, ModeOutcome, NRange,
    OrderParams, RealSeq, SeriesRecord, StatLimitKnobs, Trend, VerdictKnobs,
};
use abstat::models::{IndexSet, LimitLaw, RVSequenceModel};
use abstat::numeric::factorial;
use abstat::{Error, SchemeKind, WindowScheme};
use num_bigint::BigUint;

fn synthetic(values: &[f64]) -> DiagnosticSeries {
    let records = values
        .iter()
        .enumerate()
        .map(|(i, &d)| SeriesRecord {
            n: i as u64 + 1,
            lo: BigUint::from(1u32),
            hi: BigUint::from(i as u64 + 1),
            width: BigUint::from(i as u64 + 1),
            count: BigUint::from(0u32),
            density: d,
            cesaro: None,
            backend: Backend::Enumerated,
        })
        .collect();
    DiagnosticSeries {
        mode: Mode::Probability,
        gamma: 1.0,
        records,
    }
}

fn decide(values: &[f64]) -> (Decision, Trend) {
    let v = verdict(
        &synthetic(values),
        CandidateLimit::Point(0.0),
        &VerdictKnobs::default(),
    )
    .unwrap();
    (v.decision, v.tail_trend)
}

#[test]
fn verdict_rules() {
    let small: Vec<f64> = (1..=20).map(|n| 0.5 / n as f64).collect();
    assert_eq!(decide(&small), (Decision::ConvergesTo, Trend::Decreasing));
    assert_eq!(decide(&[0.0; 10]), (Decision::ConvergesTo, Trend::Flat));
    assert_eq!(decide(&[1.0; 10]), (Decision::Fails, Trend::Flat));

    let growing: Vec<f64> = (1..=20).map(|n| n as f64).collect();
    assert_eq!(decide(&growing), (Decision::Fails, Trend::Increasing));

    // above τ but still falling: no decision
    let falling: Vec<f64> = (1..=20).map(|n| 2.0 - 0.05 * n as f64).collect();
    assert_eq!(
        decide(&falling),
        (Decision::Inconclusive, Trend::Decreasing)
    );

    // below τ but oscillating: no convergence claim
    let wobble: Vec<f64> = (1..=20)
        .map(|n| if n % 2 == 0 { 0.01 } else { 0.02 })
        .collect();
    assert_eq!(
        decide(&wobble),
        (Decision::Inconclusive, Trend::Oscillating)
    );

    // straddling τ
    let mixed: Vec<f64> = (1..=20).map(|n| if n < 15 { 0.01 } else { 0.1 }).collect();
    assert_eq!(decide(&mixed).0, Decision::Inconclusive);
}

#[test]
fn verdict_uses_only_the_tail() {
    let mut values = vec![5.0; 10];
    values.extend([0.0; 10]);
    let v = verdict(
        &synthetic(&values),
        CandidateLimit::Point(0.0),
        &VerdictKnobs::default(),
    )
    .unwrap();
    assert_eq!(v.tail_len, 10);
    assert_eq!(v.tail_max, 0.0);
    assert_eq!(v.horizon_used, 20);
    let all = VerdictKnobs {
        tau: 0.05,
        tail_fraction: 1.0,
    };
    let v = verdict(&synthetic(&values), CandidateLimit::Point(0.0), &all).unwrap();
    assert_eq!(v.tail_max, 5.0);
}

#[test]
fn verdict_rejects_empty_series_and_bad_knobs() {
    let empty = synthetic(&[]);
    assert!(matches!(
        verdict(&empty, CandidateLimit::Point(0.0), &VerdictKnobs::default()),
        Err(Error::EmptyWindowRange)
    ));
    let bad = VerdictKnobs {
        tau: 0.05,
        tail_fraction: 0.0,
    };
    assert!(verdict(&synthetic(&[1.0]), CandidateLimit::Point(0.0), &bad).is_err());
}

#[test]
fn factorial_window_four_counts_its_endpoints() {
    let entry = corpus::build("ex2_3").unwrap();
    let scheme = entry.scheme("factorialEven").unwrap();
    let w = scheme.window(4).unwrap();
    assert_eq!(w.lo, BigUint::from(40_320u32));
    assert_eq!(w.hi, BigUint::from(362_880u32));
    let params = OrderParams::new(0.5, 0.5, 0.5);
    for cfg in [EngineConfig::enumerated(), EngineConfig::analytic()] {
        let s =
            density_series(&entry.model, scheme, &params, &NRange::list(vec![4]), &cfg).unwrap();
        let r = &s.records[0];
        assert_eq!(r.count, BigUint::from(2u32));
        assert_eq!(r.width, BigUint::from(322_561u32));
        assert!((r.density - 0.003521470602744263).abs() < 1e-15);
    }
}

#[test]
fn factorial_windows_stay_exact_at_the_horizon() {
    let entry = corpus::build("ex2_3").unwrap();
    let scheme = entry.scheme("factorialOdd").unwrap();
    let model = entry.model.with_limit(LimitLaw::Point(2.0)).unwrap();
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let s = density_series(
        &model,
        scheme,
        &params,
        &NRange::list(vec![12]),
        &EngineConfig::default(),
    )
    .unwrap();
    let r = &s.records[0];
    assert_eq!(r.lo, factorial(25));
    assert_eq!(r.hi, factorial(26));
    assert_eq!(r.count, BigUint::from(2u32));
    assert_eq!(r.backend, Backend::Analytic);
}

#[test]
fn enumeration_refuses_huge_windows() {
    let scheme = WindowScheme::new(SchemeKind::FactorialEven, 12).unwrap();
    let model = RVSequenceModel::constant(0.0);
    let err = density_series(
        &model,
        &scheme,
        &OrderParams::default(),
        &NRange::list(vec![12]),
        &EngineConfig::enumerated(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::WindowTooLarge { n: 12, .. }));
}

#[test]
fn constant_model_converges_in_every_mode() {
    let model = RVSequenceModel::constant(3.0);
    let scheme = WindowScheme::squares(100).unwrap();
    let report = compare_modes(
        &model,
        &scheme,
        &OrderParams::new(0.5, 0.5, 0.5),
        &NRange::range(1, 100),
        &EngineConfig::default(),
        &VerdictKnobs::default(),
    )
    .unwrap();
    for o in [
        &report.probability,
        &report.cesaro,
        &report.expectation,
        &report.distribution,
    ] {
        match o {
            ModeOutcome::Verdict(v) => {
                assert_eq!(v.decision, Decision::ConvergesTo);
                assert_eq!(v.tail_max, 0.0);
            }
            ModeOutcome::Unavailable(why) => panic!("mode unavailable: {why}"),
        }
    }
    assert!(report.certified());
    assert_eq!(report.markov_checked, 100);
}

#[test]
fn a_scheme_cannot_certify_two_limits() {
    // The same windows cannot converge to both 1 and 2.
    let entry = corpus::build("ex2_3").unwrap();
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let knobs = VerdictKnobs::default();
    for name in ["factorialEven", "factorialOdd"] {
        let scheme = entry.scheme(name).unwrap();
        let converging = [1.0, 2.0]
            .into_iter()
            .filter(|&l| {
                let model = entry.model.with_limit(LimitLaw::Point(l)).unwrap();
                let s = density_series(
                    &model,
                    scheme,
                    &params,
                    &NRange::range(1, 12),
                    &EngineConfig::analytic(),
                )
                .unwrap();
                verdict(&s, CandidateLimit::Point(l), &knobs)
                    .unwrap()
                    .decision
                    == Decision::ConvergesTo
            })
            .count();
        assert_eq!(converging, 1, "{name}");
    }
}

#[test]
fn every_corpus_entry_reproduces() {
    for id in corpus::IDS {
        let entry = corpus::build(id).unwrap();
        assert!(!entry.expected.is_empty(), "{id}");
        for o in entry.verify(&VerdictKnobs::default()).unwrap() {
            assert!(
                o.passed,
                "{id}: {} gave {:?}",
                o.expectation.label(),
                o.verdict.decision
            );
        }
    }
}

#[test]
fn unknown_corpus_id() {
    assert!(matches!(corpus::build("ex5_1"), Err(Error::UnknownId(_))));
}

#[test]
fn larger_gamma_never_raises_density() {
    let entry = corpus::build("ex2_1").unwrap();
    let scheme = entry.scheme("squares").unwrap();
    let nr = NRange::range(1, 200);
    let lo = density_series(
        &entry.model,
        scheme,
        &OrderParams::new(0.3, 0.5, 0.5),
        &nr,
        &EngineConfig::default(),
    )
    .unwrap();
    let hi = density_series(
        &entry.model,
        scheme,
        &OrderParams::new(0.9, 0.5, 0.5),
        &nr,
        &EngineConfig::default(),
    )
    .unwrap();
    for (a, b) in lo.records.iter().zip(&hi.records) {
        assert!(b.density <= a.density);
    }
}

#[test]
fn geometric_ranges_are_distinct_and_end_at_the_horizon() {
    let scheme = WindowScheme::classical(1_000_000).unwrap();
    let ns = NRange::geometric(10, 1_000_000, 25)
        .indices(&scheme)
        .unwrap();
    assert_eq!(ns.first(), Some(&10));
    assert_eq!(ns.last(), Some(&1_000_000));
    assert!(ns.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn real_sequences() {
    let scheme = WindowScheme::classical(2000).unwrap();
    let nr = NRange::range(1, 2000);
    let cfg = EngineConfig::default();
    // 1/k ≥ 0.01 only for k ≤ 100, so d_n = 100/n
    let long = WindowScheme::classical(1_000_000).unwrap();
    let s = real_stat_density(
        &RealSeq::Reciprocal,
        0.0,
        &long,
        1.0,
        0.01,
        &NRange::geometric(10, 1_000_000, 30),
        &cfg,
    )
    .unwrap();
    assert_eq!(s.record(1_000_000).unwrap().count, BigUint::from(100u32));
    let v = verdict(&s, CandidateLimit::Point(0.0), &VerdictKnobs::default()).unwrap();
    assert_eq!(v.decision, Decision::ConvergesTo);

    let squares = RealSeq::Indicator {
        set: IndexSet::PerfectSquares,
        value: 5.0,
    };
    let s = real_stat_density(&squares, 0.0, &scheme, 1.0, 0.5, &nr, &cfg).unwrap();
    assert_eq!(s.record(1600).unwrap().count, BigUint::from(40u32));

    let knobs = StatLimitKnobs::default();
    let sup = stat_lim_sup(&RealSeq::Alternating, &scheme, 1.0, &knobs, &nr, &cfg).unwrap();
    let inf = stat_lim_inf(&RealSeq::Alternating, &scheme, 1.0, &knobs, &nr, &cfg).unwrap();
    assert_eq!((inf, sup), (-1.0, 1.0));
    // √n squares in [1, n] reach density η = 0.01 only while n ≤ 10⁴
    let sup = stat_lim_sup(&squares, &scheme, 1.0, &knobs, &nr, &cfg).unwrap();
    assert_eq!(sup, 5.0);
    let far = NRange::geometric(20_000, 200_000, 6);
    let sup = stat_lim_sup(&squares, &long, 1.0, &knobs, &far, &cfg).unwrap();
    assert_eq!(sup, 0.0);
}

#[test]
fn configs_round_trip_through_json() {
    for id in corpus::IDS {
        let entry = corpus::build(id).unwrap();
        let text = serde_json::to_string(&entry.model).unwrap();
        let back: RVSequenceModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, entry.model, "{id}");
        for s in &entry.schemes {
            let text = serde_json::to_string(&s.scheme).unwrap();
            let back: WindowScheme = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s.scheme, "{id} {}", s.name);
        }
    }
}

#[test]
fn malformed_configs_are_rejected() {
    let bad_scheme = r#"{"kind":"squares"}"#;
    assert!(serde_json::from_str::<WindowScheme>(bad_scheme).is_err());
    let unknown = r#"{"kind":"squares","horizon":5,"extra":1}"#;
    assert!(serde_json::from_str::<WindowScheme>(unknown).is_err());
    // probabilities must sum to one
    let model = r#"{"default":{"type":"fixed","dist":{"atoms":[[0,0.5]]}},"limit":{"point":0}}"#;
    assert!(serde_json::from_str::<RVSequenceModel>(model).is_err());
    let params = OrderParams::new(0.0, 0.5, 0.5);
    assert!(params.validate().is_err());
    assert!(OrderParams::new(0.5, 0.5, 1.5).validate().is_err());
}
