use abstat::corpus;
use abstat::engine::{density_series, EngineConfig, NRange, OrderParams};
use abstat::models::RVSequenceModel;
use abstat::montecarlo::{estimate_exceedance, mc_density_series, MCConfig};
use abstat::{Error, WindowScheme};

fn cfg(seed: u64) -> MCConfig {
    MCConfig::new(10_000, seed, 0.01).unwrap()
}

#[test]
fn squares_always_exceed() {
    let entry = corpus::build("ex2_1").unwrap();
    let e = estimate_exceedance(&entry.model, 4, 0.5, &cfg(1)).unwrap();
    assert_eq!(e.estimate, 1.0);
    assert!((e.half_width - 0.016276).abs() < 1e-6);
}

#[test]
fn off_square_estimate_within_half_width() {
    let entry = corpus::build("ex2_1").unwrap();
    let e = estimate_exceedance(&entry.model, 101, 0.5, &cfg(2)).unwrap();
    assert!((e.estimate - 1.0 / 101.0).abs() <= e.half_width, "{e:?}");
    assert!(e.lower() < 1.0 / 101.0 && 1.0 / 101.0 < e.upper());
}

#[test]
fn point_mass_never_exceeds() {
    let model = RVSequenceModel::constant(2.0);
    let e = estimate_exceedance(&model, 7, 0.1, &cfg(3)).unwrap();
    assert_eq!(e.estimate, 0.0);
}

#[test]
fn estimates_repeat_per_seed() {
    let entry = corpus::build("ex2_1").unwrap();
    let a = estimate_exceedance(&entry.model, 10, 0.5, &cfg(9)).unwrap();
    let b = estimate_exceedance(&entry.model, 10, 0.5, &cfg(9)).unwrap();
    let c = estimate_exceedance(&entry.model, 10, 0.5, &cfg(10)).unwrap();
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    assert_ne!(a.estimate, c.estimate);
}

#[test]
fn band_contains_the_exact_density() {
    let entry = corpus::build("ex2_1").unwrap();
    let scheme = WindowScheme::squares(5).unwrap();
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let nr = NRange::list(vec![5]);
    let band = mc_density_series(
        &entry.model,
        &scheme,
        &params,
        &cfg(4),
        &nr,
        &EngineConfig::default(),
    )
    .unwrap();
    let r = &band.records[0];
    assert!(r.d_lo <= 1.0 / 3.0 && 1.0 / 3.0 <= r.d_hi, "{r:?}");
    let exact = density_series(
        &entry.model,
        &scheme,
        &params,
        &nr,
        &EngineConfig::enumerated(),
    )
    .unwrap();
    assert_eq!(exact.records[0].density, 1.0 / 3.0);
}

#[test]
fn zero_exceedance_band_is_zero() {
    let model = RVSequenceModel::constant(0.0);
    let scheme = WindowScheme::squares(10).unwrap();
    let band = mc_density_series(
        &model,
        &scheme,
        &OrderParams::new(0.5, 0.5, 0.5),
        &MCConfig::new(200, 1, 0.05).unwrap(),
        &NRange::range(1, 10),
        &EngineConfig::default(),
    )
    .unwrap();
    assert!(band.half_width < 0.5);
    for r in &band.records {
        assert_eq!((r.d_lo, r.d_hi), (0.0, 0.0));
        assert!(r.uncertain.is_empty());
    }
}

#[test]
fn threshold_inside_an_interval_is_flagged() {
    let entry = corpus::build("ex2_1").unwrap();
    let c = cfg(5);
    let k = 3;
    let p_hat = estimate_exceedance(&entry.model, k, 0.5, &c)
        .unwrap()
        .estimate;
    let scheme = WindowScheme::squares(2).unwrap();
    let band = mc_density_series(
        &entry.model,
        &scheme,
        &OrderParams::new(0.5, 0.5, p_hat),
        &c,
        &NRange::list(vec![2]),
        &EngineConfig::default(),
    )
    .unwrap();
    let r = &band.records[0];
    assert!(r.uncertain.contains(&k), "{r:?}");
    assert!(r.count_hi - r.count_lo >= 1);
}

#[test]
fn band_series_is_reproducible() {
    let entry = corpus::build("ex2_1").unwrap();
    let scheme = WindowScheme::squares(15).unwrap();
    let run = || {
        mc_density_series(
            &entry.model,
            &scheme,
            &OrderParams::new(0.5, 0.5, 0.5),
            &MCConfig::new(1000, 42, 0.05).unwrap(),
            &NRange::range(1, 15),
            &EngineConfig::default(),
        )
        .unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn wide_windows_are_refused() {
    let entry = corpus::build("ex2_1").unwrap();
    let scheme = WindowScheme::classical(100).unwrap();
    let err = mc_density_series(
        &entry.model,
        &scheme,
        &OrderParams::new(0.5, 0.5, 0.5),
        &cfg(1),
        &NRange::list(vec![100]),
        &EngineConfig {
            enum_limit: 50,
            ..EngineConfig::default()
        },
    )
    .unwrap_err();
    assert!(matches!(err, Error::WindowTooLarge { n: 100, .. }));
}

#[test]
fn continuous_laws_sample() {
    let entry = corpus::build("ex2_2").unwrap();
    let e = estimate_exceedance(&entry.model, 50, 0.5, &cfg(6)).unwrap();
    assert!((0.0..=1.0).contains(&e.estimate));
}
