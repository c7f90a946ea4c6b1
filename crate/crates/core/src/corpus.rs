// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Ready-made sequences with their schemes and expected verdicts.

use serde::{Deserialize, Serialize};

use crate::engine::{
    cesaro_series, density_series, distribution_verdict, moment_series, verdict, CandidateLimit,
    Decision, DiagnosticSeries, EngineConfig, Mode, NRange, OrderParams, Verdict, VerdictKnobs,
};
use crate::error::{Error, Result};
use crate::models::{
    AtomValue, Branch, ContinuousLaw, DiscreteDistribution, IndexSet, JointDistribution, Law,
    LimitLaw, ProbRule, RVSequenceModel,
};
use crate::numeric::Exponent;
use crate::windows::{Formula, SchemeKind, SlowRatioBlocks, WindowScheme};

pub const IDS: [&str; 8] = [
    "ex2_1", "ex2_2", "ex2_3", "ex2_4", "thm2_4", "ex3_1", "ex4_1", "thm2_7",
];

/// Orders swept for `ex2_2`.
pub const EX2_2_GAMMAS: [f64; 5] = [0.3, 0.45, 0.5, 0.55, 0.8];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedScheme {
    pub name: String,
    pub scheme: WindowScheme,
}

/// One expected verdict and the run that should reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Expectation {
    pub mode: Mode,
    /// Name of one of the entry's schemes.
    pub scheme: String,
    pub params: OrderParams,
    pub nrange: NRange,
    pub config: EngineConfig,
    pub decision: Decision,
    pub limit: LimitLaw,
}

impl Expectation {
    pub fn label(&self) -> String {
        format!(
            "{} {} gamma={} -> {}",
            self.mode.name(),
            self.scheme,
            self.params.gamma,
            self.decision.name()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusEntry {
    pub id: String,
    pub model: RVSequenceModel,
    pub schemes: Vec<NamedScheme>,
    pub default_params: OrderParams,
    pub expected: Vec<Expectation>,
    pub notes: String,
    /// The selected blocks, for constructions that pick them greedily.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<SlowRatioBlocks>,
}

/// Result of running one expectation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    pub expectation: Expectation,
    pub verdict: Verdict,
    /// One series, or one per grid point in distribution mode.
    pub series: Vec<DiagnosticSeries>,
    pub passed: bool,
}

impl CorpusEntry {
    pub fn scheme(&self, name: &str) -> Result<&WindowScheme> {
        self.schemes
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.scheme)
            .ok_or_else(|| Error::UnknownId(format!("{}: no scheme named {name}", self.id)))
    }

    /// The model judged against the expectation's limit.
    pub fn model_for(&self, e: &Expectation) -> Result<RVSequenceModel> {
        if &e.limit == self.model.limit() {
            Ok(self.model.clone())
        } else {
            self.model.with_limit(e.limit.clone())
        }
    }

    pub fn run(&self, e: &Expectation, knobs: &VerdictKnobs) -> Result<Outcome> {
        let model = self.model_for(e)?;
        let scheme = self.scheme(&e.scheme)?;
        let limit = CandidateLimit::from(model.limit());
        let (verdict, series) = match e.mode {
            Mode::Distribution => {
                let (v, per_x) =
                    distribution_verdict(&model, scheme, &e.params, &e.nrange, &e.config, knobs)?;
                (v, per_x.into_iter().map(|(_, s)| s).collect())
            }
            mode => {
                let s = match mode {
                    Mode::Probability => {
                        density_series(&model, scheme, &e.params, &e.nrange, &e.config)?
                    }
                    Mode::Cesaro => cesaro_series(&model, scheme, &e.params, &e.nrange, &e.config)?,
                    Mode::Expectation => {
                        moment_series(&model, scheme, &e.params, &e.nrange, &e.config)?
                    }
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "mode {} has no corpus runner",
                            mode.name()
                        )))
                    }
                };
                (verdict(&s, limit, knobs)?, vec![s])
            }
        };
        Ok(Outcome {
            passed: verdict.decision == e.decision,
            expectation: e.clone(),
            verdict,
            series,
        })
    }

    /// Runs every expectation.
    pub fn verify(&self, knobs: &VerdictKnobs) -> Result<Vec<Outcome>> {
        self.expected.iter().map(|e| self.run(e, knobs)).collect()
    }
}

fn named(name: &str, scheme: WindowScheme) -> NamedScheme {
    NamedScheme {
        name: name.into(),
        scheme,
    }
}

fn coin(a: f64, b: f64) -> Result<Law> {
    Law::fixed(vec![(a, 0.5), (b, 0.5)])
}

fn two_point(a: f64, b: f64, s: Exponent) -> Law {
    Law::TwoPoint {
        a: AtomValue::Const(a),
        b: AtomValue::Const(b),
        p_a: ProbRule::InversePower(s),
    }
}

struct Builder {
    expected: Vec<Expectation>,
}

impl Builder {
    fn new() -> Self {
        Self {
            expected: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn expect(
        &mut self,
        mode: Mode,
        scheme: &str,
        params: OrderParams,
        nrange: NRange,
        config: EngineConfig,
        decision: Decision,
        limit: LimitLaw,
    ) {
        self.expected.push(Expectation {
            mode,
            scheme: scheme.into(),
            params,
            nrange,
            config,
            decision,
            limit,
        });
    }
}

pub fn build(id: &str) -> Result<CorpusEntry> {
    match id {
        "ex2_1" => ex2_1(),
        "ex2_2" => ex2_2(),
        "ex2_3" => ex2_3(),
        "ex2_4" => ex2_4(),
        "thm2_4" => thm2_4(),
        "ex3_1" => ex3_1(),
        "ex4_1" => ex4_1(),
        "thm2_7" => thm2_7(),
        _ => Err(Error::UnknownId(id.into())),
    }
}

fn ex2_1() -> Result<CorpusEntry> {
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::PerfectSquares,
            law: coin(-1.0, 1.0)?,
        }],
        two_point(1.0, 0.0, Exponent::ratio(1, 1)),
        LimitLaw::Point(0.0),
    )?;
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let mut b = Builder::new();
    let zero = LimitLaw::Point(0.0);
    b.expect(
        Mode::Probability,
        "squares",
        params,
        NRange::range(1, 5000),
        EngineConfig::default(),
        Decision::ConvergesTo,
        zero.clone(),
    );
    b.expect(
        Mode::Probability,
        "classical",
        params,
        NRange::range(1, 10_000),
        EngineConfig::analytic(),
        Decision::Fails,
        zero,
    );
    Ok(CorpusEntry {
        id: "ex2_1".into(),
        model,
        schemes: vec![named("squares", WindowScheme::squares(5000)?), named("classical", WindowScheme::classical(10_000)?)],
        default_params: params,
        expected: b.expected,
        notes: "X_k is ±1 with equal odds on perfect squares and 1 with probability 1/k (else 0) elsewhere. \
                Each squares window holds one square, so the density vanishes at order 1/2; the classical \
                windows [1, n] hold √n squares and the density stays near 1."
            .into(),
        blocks: None,
    })
}

fn ex2_2() -> Result<CorpusEntry> {
    let c = Exponent::ratio(1, 2);
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::floor_powers(c)?,
            law: Law::Continuous {
                law: ContinuousLaw::Uniform { lo: 0.0, hi: 1.0 },
            },
        }],
        Law::Continuous {
            law: ContinuousLaw::ScaledMax { upper: 2.0 },
        },
        LimitLaw::Point(2.0),
    )?
    .with_epsilon_below(1.0)?;
    let horizon = 10_000_000_000_000_000_000;
    let nrange = NRange::geometric(100_000_000_000_000, horizon, 41);
    let mut b = Builder::new();
    for g in EX2_2_GAMMAS {
        let decision = if g > c.value() {
            Decision::ConvergesTo
        } else {
            Decision::Fails
        };
        let params = OrderParams::new(g, 0.5, 0.5);
        b.expect(
            Mode::Probability,
            "powerOfN2",
            params,
            nrange.clone(),
            EngineConfig::analytic(),
            decision,
            LimitLaw::Point(2.0),
        );
    }
    Ok(CorpusEntry {
        id: "ex2_2".into(),
        model,
        schemes: vec![named("powerOfN2", WindowScheme::power_of_n(2, horizon)?)],
        default_params: OrderParams::new(0.8, 0.5, 0.5),
        expected: b.expected,
        notes: "X_k is uniform on (0, 1) at k = ⌊m^{1/c}⌋ and has density k x^{k−1}/2^k on (0, 2) elsewhere; \
                c = 1/2, windows [1, n²], defined for ε < 1. The verdict flips from fails to converges as γ \
                crosses c."
            .into(),
        blocks: None,
    })
}

fn ex2_3() -> Result<CorpusEntry> {
    let one = Exponent::ratio(1, 1);
    let model = RVSequenceModel::new(
        vec![
            Branch {
                set: IndexSet::FactorialPoints,
                law: coin(-3.0, 3.0)?,
            },
            Branch {
                set: IndexSet::FactorialInteriors { odd: true },
                law: two_point(-2.0, 2.0, one),
            },
        ],
        two_point(-1.0, 1.0, one),
        LimitLaw::Point(1.0),
    )?;
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let nrange = NRange::range(1, 12);
    let cfg = EngineConfig::analytic();
    let mut b = Builder::new();
    let (l1, l2) = (LimitLaw::Point(1.0), LimitLaw::Point(2.0));
    b.expect(
        Mode::Probability,
        "factorialEven",
        params,
        nrange.clone(),
        cfg,
        Decision::ConvergesTo,
        l1.clone(),
    );
    b.expect(
        Mode::Probability,
        "factorialOdd",
        params,
        nrange.clone(),
        cfg,
        Decision::ConvergesTo,
        l2.clone(),
    );
    b.expect(
        Mode::Probability,
        "factorialEven",
        params,
        nrange.clone(),
        cfg,
        Decision::Fails,
        l2,
    );
    b.expect(
        Mode::Probability,
        "factorialOdd",
        params,
        nrange,
        cfg,
        Decision::Fails,
        l1,
    );
    Ok(CorpusEntry {
        id: "ex2_3".into(),
        model,
        schemes: vec![
            named("factorialEven", WindowScheme::new(SchemeKind::FactorialEven, 12)?),
            named("factorialOdd", WindowScheme::new(SchemeKind::FactorialOdd, 12)?),
        ],
        default_params: params,
        expected: b.expected,
        notes: "Factorials are ±3 with equal odds. Inside ((2n)!, (2n+1)!) X_k is −1 with probability 1/k, else 1; \
                inside ((2n+1)!, (2n+2)!) it is −2 with probability 1/k, else 2. Indices below 2 follow the \
                first of these. The even windows see limit 1 and the odd windows limit 2."
            .into(),
        blocks: None,
    })
}

fn ex2_4() -> Result<CorpusEntry> {
    let params = OrderParams::new(0.5, 0.5, 0.5);
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::SelfPowers,
            law: coin(-1.0, 1.0)?,
        }],
        two_point(1.0, 0.0, Exponent::from_f64(1.0 / (2.0 * params.p))?),
        LimitLaw::Point(0.0),
    )?;
    let zero = LimitLaw::Point(0.0);
    let mut b = Builder::new();
    b.expect(
        Mode::Probability,
        "powerOfN2",
        params,
        NRange::geometric(10, 1_000_000_000, 41),
        EngineConfig::analytic(),
        Decision::ConvergesTo,
        zero.clone(),
    );
    b.expect(
        Mode::Cesaro,
        "powerOfN2",
        params,
        NRange::geometric(10, 1_000_000_000, 41),
        EngineConfig::analytic(),
        Decision::Fails,
        zero,
    );
    Ok(CorpusEntry {
        id: "ex2_4".into(),
        model,
        schemes: vec![named("powerOfN2", WindowScheme::power_of_n(2, 1_000_000_000)?)],
        default_params: params,
        expected: b.expected,
        notes: "X_k is ±1 with equal odds at k = m^m and 1 with probability k^{−1/(2p)} (else 0) elsewhere; windows \
                [1, n²]. Few indices reach probability δ, but the p-th powers sum to about 2n, so the Cesàro \
                average stays above 1 at order 1/2."
            .into(),
        blocks: None,
    })
}

fn thm2_4() -> Result<CorpusEntry> {
    let params = OrderParams::new(0.8, 0.5, 0.5);
    let c = Exponent::ratio(1, 2);
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::floor_powers(c)?,
            law: coin(-1.0, 1.0)?,
        }],
        two_point(1.0, 0.0, Exponent::from_f64(2.0 / params.p)?),
        LimitLaw::Point(0.0),
    )?;
    let zero = LimitLaw::Point(0.0);
    let nrange = NRange::geometric(10, 1_000_000_000, 41);
    let mut b = Builder::new();
    b.expect(
        Mode::Cesaro,
        "powerOfN2",
        params,
        nrange.clone(),
        EngineConfig::analytic(),
        Decision::ConvergesTo,
        zero.clone(),
    );
    b.expect(
        Mode::Cesaro,
        "powerOfN2",
        OrderParams {
            gamma: 0.3,
            ..params
        },
        nrange,
        EngineConfig::analytic(),
        Decision::Fails,
        zero,
    );
    Ok(CorpusEntry {
        id: "thm2_4".into(),
        model,
        schemes: vec![named("powerOfN2", WindowScheme::power_of_n(2, 1_000_000_000)?)],
        default_params: params,
        expected: b.expected,
        notes: "X_k is ±1 with equal odds at k = ⌊m^{1/c}⌋ and 1 with probability k^{−2/p} (else 0) elsewhere; c = 1/2, \
                windows [1, n²]. The Cesàro sum grows like n^{2c}, so the order-γ average converges for γ > c \
                and diverges for γ < c."
            .into(),
        blocks: None,
    })
}

fn ex3_1() -> Result<CorpusEntry> {
    let params = OrderParams::new(0.5, 0.25, 0.5);
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::PerfectSquares,
            law: coin(0.0, 1.0)?,
        }],
        Law::TwoPoint {
            a: AtomValue::Index,
            b: AtomValue::Const(0.0),
            p_a: ProbRule::InversePower(Exponent::from_f64(params.r)?),
        },
        LimitLaw::Point(0.0),
    )?;
    let zero = LimitLaw::Point(0.0);
    let nrange = NRange::range(1, 2000);
    let mut b = Builder::new();
    b.expect(
        Mode::Probability,
        "squares",
        params,
        nrange.clone(),
        EngineConfig::enumerated(),
        Decision::ConvergesTo,
        zero.clone(),
    );
    b.expect(
        Mode::Expectation,
        "squares",
        params,
        nrange,
        EngineConfig::enumerated(),
        Decision::Fails,
        zero,
    );
    Ok(CorpusEntry {
        id: "ex3_1".into(),
        model,
        schemes: vec![named("squares", WindowScheme::squares(2000)?)],
        default_params: params,
        expected: b.expected,
        notes: "X_k is 0 or 1 with equal odds on perfect squares and k with probability k^{−r} (else 0) elsewhere. \
                Exceedance probabilities vanish off the squares while E|X_k|^r stays at 1."
            .into(),
        blocks: None,
    })
}

fn ex4_1() -> Result<CorpusEntry> {
    let params = OrderParams::new(0.8, 0.5, 0.5);
    let horizon = 10_000;
    let squares = WindowScheme::squares(horizon)?;
    let limit = LimitLaw::Discrete(DiscreteDistribution::new(vec![(0.0, 0.5), (1.0, 0.5)])?);
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::first_of_each_window(squares.clone(), Exponent::ratio(3, 10))?,
            law: Law::Joint {
                joint: JointDistribution::new(vec![(-1.0, 1.0, 0.5), (1.0, 0.0, 0.5)])?,
            },
        }],
        Law::Joint {
            joint: JointDistribution::new(vec![(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)])?,
        },
        limit.clone(),
    )?;
    let nrange = NRange::range(1, horizon);
    let mut b = Builder::new();
    b.expect(
        Mode::Distribution,
        "squares",
        params,
        nrange.clone(),
        EngineConfig::analytic(),
        Decision::ConvergesTo,
        limit.clone(),
    );
    b.expect(
        Mode::Probability,
        "squares",
        params,
        nrange,
        EngineConfig::analytic(),
        Decision::Fails,
        limit,
    );
    Ok(CorpusEntry {
        id: "ex4_1".into(),
        model,
        schemes: vec![named("squares", squares)],
        default_params: params,
        expected: b.expected,
        notes: "On the first ⌊h_r^c⌋ indices of each squares window (X_k, X) is (−1, 1) or (1, 0) with equal odds; \
                elsewhere X_k = 1 − X with X a fair 0/1 coin. c = 0.3, γ = 0.8. Laws agree off a sparse set, \
                while |X_k − X| ≥ 1 everywhere."
            .into(),
        blocks: None,
    })
}

/// Blocks picked along the `√n`-gap scheme.
pub const THM2_7_BLOCKS: u64 = 5;

fn thm2_7() -> Result<CorpusEntry> {
    let params = OrderParams::new(1.0, 0.5, 0.5);
    let gap = WindowScheme::custom(Formula::SqrtGap, 10_000_000)?;
    let blocks = gap.construct_slow_ratio_blocks(THM2_7_BLOCKS)?;
    let model = RVSequenceModel::new(
        vec![Branch {
            set: IndexSet::block_union(blocks.blocks.clone())?,
            law: coin(-1.0, 1.0)?,
        }],
        two_point(1.0, 0.0, Exponent::ratio(2, 1)),
        LimitLaw::Point(0.0),
    )?;
    let zero = LimitLaw::Point(0.0);
    let classical_horizon = 100_000_000;
    let mut b = Builder::new();
    b.expect(
        Mode::Probability,
        "classical",
        params,
        NRange::geometric(10, classical_horizon, 61),
        EngineConfig::analytic(),
        Decision::ConvergesTo,
        zero.clone(),
    );
    b.expect(
        Mode::Probability,
        "sqrtGap",
        params,
        NRange::list(blocks.indices.clone()),
        EngineConfig::default(),
        Decision::Fails,
        zero,
    );
    Ok(CorpusEntry {
        id: "thm2_7".into(),
        model,
        schemes: vec![
            named("sqrtGap", gap),
            named("classical", WindowScheme::classical(classical_horizon)?),
            named("consecutiveFactorials", WindowScheme::custom(Formula::ConsecutiveFactorials, 20)?),
        ],
        default_params: params,
        expected: b.expected,
        notes: "Windows [n, n + ⌈√n⌉] have β_n/α_n → 1. Blocks r(1) < … < r(5) are chosen greedily with \
                β_r/α_r < 1 + 1/j and β_{r(j)−1} ≥ j·β_{r(j−1)}; X_k is ±1 with equal odds on the blocks and 1 \
                with probability 1/k² (else 0) elsewhere. The classical density vanishes while every selected \
                window is fully counted. Windows [n!, (n+1)!] are included for the ratio diagnostic."
            .into(),
        blocks: Some(blocks),
    })
}
