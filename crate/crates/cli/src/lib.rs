// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! The `abstat` command line.

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use abstat::corpus;
use abstat::engine::{
    cesaro_series, compare_modes, density_series, distribution_verdict, moment_series, verdict,
    CandidateLimit, DiagnosticSeries, Mode, Verdict, VerdictKnobs,
};
use abstat::invariants::{check_invariants, InvariantGrid};
use abstat::montecarlo::mc_density_series;
use abstat::WindowScheme;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::{parse_json_flag, read_json, set, GridConfig, RunConfig};
use crate::output::{json_line, limit_label, num, write_band, write_series};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] abstat::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "abstat",
    version,
    about = "Windowed statistical convergence diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series CSV and verdict JSON for one mode.
    Analyze(RunArgs),
    /// Runs a corpus entry and checks every expected verdict.
    Reproduce {
        id: String,
        /// Directory for one CSV per expectation; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        tail_fraction: Option<f64>,
    },
    /// All four mode verdicts plus Markov and reverse-bound certification.
    CompareModes(RunArgs),
    /// The β_n/α_n table of a scheme and its minimum.
    LiminfRatio {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scheme as JSON, e.g. '{"kind":"squares","horizon":100}'.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Sampled density band.
    McEstimate(RunArgs),
    /// Pointwise invariant suite over a grid of models, schemes and parameters.
    CheckInvariants {
        /// Grid JSON; the standard grid when absent.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Config file plus flags overriding single fields.
#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme as JSON.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    corpus: Option<String>,
    /// Model as JSON.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Index range as JSON.
    #[arg(long)]
    n_range: Option<String>,
    #[arg(long)]
    from: Option<u64>,
    #[arg(long)]
    to: Option<u64>,
    #[arg(long)]
    step: Option<u64>,
    /// Output path prefix.
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    tail_fraction: Option<f64>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    enum_limit: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    confidence: Option<f64>,
    /// Print the canonical config and exit.
    #[arg(long)]
    print_config: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut v = match &self.config {
            Some(p) => read_json(p)?,
            None => json!({}),
        };
        if !v.is_object() {
            return Err(CliError::Config("the config must be a JSON object".into()));
        }
        if let Some(s) = &self.scheme {
            set(&mut v, "scheme", parse_json_flag("scheme", s)?)?;
        }
        if let Some(id) = &self.corpus {
            v.as_object_mut().expect("object").remove("model");
            set(&mut v, "corpus", json!(id))?;
        }
        if let Some(m) = &self.model {
            v.as_object_mut().expect("object").remove("corpus");
            set(&mut v, "model", parse_json_flag("model", m)?)?;
        }
        if let Some(m) = &self.mode {
            set(&mut v, "mode", json!(m))?;
        }
        let fields = [
            ("params.gamma", self.gamma.map(Value::from)),
            ("params.epsilon", self.epsilon.map(Value::from)),
            ("params.delta", self.delta.map(Value::from)),
            ("params.p", self.p.map(Value::from)),
            ("params.r", self.r.map(Value::from)),
            ("verdict.tau", self.tau.map(Value::from)),
            ("verdict.tailFraction", self.tail_fraction.map(Value::from)),
            ("engine.backend", self.backend.clone().map(Value::from)),
            ("engine.enumLimit", self.enum_limit.map(Value::from)),
            ("mc.samplesPerIndex", self.samples.map(Value::from)),
            ("mc.seed", self.seed.map(Value::from)),
            ("mc.confidence", self.confidence.map(Value::from)),
            ("output", self.output.clone().map(Value::from)),
        ];
        for (path, val) in fields {
            if let Some(val) = val {
                set(&mut v, path, val)?;
            }
        }
        if let Some(r) = &self.n_range {
            set(&mut v, "nRange", parse_json_flag("n-range", r)?)?;
        }
        if self.from.is_some() || self.to.is_some() || self.step.is_some() {
            if v.get("nRange").and_then(|r| r.get("kind")).is_none() {
                set(&mut v, "nRange.kind", json!("range"))?;
            }
            for (key, val) in [("from", self.from), ("to", self.to), ("step", self.step)] {
                if let Some(x) = val {
                    set(&mut v, &format!("nRange.{key}"), json!(x))?;
                }
            }
        }
        RunConfig::from_value(v)
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Analyze(a) => with_config(&a, out, analyze),
        Command::CompareModes(a) => with_config(&a, out, compare),
        Command::McEstimate(a) => with_config(&a, out, mc_estimate),
        Command::Reproduce {
            id,
            output,
            tau,
            tail_fraction,
        } => {
            let d = VerdictKnobs::default();
            let knobs = VerdictKnobs {
                tau: tau.unwrap_or(d.tau),
                tail_fraction: tail_fraction.unwrap_or(d.tail_fraction),
            };
            reproduce(&id, output.as_deref(), &knobs, out)
        }
        Command::LiminfRatio {
            config,
            scheme,
            from,
            to,
        } => liminf_ratio(config.as_deref(), scheme.as_deref(), from, to, out),
        Command::CheckInvariants { config } => invariants(config.as_deref(), out),
    }
}

fn with_config(
    a: &RunArgs,
    out: &mut dyn Write,
    f: fn(&RunConfig, &mut dyn Write) -> Result<i32, CliError>,
) -> Result<i32, CliError> {
    let cfg = a.resolve()?;
    if a.print_config {
        out.write_all(cfg.canonical().as_bytes())?;
        return Ok(EXIT_OK);
    }
    f(&cfg, out)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// A single series, or one per continuity point in distribution mode.
type RunSeries = Vec<(Option<f64>, DiagnosticSeries)>;

fn run_mode(cfg: &RunConfig) -> Result<(Verdict, RunSeries), CliError> {
    let model = cfg.model()?;
    let (s, p, nr, e) = (&cfg.scheme, &cfg.params, &cfg.n_range, &cfg.engine);
    let series = match cfg.mode {
        Mode::Distribution => {
            let (v, per_x) = distribution_verdict(&model, s, p, nr, e, &cfg.verdict)?;
            return Ok((v, per_x.into_iter().map(|(x, s)| (Some(x), s)).collect()));
        }
        Mode::Probability => density_series(&model, s, p, nr, e)?,
        Mode::Cesaro => cesaro_series(&model, s, p, nr, e)?,
        Mode::Expectation => moment_series(&model, s, p, nr, e)?,
        Mode::RealSequence => {
            return Err(CliError::Config(
                "realSequence mode is library-only; configs describe random-variable models".into(),
            ))
        }
    };
    let v = verdict(&series, CandidateLimit::from(model.limit()), &cfg.verdict)?;
    Ok((v, vec![(None, series)]))
}

fn analyze(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let (v, series) = run_mode(cfg)?;
    match &cfg.output {
        Some(prefix) => {
            for (i, (x, s)) in series.iter().enumerate() {
                let path = match x {
                    Some(_) => format!("{prefix}.x{i}.csv"),
                    None => format!("{prefix}.csv"),
                };
                let mut f = create(Path::new(&path))?;
                write_series(&mut f, s)?;
                f.flush()?;
            }
            let mut f = create(Path::new(&format!("{prefix}.verdict.json")))?;
            f.write_all(json_line(&v)?.as_bytes())?;
            f.flush()?;
            out.write_all(json_line(&v)?.as_bytes())?;
        }
        None => {
            for (_, s) in &series {
                write_series(out, s)?;
                writeln!(out)?;
            }
            out.write_all(json_line(&v)?.as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

fn compare(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let model = cfg.model()?;
    let report = compare_modes(
        &model,
        &cfg.scheme,
        &cfg.params,
        &cfg.n_range,
        &cfg.engine,
        &cfg.verdict,
    )?;
    let text = json_line(&report)?;
    if let Some(prefix) = &cfg.output {
        let mut f = create(Path::new(&format!("{prefix}.compare.json")))?;
        f.write_all(text.as_bytes())?;
        f.flush()?;
    }
    out.write_all(text.as_bytes())?;
    Ok(if report.certified() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn mc_estimate(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    if cfg.mode != Mode::Probability {
        return Err(CliError::Config(format!(
            "mc-estimate samples exceedance probabilities; mode must be probability, got {}",
            cfg.mode.name()
        )));
    }
    let mc = cfg.mc.ok_or_else(|| {
        CliError::Config("mc-estimate needs `mc` (or --samples, --seed, --confidence)".into())
    })?;
    let model = cfg.model()?;
    let band = mc_density_series(
        &model,
        &cfg.scheme,
        &cfg.params,
        &mc,
        &cfg.n_range,
        &cfg.engine,
    )?;
    match &cfg.output {
        Some(prefix) => {
            let mut f = create(Path::new(&format!("{prefix}.band.csv")))?;
            write_band(&mut f, &band)?;
            f.flush()?;
        }
        None => write_band(out, &band)?,
    }
    Ok(EXIT_OK)
}

fn reproduce(
    id: &str,
    dir: Option<&Path>,
    knobs: &VerdictKnobs,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let entry = corpus::build(id)?;
    let outcomes = entry.verify(knobs)?;
    for (i, o) in outcomes.iter().enumerate() {
        for (j, s) in o.series.iter().enumerate() {
            match dir {
                Some(d) => {
                    let suffix = if o.series.len() > 1 {
                        format!(".x{j}")
                    } else {
                        String::new()
                    };
                    let path = d.join(format!("{id}.{i}.{}{suffix}.csv", o.expectation.scheme));
                    let mut f = create(&path)?;
                    write_series(&mut f, s)?;
                    f.flush()?;
                }
                None => {
                    write_series(out, s)?;
                    writeln!(out)?;
                }
            }
        }
    }
    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        let e = &o.expectation;
        writeln!(
            out,
            "{} {} {} | {} {} gamma={} tailMax={} got={} horizon={}",
            if o.passed { "PASS" } else { "FAIL" },
            e.decision.name(),
            limit_label(&o.verdict.candidate_limit),
            e.mode.name(),
            e.scheme,
            e.params.gamma,
            num(o.verdict.tail_max),
            o.verdict.decision.name(),
            o.verdict.horizon_used,
        )?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}

fn liminf_ratio(
    config: Option<&Path>,
    scheme: Option<&str>,
    from: Option<u64>,
    to: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let v = match (scheme, config) {
        (Some(s), _) => parse_json_flag("scheme", s)?,
        (None, Some(p)) => read_json(p)?
            .get("scheme")
            .cloned()
            .ok_or_else(|| CliError::Config("the config has no `scheme`".into()))?,
        (None, None) => {
            return Err(CliError::Config(
                "liminf-ratio needs --scheme or --config".into(),
            ))
        }
    };
    let scheme: WindowScheme =
        serde_json::from_value(v).map_err(|e| CliError::Config(format!("scheme: {e}")))?;
    let report = scheme.liminf_ratio(from.unwrap_or(1), to.unwrap_or(scheme.horizon()))?;
    writeln!(out, "minRatio {}", num(report.min_ratio))?;
    writeln!(out, "argmin {}", report.argmin)?;
    writeln!(
        out,
        "trend {}",
        serde_json::to_value(report.trend)?.as_str().unwrap_or("?")
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "ratio"])?;
    for (n, r) in &report.ratios {
        w.write_record([n.to_string(), num(*r)])?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn invariants(config: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let grid = match config {
        Some(p) => serde_json::from_value::<GridConfig>(read_json(p)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            .into_grid()?,
        None => InvariantGrid::standard()?,
    };
    let report = check_invariants(&grid)?;
    for t in &report.tallies {
        writeln!(
            out,
            "{} {} checked={} violations={}",
            if t.violations == 0 { "PASS" } else { "FAIL" },
            t.invariant,
            t.checked,
            t.violations
        )?;
    }
    if let Some(v) = report.violations.first() {
        writeln!(out, "first violation: {}", serde_json::to_string(v)?)?;
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}
