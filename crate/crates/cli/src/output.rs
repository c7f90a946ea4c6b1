// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use abstat::engine::{CandidateLimit, DiagnosticSeries};
use abstat::montecarlo::BandSeries;

use crate::CliError;

pub const SERIES_HEADER: [&str; 9] = [
    "n",
    "alpha",
    "beta",
    "width",
    "count",
    "density",
    "cesaro_lo",
    "cesaro_hi",
    "backend",
];

pub const BAND_HEADER: [&str; 11] = [
    "n",
    "alpha",
    "beta",
    "width",
    "count_lo",
    "count_hat",
    "count_hi",
    "d_lo",
    "d_hat",
    "d_hi",
    "uncertain",
];

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_series(out: &mut dyn Write, s: &DiagnosticSeries) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SERIES_HEADER)?;
    for r in &s.records {
        let (lo, hi) = match r.cesaro {
            Some((a, b)) => (num(a), num(b)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.n.to_string(),
            r.lo.to_string(),
            r.hi.to_string(),
            r.width.to_string(),
            r.count.to_string(),
            num(r.density),
            lo,
            hi,
            r.backend.name().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_band(out: &mut dyn Write, s: &BandSeries) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BAND_HEADER)?;
    for r in &s.records {
        w.write_record([
            r.n.to_string(),
            r.lo.to_string(),
            r.hi.to_string(),
            r.width.to_string(),
            r.count_lo.to_string(),
            r.count_hat.to_string(),
            r.count_hi.to_string(),
            num(r.d_lo),
            num(r.d_hat),
            num(r.d_hi),
            r.uncertain.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn limit_label(l: &CandidateLimit) -> String {
    match l {
        CandidateLimit::Point(v) => format!("{v}"),
        CandidateLimit::Law(d) => {
            let atoms: Vec<String> = d.atoms().iter().map(|(x, p)| format!("{x}:{p}")).collect();
            format!("law{{{}}}", atoms.join(","))
        }
    }
}

pub fn json_line<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
