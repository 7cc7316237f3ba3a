//! Plain-text record formats for coupling vectors, pattern lists and schedules.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64` bit-exactly through `str::parse`.
//!
//! Couplings:
//! ```text
//! # comment
//! n_qubits=3
//! 0 1 z z 1.0000000000000000e0
//! ```
//!
//! Schedules:
//! ```text
//! n_qubits=3
//! T=1.0000000000000000e0
//! mode=mitigate
//! row=0 1 z z
//! IXX 5.0000000000000000e-1
//! ```
//! `row=` lines list the constrained couplings and may be omitted.

use std::fmt::Write as _;

use crate::blocks::GatePattern;
use crate::error::{DaqcError, Result};
use crate::pauli::{CouplingKey, CouplingVector, InteractionGraph};
use crate::schedule::{Schedule, SynthesisMode};

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_err(line: usize, msg: impl Into<String>) -> DaqcError {
    DaqcError::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((idx + 1, line))
    })
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| parse_err(line, format!("invalid number '{s}'")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("non-finite number '{s}'")))
    }
}

fn parse_key(line: usize, fields: &[&str]) -> Result<CouplingKey> {
    let [i, j, mu, nu] = fields else {
        return Err(parse_err(line, "expected 'i j mu nu'"));
    };
    let i: usize = i.parse().map_err(|_| parse_err(line, format!("invalid qubit '{i}'")))?;
    let j: usize = j.parse().map_err(|_| parse_err(line, format!("invalid qubit '{j}'")))?;
    CouplingKey::new(i, j, mu.parse()?, nu.parse()?)
}

fn key_fields(key: &CouplingKey) -> String {
    format!("{} {} {} {}", key.i, key.j, key.mu, key.nu)
}

/// Parsed coupling records in file order, explicit zeros included.
pub fn parse_coupling_records(text: &str) -> Result<(usize, Vec<(CouplingKey, f64)>)> {
    let mut n_qubits = None;
    let mut records = Vec::new();
    for (line, content) in content_lines(text) {
        if let Some(value) = content.strip_prefix("n_qubits=") {
            if n_qubits.is_some() {
                return Err(parse_err(line, "repeated n_qubits header"));
            }
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("invalid qubit count '{value}'")))?;
            if n == 0 {
                return Err(parse_err(line, "n_qubits must be positive"));
            }
            n_qubits = Some(n);
            continue;
        }
        let n = n_qubits.ok_or_else(|| parse_err(line, "coupling record before the n_qubits header"))?;
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(line, "expected 'i j mu nu value'"));
        }
        let key = parse_key(line, &fields[..4])?;
        if key.j >= n {
            return Err(parse_err(line, format!("{key} does not fit {n} qubits")));
        }
        if records.iter().any(|(k, _)| *k == key) {
            return Err(parse_err(line, format!("duplicate coupling {key}")));
        }
        records.push((key, parse_f64(line, fields[4])?));
    }
    let n = n_qubits.ok_or_else(|| parse_err(0, "missing n_qubits header"))?;
    Ok((n, records))
}

pub fn parse_couplings(text: &str) -> Result<CouplingVector> {
    let (n, records) = parse_coupling_records(text)?;
    CouplingVector::from_entries(n, records)
}

/// Every listed key is an edge, whatever its value.
pub fn parse_graph(text: &str) -> Result<InteractionGraph> {
    let (n, records) = parse_coupling_records(text)?;
    InteractionGraph::from_edges(n, records.into_iter().map(|(k, _)| k))
}

pub fn write_couplings(v: &CouplingVector) -> String {
    let mut out = format!("n_qubits={}\n", v.n_qubits());
    for (k, x) in v.iter() {
        let _ = writeln!(out, "{} {}", key_fields(k), fmt_f64(*x));
    }
    out
}

/// Graph edges written as unit couplings.
pub fn write_graph(g: &InteractionGraph) -> String {
    let mut out = format!("n_qubits={}\n", g.n_qubits());
    for k in g.edges() {
        let _ = writeln!(out, "{} {}", key_fields(k), fmt_f64(1.0));
    }
    out
}

pub fn write_patterns(patterns: &[GatePattern]) -> String {
    patterns.iter().map(|p| format!("{p}\n")).collect()
}

pub fn parse_patterns(text: &str) -> Result<Vec<GatePattern>> {
    content_lines(text)
        .map(|(line, s)| s.parse().map_err(|e: DaqcError| parse_err(line, e.to_string())))
        .collect()
}

pub fn write_schedule(s: &Schedule) -> String {
    let mut out = format!(
        "n_qubits={}\nT={}\nmode={}\n",
        s.n_qubits,
        fmt_f64(s.target_time),
        s.mode
    );
    for row in &s.rows {
        let _ = writeln!(out, "row={}", key_fields(row));
    }
    for (p, t) in s.blocks() {
        let _ = writeln!(out, "{p} {}", fmt_f64(t));
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut n_qubits = None;
    let mut target_time = None;
    let mut mode = None;
    let mut rows = Vec::new();
    let mut patterns = Vec::new();
    let mut times = Vec::new();
    for (line, content) in content_lines(text) {
        if let Some(v) = content.strip_prefix("n_qubits=") {
            n_qubits = Some(v.trim().parse::<usize>().map_err(|_| parse_err(line, "invalid n_qubits"))?);
        } else if let Some(v) = content.strip_prefix("T=") {
            target_time = Some(parse_f64(line, v.trim())?);
        } else if let Some(v) = content.strip_prefix("mode=") {
            mode = Some(v.trim().parse::<SynthesisMode>().map_err(|e| parse_err(line, e.to_string()))?);
        } else if let Some(v) = content.strip_prefix("row=") {
            let fields: Vec<&str> = v.split_whitespace().collect();
            rows.push(parse_key(line, &fields)?);
        } else {
            let n = n_qubits.ok_or_else(|| parse_err(line, "block before the n_qubits header"))?;
            let mut fields = content.split_whitespace();
            let (Some(p), Some(t), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(line, "expected 'pattern time'"));
            };
            let pattern: GatePattern = p.parse().map_err(|e: DaqcError| parse_err(line, e.to_string()))?;
            if pattern.len() != n {
                return Err(parse_err(line, format!("pattern {p} does not have {n} gates")));
            }
            let t = parse_f64(line, t)?;
            if t < 0.0 {
                return Err(parse_err(line, "negative block time"));
            }
            patterns.push(pattern);
            times.push(t);
        }
    }
    let n_qubits = n_qubits.ok_or_else(|| parse_err(0, "missing n_qubits header"))?;
    let target_time = target_time.ok_or_else(|| parse_err(0, "missing T header"))?;
    if !(target_time > 0.0) {
        return Err(parse_err(0, "T must be positive"));
    }
    if let Some(bad) = rows.iter().find(|k| k.j >= n_qubits) {
        return Err(parse_err(0, format!("row {bad} does not fit {n_qubits} qubits")));
    }
    Ok(Schedule {
        n_qubits,
        patterns,
        times,
        target_time,
        mode: mode.ok_or_else(|| parse_err(0, "missing mode header"))?,
        rows,
    })
}
