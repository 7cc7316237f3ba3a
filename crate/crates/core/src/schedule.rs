//! Schedule synthesis: from `(h_P, h_S, T)` to analog block times.
//!
//! Each row `α` of the system demands `Σ_k M[α][k] t_k = T·h_P[α]/h_S[α]`.
//! In [`SynthesisMode::RemoveZeros`] only couplings present in the source
//! are constrained. [`SynthesisMode::MitigateZeros`] additionally pins every
//! unmeasured edge of the defect support to a zero net sign, so any real
//! coupling hiding there is cancelled over the schedule.

use std::fmt;
use std::str::FromStr;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::blocks::{available_patterns, block_sign, build_sign_matrix, generate_candidate_patterns, GatePattern};
use crate::error::{DaqcError, Result};
use crate::lp::{self, LinearProgram, FEASIBILITY_TOL};
use crate::pauli::{hadamard_divide, CouplingKey, CouplingVector, IndeterminatePolicy, InteractionGraph};

/// Replay tolerance for the schedule invariants.
pub const REPLAY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthesisMode {
    #[serde(rename = "remove")]
    RemoveZeros,
    #[serde(rename = "mitigate")]
    MitigateZeros,
}

impl SynthesisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthesisMode::RemoveZeros => "remove",
            SynthesisMode::MitigateZeros => "mitigate",
        }
    }
}

impl fmt::Display for SynthesisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SynthesisMode {
    type Err = DaqcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "remove" => Ok(SynthesisMode::RemoveZeros),
            "mitigate" => Ok(SynthesisMode::MitigateZeros),
            other => Err(DaqcError::Validation(format!("unknown synthesis mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub n_qubits: usize,
    pub patterns: Vec<GatePattern>,
    pub times: Vec<f64>,
    pub target_time: f64,
    pub mode: SynthesisMode,
    /// Couplings the block times were solved for.
    pub rows: Vec<CouplingKey>,
}

impl Schedule {
    /// `t_A = ‖t‖₁`.
    pub fn total_analog_time(&self) -> f64 {
        self.times.iter().sum()
    }

    /// `Σ_k t_k·M[key][k] / T`, the net coefficient a coupling picks up.
    pub fn net_sign_weight(&self, key: &CouplingKey) -> f64 {
        self.patterns
            .iter()
            .zip(&self.times)
            .map(|(p, t)| t * f64::from(block_sign(p, key)))
            .sum::<f64>()
            / self.target_time
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&GatePattern, f64)> {
        self.patterns.iter().zip(self.times.iter().copied())
    }
}

/// Equation rows and right-hand sides for one synthesis mode.
fn assemble_rows(
    ratio: &CouplingVector,
    source_support: &InteractionGraph,
    defect_support: &InteractionGraph,
    time: f64,
    mode: SynthesisMode,
) -> (Vec<CouplingKey>, Vec<f64>) {
    let rows: Vec<CouplingKey> = match mode {
        SynthesisMode::RemoveZeros => source_support.edge_list(),
        SynthesisMode::MitigateZeros => defect_support.edge_list(),
    };
    let rhs = rows.iter().map(|k| time * ratio.get(k)).collect();
    (rows, rhs)
}

/// Synthesizes block times for simulating `h_p` for time `time` on `h_s`.
///
/// The candidate pattern set is sized for the full defect support: it starts
/// at `2·|D| + 1` patterns and doubles until the zero-pinned system over `D`
/// is feasible. Both modes then solve over that same set, so the time-optimal
/// mode is never slower than the mitigating one for the same seed.
pub fn synthesize(
    h_p: &CouplingVector,
    h_s: &CouplingVector,
    defect_support: &InteractionGraph,
    time: f64,
    mode: SynthesisMode,
    rng_seed: u64,
) -> Result<Schedule> {
    if !(time > 0.0) || !time.is_finite() {
        return Err(DaqcError::Validation(format!("target time must be positive, got {time}")));
    }
    let n = h_s.n_qubits();
    for found in [h_p.n_qubits(), defect_support.n_qubits()] {
        if found != n {
            return Err(DaqcError::DimensionMismatch { expected: n, found });
        }
    }
    let source_support = h_s.support();
    let ratio = hadamard_divide(h_p, h_s, IndeterminatePolicy::Zero)?;
    if !source_support.is_subgraph_of(defect_support) {
        let missing = source_support
            .edges()
            .find(|e| !defect_support.contains(e))
            .copied()
            .expect("non-subgraph has a missing edge");
        return Err(DaqcError::Validation(format!(
            "source coupling {missing} lies outside the declared defect support"
        )));
    }
    if defect_support.edge_count() == 0 {
        return Ok(Schedule {
            n_qubits: n,
            patterns: Vec::new(),
            times: Vec::new(),
            target_time: time,
            mode,
            rows: Vec::new(),
        });
    }

    let (full_rows, full_rhs) = assemble_rows(&ratio, &source_support, defect_support, time, SynthesisMode::MitigateZeros);
    let (rows, rhs) = assemble_rows(&ratio, &source_support, defect_support, time, mode);

    let available = available_patterns(defect_support);
    let cap = usize::try_from(available).unwrap_or(usize::MAX);
    let mut count = (2 * full_rows.len() + 1).min(cap);
    let patterns = loop {
        let patterns = generate_candidate_patterns(defect_support, count, rng_seed)?;
        let signs = build_sign_matrix(&patterns, &full_rows)?;
        let probe = lp::solve(&LinearProgram::from_sign_matrix(&signs, &full_rhs)?, FEASIBILITY_TOL)?;
        if probe.is_optimal() {
            break patterns;
        }
        if count == cap {
            return Err(DaqcError::Infeasible(format!(
                "no nonnegative schedule over all {count} patterns reaches the target"
            )));
        }
        debug!("{count} patterns infeasible, growing");
        count = count.saturating_mul(2).min(cap);
    };

    let times = if rows.is_empty() {
        vec![0.0; patterns.len()]
    } else {
        let signs = build_sign_matrix(&patterns, &rows)?;
        let solution = lp::solve(&LinearProgram::from_sign_matrix(&signs, &rhs)?, FEASIBILITY_TOL)?;
        if !solution.is_optimal() {
            return Err(DaqcError::InternalConsistency(
                "row subset infeasible although the full system is feasible".into(),
            ));
        }
        solution.times
    };

    let (patterns, times): (Vec<_>, Vec<_>) = patterns.into_iter().zip(times).filter(|(_, t)| *t > 0.0).unzip();
    let schedule = Schedule {
        n_qubits: n,
        patterns,
        times,
        target_time: time,
        mode,
        rows,
    };
    check_replay(&schedule, &ratio)?;
    Ok(schedule)
}

fn check_replay(schedule: &Schedule, ratio: &CouplingVector) -> Result<()> {
    for key in &schedule.rows {
        let got = schedule.net_sign_weight(key);
        let want = ratio.get(key);
        if (got - want).abs() > REPLAY_TOL * want.abs().max(1.0) {
            return Err(DaqcError::InternalConsistency(format!(
                "schedule replays {got} instead of {want} on {key}"
            )));
        }
    }
    Ok(())
}

/// Couplings effectively simulated when the blocks run on `h_real`.
///
/// Covers `support(h_real) ∪ rows`; rows absent from `h_real` come out as 0.
pub fn effective_couplings(schedule: &Schedule, h_real: &CouplingVector) -> Result<CouplingVector> {
    if h_real.n_qubits() != schedule.n_qubits {
        return Err(DaqcError::DimensionMismatch {
            expected: schedule.n_qubits,
            found: h_real.n_qubits(),
        });
    }
    let mut out = CouplingVector::new(schedule.n_qubits);
    for key in h_real.support().edges().chain(schedule.rows.iter()) {
        out.insert(*key, schedule.net_sign_weight(key) * h_real.get(key))?;
    }
    Ok(out)
}

/// `h_ε = h'_P − h_P` for a real device `h_S + h_δ`.
///
/// The replayed value is cross-checked against the closed forms
/// `h_P ⊙ h_δ ⊘ h_S` on the source support and `(M t / T) ⊙ h_δ` off it.
pub fn error_vector(
    schedule: &Schedule,
    h_p: &CouplingVector,
    h_s: &CouplingVector,
    h_delta: &CouplingVector,
) -> Result<CouplingVector> {
    let h_real = h_s.add(h_delta)?;
    let replayed = effective_couplings(schedule, &h_real)?;
    let eps = replayed.sub(h_p)?;

    for (key, value) in eps.iter() {
        let source = h_s.get(key);
        let closed = if source != 0.0 {
            h_p.get(key) * h_delta.get(key) / source
        } else {
            schedule.net_sign_weight(key) * h_delta.get(key)
        };
        let scale = h_real.get(key).abs().max(h_p.get(key).abs()).max(1.0);
        if (value - closed).abs() > REPLAY_TOL * scale {
            return Err(DaqcError::InternalConsistency(format!(
                "error vector at {key}: replay gives {value}, closed form gives {closed}"
            )));
        }
    }
    Ok(eps)
}
