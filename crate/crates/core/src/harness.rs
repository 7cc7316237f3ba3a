//! Monte Carlo sweeps over random problems, with CSV output and summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::Gate;
use crate::bounds::{analyze, sample_defect, AnalysisInput, BoundReport, DefectSample};
use crate::dense::{InitialState, ObservableSpec};
use crate::error::{DaqcError, Result};
use crate::pauli::{CouplingKey, CouplingVector, InteractionGraph};
use crate::schedule::{synthesize, Schedule, SynthesisMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyKind {
    #[serde(rename = "nn")]
    NearestNeighbour,
    #[serde(rename = "random")]
    RandomConnected,
    #[serde(rename = "ata")]
    AllToAll,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::NearestNeighbour => "nn",
            TopologyKind::RandomConnected => "random",
            TopologyKind::AllToAll => "ata",
        }
    }

    /// Defect layout paired with each topology in the standard sweeps.
    pub fn default_defects(self) -> DefectKind {
        match self {
            TopologyKind::NearestNeighbour => DefectKind::SecondNeighbour,
            TopologyKind::RandomConnected | TopologyKind::AllToAll => DefectKind::AllToAll,
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = DaqcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(TopologyKind::NearestNeighbour),
            "random" => Ok(TopologyKind::RandomConnected),
            "ata" => Ok(TopologyKind::AllToAll),
            other => Err(DaqcError::Validation(format!("unknown topology '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    /// Source edges plus every `(i, i+2)` pair.
    SecondNeighbour,
    AllToAll,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    pub n_qubits: usize,
    /// Probability of each non-chain edge for [`TopologyKind::RandomConnected`].
    pub extra_edge_prob: f64,
    pub defect_kind: DefectKind,
}

impl TopologySpec {
    pub fn new(kind: TopologyKind, n_qubits: usize) -> Self {
        Self {
            kind,
            n_qubits,
            extra_edge_prob: 0.2,
            defect_kind: kind.default_defects(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub h_p: CouplingVector,
    pub h_s: CouplingVector,
    pub defect_support: InteractionGraph,
}

fn sample_coupling(rng: &mut ChaCha8Rng, g: f64) -> f64 {
    let magnitude = rng.gen_range(g / 2.0..=1.5 * g);
    if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// Random ZZ problem and source on a shared graph, plus the defect support.
pub fn generate_problem(spec: &TopologySpec, g: f64, rng_seed: u64) -> Result<Problem> {
    let n = spec.n_qubits;
    if n < 2 {
        return Err(DaqcError::Validation(format!("need at least 2 qubits, got {n}")));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(DaqcError::Validation(format!("coupling scale must be positive, got {g}")));
    }
    if !(0.0..=1.0).contains(&spec.extra_edge_prob) {
        return Err(DaqcError::Validation(format!("edge probability {} outside [0, 1]", spec.extra_edge_prob)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let chain = (0..n - 1).map(|i| CouplingKey::zz(i, i + 1));
    let complete: Vec<CouplingKey> = (0..n).flat_map(|i| (i + 1..n).map(move |j| CouplingKey::zz(i, j))).collect();
    let edges: Vec<CouplingKey> = match spec.kind {
        TopologyKind::NearestNeighbour => chain.collect(),
        TopologyKind::AllToAll => complete.clone(),
        TopologyKind::RandomConnected => {
            let mut edges: Vec<CouplingKey> = chain.collect();
            for key in &complete {
                if key.j > key.i + 1 && rng.gen_bool(spec.extra_edge_prob) {
                    edges.push(*key);
                }
            }
            edges.sort();
            edges
        }
    };
    let mut h_p = CouplingVector::new(n);
    let mut h_s = CouplingVector::new(n);
    for key in &edges {
        h_p.insert(*key, sample_coupling(&mut rng, g))?;
    }
    for key in &edges {
        h_s.insert(*key, sample_coupling(&mut rng, g))?;
    }
    let defect_support = match spec.defect_kind {
        DefectKind::AllToAll => InteractionGraph::from_edges(n, complete)?,
        DefectKind::SecondNeighbour => {
            let second = (0..n.saturating_sub(2)).map(|i| CouplingKey::zz(i, i + 2));
            InteractionGraph::from_edges(n, edges.iter().copied().chain(second))?
        }
    };
    Ok(Problem { h_p, h_s, defect_support })
}

/// Exact observable deviation request for each trial.
#[derive(Debug, Clone)]
pub struct ObservableRequest {
    pub qubit: usize,
    pub gate: Gate,
    pub state: InitialState,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub topology: TopologyKind,
    pub extra_edge_prob: f64,
    pub defect_kind: DefectKind,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub time: f64,
    pub g: f64,
    pub delta: f64,
    pub mode: SynthesisMode,
    pub master_seed: u64,
    /// Expectation bounds always use this observable, defaulting to `σ_x` on
    /// qubit 0; `Δ_O` is simulated only when it is set.
    pub observable: Option<ObservableRequest>,
    pub trotter_steps: usize,
}

impl ExperimentConfig {
    pub fn new(topology: TopologyKind, n_values: impl IntoIterator<Item = usize>) -> Self {
        Self {
            topology,
            extra_edge_prob: 0.2,
            defect_kind: topology.default_defects(),
            n_values: n_values.into_iter().collect(),
            trials: 500,
            time: 1.0,
            g: 100.0,
            delta: 10.0,
            mode: SynthesisMode::RemoveZeros,
            master_seed: 0,
            observable: None,
            trotter_steps: 1,
        }
    }

    fn topology_spec(&self, n: usize) -> TopologySpec {
        TopologySpec {
            kind: self.topology,
            n_qubits: n,
            extra_edge_prob: self.extra_edge_prob,
            defect_kind: self.defect_kind,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at size `n`.
pub fn trial_seed(master_seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ n as u64) ^ trial as u64)
}

fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub topology: TopologyKind,
    pub mode: SynthesisMode,
    pub seed: u64,
    #[serde(rename = "t_A")]
    pub t_a: f64,
    pub exact_op_norm: Option<f64>,
    pub bound_op_norm: f64,
    pub exact_frob: Option<f64>,
    pub frob_bound: f64,
    pub expectation_bound: f64,
    pub expectation_bound_mitigated: f64,
    #[serde(rename = "exact_delta_O")]
    pub exact_delta_o: Option<f64>,
    pub small_defect: bool,
    pub short_time: bool,
}

pub const CSV_HEADER: &str = "trial_id,N,topology,mode,seed,t_A,exact_op_norm,bound_op_norm,exact_frob,frob_bound,expectation_bound,expectation_bound_mitigated,exact_delta_O,small_defect,short_time";

/// Everything computed for one trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial_id: usize,
    pub n: usize,
    pub seed: u64,
    pub problem: Problem,
    pub schedule: Schedule,
    pub defect: DefectSample,
    pub report: BoundReport,
}

impl TrialOutcome {
    pub fn record(&self, topology: TopologyKind) -> TrialRecord {
        let r = &self.report;
        TrialRecord {
            trial_id: self.trial_id,
            n: self.n,
            topology,
            mode: self.schedule.mode,
            seed: self.seed,
            t_a: r.t_a,
            exact_op_norm: r.exact_op_norm,
            bound_op_norm: r.op_norm_bound,
            exact_frob: r.exact_frobenius,
            frob_bound: r.frob_bound,
            expectation_bound: r.expectation_bound,
            expectation_bound_mitigated: r.expectation_bound_mitigated,
            exact_delta_o: r.exact_delta_o,
            small_defect: r.small_defect,
            short_time: r.short_time,
        }
    }
}

/// One trial of `config` at size `n`. Failures carry the trial seed.
pub fn run_trial_outcome(config: &ExperimentConfig, n: usize, trial: usize) -> Result<TrialOutcome> {
    let seed = trial_seed(config.master_seed, n, trial);
    seeded_trial(config, n, trial, seed).map_err(|e| DaqcError::TrialFailed {
        seed,
        source: Box::new(e),
    })
}

pub fn run_trial(config: &ExperimentConfig, n: usize, trial: usize) -> Result<TrialRecord> {
    Ok(run_trial_outcome(config, n, trial)?.record(config.topology))
}

fn seeded_trial(config: &ExperimentConfig, n: usize, trial: usize, seed: u64) -> Result<TrialOutcome> {
    let problem = generate_problem(&config.topology_spec(n), config.g, sub_seed(seed, 1))?;
    let schedule = synthesize(
        &problem.h_p,
        &problem.h_s,
        &problem.defect_support,
        config.time,
        config.mode,
        sub_seed(seed, 2),
    )?;
    let defect = sample_defect(&problem.defect_support, config.delta, sub_seed(seed, 3))?;
    let (observable, state) = match &config.observable {
        Some(req) => (ObservableSpec::single_qubit(n, req.qubit, req.gate)?, Some(&req.state)),
        None => (ObservableSpec::single_qubit(n, 0, Gate::X)?, None),
    };
    let report = analyze(&AnalysisInput {
        h_p: &problem.h_p,
        h_s: &problem.h_s,
        defect_support: &problem.defect_support,
        schedule: &schedule,
        h_delta: &defect.h_delta,
        delta: config.delta,
        observable: &observable,
        initial_state: state,
        trotter_steps: config.trotter_steps,
    })?;
    Ok(TrialOutcome {
        trial_id: trial,
        n,
        seed,
        problem,
        schedule,
        defect,
        report,
    })
}

fn jobs(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect()
}

fn sorted(mut records: Vec<TrialRecord>) -> Vec<TrialRecord> {
    records.sort_by_key(|r| (r.n, r.trial_id));
    records
}

/// Full outcomes of every trial, computed in parallel and sorted by `(N, trial_id)`.
pub fn run_experiment_outcomes(config: &ExperimentConfig) -> Result<Vec<TrialOutcome>> {
    let mut outcomes = jobs(config)
        .into_par_iter()
        .map(|(n, t)| run_trial_outcome(config, n, t))
        .collect::<Result<Vec<_>>>()?;
    outcomes.sort_by_key(|o| (o.n, o.trial_id));
    Ok(outcomes)
}

/// Runs every trial in parallel. Output is sorted by `(N, trial_id)`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    let records = jobs(config)
        .into_par_iter()
        .map(|(n, t)| run_trial(config, n, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

pub fn run_experiment_serial(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    let records = jobs(config)
        .into_iter()
        .map(|(n, t)| run_trial(config, n, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

pub fn write_records<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(DaqcError::Validation(format!("unexpected CSV header '{}'", header.join(","))));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(DaqcError::from))
        .collect()
}

/// Mean, median and quartiles of one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

/// Quantile by linear interpolation between order statistics of `sorted`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl ColumnStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: quantile(&v, 0.5),
            q25: quantile(&v, 0.25),
            q75: quantile(&v, 0.75),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub topology: TopologyKind,
    pub mode: SynthesisMode,
    pub count: usize,
    pub exact_op_norm: Option<ColumnStats>,
    pub bound_op_norm: ColumnStats,
    pub t_a: ColumnStats,
}

/// Statistics per `(N, topology, mode)` group.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, TopologyKind, SynthesisMode), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.topology, r.mode)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n, topology, mode), rows)| {
            let exact: Vec<f64> = rows.iter().filter_map(|r| r.exact_op_norm).collect();
            if exact.is_empty() {
                warn!("no exact operator norms for N={n} {topology} {mode}");
            }
            let column = |f: fn(&TrialRecord) -> f64| {
                ColumnStats::from_values(&rows.iter().map(|r| f(r)).collect::<Vec<_>>()).expect("groups are nonempty")
            };
            SummaryRow {
                n,
                topology,
                mode,
                count: rows.len(),
                exact_op_norm: ColumnStats::from_values(&exact),
                bound_op_norm: column(|r| r.bound_op_norm),
                t_a: column(|r| r.t_a),
            }
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "N,topology,mode,count,exact_op_norm_mean,exact_op_norm_median,exact_op_norm_q25,exact_op_norm_q75,bound_op_norm_mean,bound_op_norm_median,bound_op_norm_q25,bound_op_norm_q75,t_A_mean,t_A_median,t_A_q25,t_A_q75";

pub fn write_summary<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(SUMMARY_HEADER.split(','))?;
    for row in rows {
        let mut fields = vec![
            row.n.to_string(),
            row.topology.to_string(),
            row.mode.to_string(),
            row.count.to_string(),
        ];
        let stats = |s: Option<ColumnStats>| match s {
            Some(s) => [s.mean, s.median, s.q25, s.q75].map(|v| v.to_string()),
            None => Default::default(),
        };
        fields.extend(stats(row.exact_op_norm));
        fields.extend(stats(Some(row.bound_op_norm)));
        fields.extend(stats(Some(row.t_a)));
        writer.write_record(&fields)?;
    }
    writer.flush()?;
    Ok(())
}
