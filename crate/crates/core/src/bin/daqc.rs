use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use daqc::blocks::Gate;
use daqc::bounds::{analyze, sample_defect, AnalysisInput};
use daqc::dense::{InitialState, ObservableSpec};
use daqc::format::{parse_couplings, parse_graph, parse_schedule, write_schedule};
use daqc::harness::{read_records, run_experiment, run_experiment_serial, summarize, write_records, write_summary, ExperimentConfig, TopologyKind};
use daqc::schedule::{effective_couplings, synthesize, SynthesisMode};
use daqc::{DaqcError, InteractionGraph, Result};

#[derive(Parser)]
#[command(name = "daqc", version, about = "Digital-analog schedule synthesis and calibration-error analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Remove,
    Mitigate,
}

impl From<Mode> for SynthesisMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Remove => SynthesisMode::RemoveZeros,
            Mode::Mitigate => SynthesisMode::MitigateZeros,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Topology {
    Nn,
    Random,
    Ata,
}

impl From<Topology> for TopologyKind {
    fn from(t: Topology) -> Self {
        match t {
            Topology::Nn => TopologyKind::NearestNeighbour,
            Topology::Random => TopologyKind::RandomConnected,
            Topology::Ata => TopologyKind::AllToAll,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum State {
    Zero,
    Plus,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for block times and write a schedule file.
    Synth {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        source: PathBuf,
        /// Couplings file whose listed keys form the defect support.
        #[arg(long)]
        defects: PathBuf,
        #[arg(long)]
        time: f64,
        #[arg(long, value_enum, default_value = "remove")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a defect for a schedule and report every bound.
    Analyze {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defect support; defaults to the source support plus the schedule rows.
        #[arg(long)]
        defects: Option<PathBuf>,
        /// Problem couplings; defaults to what the schedule replays on the source.
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Qubit carrying the σ_x observable.
        #[arg(long, default_value_t = 0)]
        observable_qubit: usize,
        /// Simulate the observable deviation from this initial state.
        #[arg(long, value_enum)]
        state: Option<State>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo sweep over random problems, one CSV row per trial.
    Sweep {
        #[arg(long, value_enum)]
        topology: Topology,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 10.0)]
        delta: f64,
        #[arg(long, default_value_t = 100.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, value_enum, default_value = "remove")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        edge_prob: f64,
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-group mean, median and quartiles of a sweep CSV.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| DaqcError::Validation(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth {
            problem,
            source,
            defects,
            time,
            mode,
            seed,
            out,
        } => {
            let h_p = parse_couplings(&read(&problem)?)?;
            let h_s = parse_couplings(&read(&source)?)?;
            let d = parse_graph(&read(&defects)?)?;
            let schedule = synthesize(&h_p, &h_s, &d, time, mode.into(), seed)?;
            emit(out.as_deref(), write_schedule(&schedule).as_bytes())?;
            eprintln!("{} blocks, t_A = {}", schedule.patterns.len(), schedule.total_analog_time());
        }
        Command::Analyze {
            schedule,
            source,
            delta,
            seed,
            defects,
            problem,
            observable_qubit,
            state,
            json,
        } => {
            let schedule = parse_schedule(&read(&schedule)?)?;
            let h_s = parse_couplings(&read(&source)?)?;
            let n = h_s.n_qubits();
            let d = match defects {
                Some(path) => parse_graph(&read(&path)?)?,
                None => h_s.support().union(&InteractionGraph::from_edges(n, schedule.rows.iter().copied())?)?,
            };
            let h_p = match problem {
                Some(path) => parse_couplings(&read(&path)?)?,
                None => effective_couplings(&schedule, &h_s)?.restrict(&h_s.support()),
            };
            let defect = sample_defect(&d, delta, seed)?;
            let observable = ObservableSpec::single_qubit(n, observable_qubit, Gate::X)?;
            let state = state.map(|s| match s {
                State::Zero => InitialState::AllZero,
                State::Plus => InitialState::AllPlus,
                State::Random => InitialState::RandomProduct { seed },
            });
            let report = analyze(&AnalysisInput {
                h_p: &h_p,
                h_s: &h_s,
                defect_support: &d,
                schedule: &schedule,
                h_delta: &defect.h_delta,
                delta,
                observable: &observable,
                initial_state: state.as_ref(),
                trotter_steps: 1,
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                let value = serde_json::to_value(&report).expect("report serializes");
                for (k, v) in value.as_object().expect("report is an object") {
                    println!("{k}: {v}");
                }
            }
            let violations = report.violations();
            if !violations.is_empty() {
                return Err(DaqcError::InternalConsistency(format!("bounds violated: {}", violations.join(", "))));
            }
        }
        Command::Sweep {
            topology,
            n_min,
            n_max,
            trials,
            delta,
            g,
            time,
            mode,
            seed,
            edge_prob,
            serial,
            out,
        } => {
            if n_min > n_max {
                return Err(DaqcError::Validation(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            let config = ExperimentConfig {
                extra_edge_prob: edge_prob,
                trials,
                delta,
                g,
                time,
                mode: mode.into(),
                master_seed: seed,
                ..ExperimentConfig::new(topology.into(), n_min..=n_max)
            };
            let records = if serial {
                run_experiment_serial(&config)?
            } else {
                run_experiment(&config)?
            };
            let mut buf = Vec::new();
            write_records(&records, &mut buf)?;
            emit(out.as_deref(), &buf)?;
        }
        Command::Summarize { input, out } => {
            let records = read_records(read(&input)?.as_bytes())?;
            let mut buf = Vec::new();
            write_summary(&summarize(&records), &mut buf)?;
            emit(out.as_deref(), &buf)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
