//! Digital-analog schedule synthesis for two-body qubit Hamiltonians, with
//! calibration-error bounds checked against exact dense simulation.
//!
//! The usual flow is [`schedule::synthesize`] to obtain block times,
//! [`bounds::sample_defect`] and [`bounds::analyze`] to evaluate every bound
//! and its exact counterpart, and [`harness::run_experiment`] for sweeps.

// NaN-rejecting checks use `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocks;
pub mod bounds;
pub mod dense;
pub mod error;
pub mod format;
pub mod harness;
pub mod lp;
pub mod pauli;
pub mod schedule;

pub use blocks::{Gate, GatePattern, SignMatrix};
pub use bounds::{analyze, AnalysisInput, BoundReport, DefectSample};
pub use dense::{DenseHamiltonian, InitialState, ObservableSpec};
pub use error::{DaqcError, Result};
pub use harness::{ExperimentConfig, TopologyKind, TrialRecord};
pub use pauli::{CouplingKey, CouplingVector, InteractionGraph, NormOrder, PauliAxis};
pub use schedule::{synthesize, Schedule, SynthesisMode};
