//! Defect sampling and the analytic error bounds.
//!
//! Ratios `h_P ⊘ h_S` are always taken over the source support `S`.
//! `e_ds` is the number of edges in `D \ S` and `deg_*` are multigraph
//! degrees.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dense::{self, InitialState, ObservableSpec, DEFAULT_QUBIT_CAP};
use crate::error::{DaqcError, Result};
use crate::pauli::{degree, graph_difference, hadamard_divide, p_norm, CouplingVector, IndeterminatePolicy, InteractionGraph, NormOrder};
use crate::schedule::{error_vector, Schedule, SynthesisMode, REPLAY_TOL};

pub const SMALL_DEFECT_RATIO: f64 = 1e-2;
pub const SHORT_TIME_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct DefectSample {
    pub h_delta: CouplingVector,
    pub delta: f64,
    pub rng_seed: u64,
}

/// Uniform `[−δ, δ]` couplings on every edge of `support`.
pub fn sample_defect(support: &InteractionGraph, delta: f64, rng_seed: u64) -> Result<DefectSample> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(DaqcError::Validation(format!("defect scale must be positive, got {delta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut h_delta = CouplingVector::new(support.n_qubits());
    for key in support.edges() {
        h_delta.insert(*key, rng.gen_range(-delta..=delta))?;
    }
    Ok(DefectSample { h_delta, delta, rng_seed })
}

/// `h_P ⊘ h_S` restricted to the support of `h_S`.
pub fn coupling_ratio(h_p: &CouplingVector, h_s: &CouplingVector) -> Result<CouplingVector> {
    Ok(hadamard_divide(h_p, h_s, IndeterminatePolicy::Zero)?.restrict(&h_s.support()))
}

fn ratio_norm(h_p: &CouplingVector, h_s: &CouplingVector, order: NormOrder) -> Result<f64> {
    p_norm(&coupling_ratio(h_p, h_s)?.values(), order)
}

fn check_times(time: f64, t_a: f64, delta: f64) -> Result<()> {
    if !(time > 0.0) || !time.is_finite() {
        return Err(DaqcError::Validation(format!("T must be positive, got {time}")));
    }
    if !t_a.is_finite() || !delta.is_finite() {
        return Err(DaqcError::NonFinite("bound input".into()));
    }
    Ok(())
}

/// `δ·‖h_P ⊘ h_S‖_p + δ·(t_A/T)·e_ds^{1/p}`.
pub fn p_norm_error_bound(
    h_p: &CouplingVector,
    h_s: &CouplingVector,
    delta: f64,
    time: f64,
    t_a: f64,
    e_ds: usize,
    p: NormOrder,
) -> Result<f64> {
    check_times(time, t_a, delta)?;
    let count_norm = match p {
        NormOrder::NegInf => {
            return Err(DaqcError::UndefinedNorm("the bound needs a proper p-norm".into()));
        }
        NormOrder::Inf => f64::from(u8::from(e_ds > 0)),
        NormOrder::P(p) => (e_ds as f64).powf(1.0 / p),
    };
    Ok(delta * ratio_norm(h_p, h_s, p)? + delta * (t_a / time) * count_norm)
}

/// Operator-norm bound on `H_ε`; the 1-norm case of [`p_norm_error_bound`].
pub fn op_norm_error_bound(h_p: &CouplingVector, h_s: &CouplingVector, delta: f64, time: f64, t_a: f64, e_ds: usize) -> Result<f64> {
    p_norm_error_bound(h_p, h_s, delta, time, t_a, e_ds, NormOrder::ONE)
}

/// Multiplier `f` in `‖H_ε‖_F ≤ f·‖H_δ‖_F`.
pub fn frobenius_stability_factor(h_p: &CouplingVector, h_s: &CouplingVector, t_a: f64, time: f64, e_ds: usize) -> Result<f64> {
    check_times(time, t_a, 0.0)?;
    let r = ratio_norm(h_p, h_s, NormOrder::TWO)?;
    Ok((r * r + e_ds as f64 * (t_a / time).powi(2)).sqrt())
}

/// Inputs of the expectation-value bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationTerms {
    pub supp_o: usize,
    pub op_norm_o: f64,
    pub deg_p: usize,
    pub deg_ds: usize,
    pub ratio_inf: f64,
    pub delta: f64,
    pub time: f64,
    pub t_a: f64,
}

impl ExpectationTerms {
    fn first_term(&self) -> f64 {
        6.0 * self.time * self.delta * self.supp_o as f64 * self.deg_p as f64 * self.op_norm_o * self.ratio_inf
    }

    fn second_term(&self) -> f64 {
        6.0 * self.t_a * self.delta * self.supp_o as f64 * self.deg_ds as f64 * self.op_norm_o
    }
}

/// `6Tδ·supp(O)·deg(P)·‖O‖·‖h_P⊘h_S‖_∞ + 6t_Aδ·supp(O)·deg(D\S)·‖O‖`.
pub fn expectation_error_bound(terms: &ExpectationTerms) -> f64 {
    terms.first_term() + terms.second_term()
}

/// The expectation bound once unmeasured couplings are cancelled.
pub fn mitigated_expectation_bound(terms: &ExpectationTerms) -> f64 {
    terms.first_term()
}

/// Largest `δ` keeping [`expectation_error_bound`] at or below `delta_max_error`.
/// `terms.delta` is ignored.
pub fn max_allowed_delta(delta_max_error: f64, terms: &ExpectationTerms) -> Result<f64> {
    let denom = 6.0
        * terms.supp_o as f64
        * terms.op_norm_o
        * (terms.time * terms.deg_p as f64 * terms.ratio_inf + terms.t_a * terms.deg_ds as f64);
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(DaqcError::DegenerateInput(format!("denominator {denom} is not positive")));
    }
    Ok(delta_max_error / denom)
}

/// Everything needed to evaluate the bounds for one schedule and defect.
#[derive(Debug, Clone)]
pub struct AnalysisInput<'a> {
    pub h_p: &'a CouplingVector,
    pub h_s: &'a CouplingVector,
    pub defect_support: &'a InteractionGraph,
    pub schedule: &'a Schedule,
    pub h_delta: &'a CouplingVector,
    pub delta: f64,
    pub observable: &'a ObservableSpec,
    /// When set, the observable deviation is simulated exactly from this state.
    pub initial_state: Option<&'a InitialState>,
    pub trotter_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n_qubits: usize,
    pub mode: SynthesisMode,
    pub delta: f64,
    pub time: f64,
    pub t_a: f64,
    pub source_edges: usize,
    pub defect_edges: usize,
    /// `|E_{D\S}|` as it enters the bounds; zero for mitigated schedules.
    pub e_ds: usize,
    pub deg_p: usize,
    pub deg_ds: usize,
    pub ratio_norm_1: f64,
    pub ratio_norm_2: f64,
    pub ratio_norm_inf: f64,
    pub p_norm_bounds: BTreeMap<String, f64>,
    pub op_norm_bound: f64,
    pub op_norm_first_term: f64,
    pub frobenius_factor: f64,
    pub defect_frobenius: f64,
    pub frob_bound: f64,
    pub observable_support: usize,
    pub observable_norm: f64,
    pub expectation_bound: f64,
    pub expectation_bound_mitigated: f64,
    /// `T·‖[H_ε, O]‖_op`, reported when every Hamiltonian involved is ZZ.
    pub commutator_bound: Option<f64>,
    pub exact_op_norm: Option<f64>,
    pub exact_frobenius: Option<f64>,
    pub exact_delta_o: Option<f64>,
    pub small_defect: bool,
    pub short_time: bool,
}

impl BoundReport {
    /// Names of the inequalities this report violates.
    pub fn violations(&self) -> Vec<&'static str> {
        let slack = |bound: f64| bound * 1e-9 + 1e-12;
        let mut out = Vec::new();
        if let Some(e) = self.exact_op_norm {
            if e > self.op_norm_bound + slack(self.op_norm_bound) {
                out.push("operator norm");
            }
        }
        if let Some(e) = self.exact_frobenius {
            if e > self.frob_bound + slack(self.frob_bound) {
                out.push("frobenius");
            }
        }
        if let Some(d) = self.exact_delta_o {
            if self.small_defect && self.short_time && d > self.expectation_bound + slack(self.expectation_bound) {
                out.push("expectation");
            }
            if let Some(c) = self.commutator_bound {
                if d > c + slack(c) {
                    out.push("commutator");
                }
            }
        }
        out
    }
}

fn p_label(p: NormOrder) -> String {
    p.to_string()
}

/// Evaluates every bound and, within the dense cap, the exact counterparts.
pub fn analyze(input: &AnalysisInput<'_>) -> Result<BoundReport> {
    let AnalysisInput {
        h_p,
        h_s,
        defect_support,
        schedule,
        h_delta,
        delta,
        observable,
        initial_state,
        trotter_steps,
    } = *input;
    let n = h_s.n_qubits();
    for found in [h_p.n_qubits(), defect_support.n_qubits(), schedule.n_qubits, h_delta.n_qubits(), observable.n_qubits()] {
        if found != n {
            return Err(DaqcError::DimensionMismatch { expected: n, found });
        }
    }
    if !(delta >= 0.0) {
        return Err(DaqcError::Validation(format!("defect scale must be nonnegative, got {delta}")));
    }
    if let Some(key) = h_delta.support().edges().find(|k| !defect_support.contains(k)) {
        return Err(DaqcError::Validation(format!("defect coupling {key} lies outside the defect support")));
    }
    let time = schedule.target_time;
    let t_a = schedule.total_analog_time();
    let source = h_s.support();
    let unmeasured = graph_difference(defect_support, &source)?;

    let (e_ds, deg_ds) = match schedule.mode {
        SynthesisMode::RemoveZeros => (unmeasured.edge_count(), degree(&unmeasured)),
        SynthesisMode::MitigateZeros => {
            for key in unmeasured.edges() {
                let w = schedule.net_sign_weight(key);
                if w.abs() > REPLAY_TOL {
                    return Err(DaqcError::InternalConsistency(format!(
                        "mitigated schedule leaves net weight {w} on {key}"
                    )));
                }
            }
            (0, 0)
        }
    };

    let ratio = coupling_ratio(h_p, h_s)?.values();
    let ratio_norm_1 = p_norm(&ratio, NormOrder::ONE)?;
    let ratio_norm_2 = p_norm(&ratio, NormOrder::TWO)?;
    let ratio_norm_inf = p_norm(&ratio, NormOrder::Inf)?;
    let mut p_norm_bounds = BTreeMap::new();
    for p in [NormOrder::ONE, NormOrder::TWO, NormOrder::Inf] {
        p_norm_bounds.insert(p_label(p), p_norm_error_bound(h_p, h_s, delta, time, t_a, e_ds, p)?);
    }
    let op_norm_bound = op_norm_error_bound(h_p, h_s, delta, time, t_a, e_ds)?;
    let frobenius_factor = frobenius_stability_factor(h_p, h_s, t_a, time, e_ds)?;

    let terms = ExpectationTerms {
        supp_o: observable.support_size(),
        op_norm_o: observable.op_norm(),
        deg_p: degree(&h_p.support()),
        deg_ds,
        ratio_inf: ratio_norm_inf,
        delta,
        time,
        t_a,
    };

    let eps = error_vector(schedule, h_p, h_s, h_delta)?;
    let within_cap = n <= DEFAULT_QUBIT_CAP;
    let half_dim = 2f64.powf(n as f64 / 2.0);
    let (defect_frobenius, exact_op_norm, exact_frobenius, source_op_norm) = if within_cap {
        let eps_dense = dense::build_dense(&eps)?;
        (
            dense::frobenius_norm(&dense::build_dense(h_delta)?),
            Some(dense::operator_norm(&eps_dense)?),
            Some(dense::frobenius_norm(&eps_dense)),
            dense::operator_norm(&dense::build_dense(h_s)?)?,
        )
    } else {
        (
            half_dim * h_delta.norm(NormOrder::TWO)?,
            None,
            None,
            h_s.norm(NormOrder::ONE)?,
        )
    };

    let h_real = h_s.add(h_delta)?;
    let all_zz = h_p.is_zz_only() && h_real.is_zz_only();
    let commutator_bound = if within_cap && all_zz {
        Some(time * dense::commutator_norm(&dense::build_dense(&eps)?, observable)?)
    } else {
        None
    };
    let exact_delta_o = match initial_state {
        Some(state) if within_cap => Some(dense::expectation_deviation(
            h_p,
            schedule,
            &h_real,
            state,
            observable,
            time,
            trotter_steps,
        )?),
        _ => None,
    };

    let small_defect = match h_s.support().edge_count() {
        0 => false,
        _ => delta < SMALL_DEFECT_RATIO * h_s.restrict(&source).norm(NormOrder::NegInf)?,
    };

    Ok(BoundReport {
        n_qubits: n,
        mode: schedule.mode,
        delta,
        time,
        t_a,
        source_edges: source.edge_count(),
        defect_edges: defect_support.edge_count(),
        e_ds,
        deg_p: terms.deg_p,
        deg_ds,
        ratio_norm_1,
        ratio_norm_2,
        ratio_norm_inf,
        p_norm_bounds,
        op_norm_bound,
        op_norm_first_term: delta * ratio_norm_1,
        frobenius_factor,
        defect_frobenius,
        frob_bound: frobenius_factor * defect_frobenius,
        observable_support: terms.supp_o,
        observable_norm: terms.op_norm_o,
        expectation_bound: expectation_error_bound(&terms),
        expectation_bound_mitigated: mitigated_expectation_bound(&terms),
        commutator_bound,
        exact_op_norm,
        exact_frobenius,
        exact_delta_o,
        small_defect,
        short_time: time * source_op_norm < SHORT_TIME_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::Gate;
    use crate::pauli::CouplingKey;
    use crate::schedule::synthesize;

    fn zz(n: usize, entries: &[((usize, usize), f64)]) -> CouplingVector {
        CouplingVector::from_entries(n, entries.iter().map(|&((i, j), v)| (CouplingKey::zz(i, j), v))).unwrap()
    }

    fn triangle() -> InteractionGraph {
        InteractionGraph::from_edges(3, [CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)]).unwrap()
    }

    fn terms() -> ExpectationTerms {
        ExpectationTerms {
            supp_o: 1,
            op_norm_o: 1.0,
            deg_p: 2,
            deg_ds: 0,
            ratio_inf: 1.0,
            delta: 0.01,
            time: 1.0,
            t_a: 1.0,
        }
    }

    #[test]
    fn defect_samples_stay_in_range() {
        let s = sample_defect(&triangle(), 10.0, 7).unwrap();
        assert_eq!(s.h_delta.len(), 3);
        assert_eq!(s.h_delta.declared_support(), triangle());
        assert!(s.h_delta.values().iter().all(|v| v.abs() <= 10.0));
        assert_eq!(s, sample_defect(&triangle(), 10.0, 7).unwrap());
        assert_ne!(s, sample_defect(&triangle(), 10.0, 8).unwrap());
        assert!(sample_defect(&triangle(), 0.0, 7).is_err());
    }

    #[test]
    fn p_norm_bound_examples() {
        // ‖h_P⊘h_S‖₁ = 2 over a two-edge source.
        let h_s = zz(3, &[((0, 1), 1.0), ((1, 2), 1.0)]);
        let h_p = h_s.clone();
        let b = p_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.0, 1, NormOrder::ONE).unwrap();
        assert!((b - 0.3).abs() < 1e-15);
        assert_eq!(op_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.0, 1).unwrap(), b);
        assert_eq!(p_norm_error_bound(&h_p, &h_s, 0.0, 1.0, 1.0, 1, NormOrder::TWO).unwrap(), 0.0);
        let first = p_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 3.0, 0, NormOrder::TWO).unwrap();
        assert!((first - 0.1 * 2f64.sqrt()).abs() < 1e-15);
        let inf = p_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 2.0, 4, NormOrder::Inf).unwrap();
        assert!((inf - 0.3).abs() < 1e-15);
        assert!(matches!(
            p_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.0, 1, NormOrder::NegInf),
            Err(DaqcError::UndefinedNorm(_))
        ));
        assert!(p_norm_error_bound(&h_p, &h_s, 0.1, 0.0, 1.0, 1, NormOrder::ONE).is_err());
    }

    #[test]
    fn frobenius_factor_examples() {
        let one = zz(3, &[((0, 1), 2.0)]);
        let half = zz(3, &[((0, 1), -1.0)]);
        assert_eq!(frobenius_stability_factor(&half, &one, 1.0, 1.0, 0).unwrap(), 0.5);
        let h_s = zz(4, &[((0, 1), 2.0), ((1, 2), 4.0), ((2, 3), 1.0)]);
        let h_p = h_s.scale(0.3);
        let f = frobenius_stability_factor(&h_p, &h_s, 1.0, 1.0, 0).unwrap();
        assert!((f - 0.3 * 3f64.sqrt()).abs() < 1e-15);
        // Two source couplings: the factor is the root of max² + min².
        let h_s = zz(3, &[((0, 1), 1.0), ((0, 2), 2.0)]);
        let h_p = zz(3, &[((0, 1), 0.5), ((0, 2), -3.0)]);
        let f = frobenius_stability_factor(&h_p, &h_s, 2.0, 1.0, 0).unwrap();
        assert!((f - (1.5f64.powi(2) + 0.5f64.powi(2)).sqrt()).abs() < 1e-15);
        let with_ds = frobenius_stability_factor(&h_p, &h_s, 2.0, 1.0, 1).unwrap();
        assert!((with_ds - (f * f + 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn expectation_bound_examples() {
        let t = terms();
        assert!((mitigated_expectation_bound(&t) - 0.12).abs() < 1e-15);
        assert_eq!(expectation_error_bound(&t), mitigated_expectation_bound(&t));
        let with_ds = ExpectationTerms { deg_ds: 2, ..t };
        assert!((expectation_error_bound(&with_ds) - 0.24).abs() < 1e-15);
        assert_eq!(mitigated_expectation_bound(&with_ds), mitigated_expectation_bound(&t));
        assert_eq!(expectation_error_bound(&ExpectationTerms { delta: 0.0, ..with_ds }), 0.0);
    }

    #[test]
    fn expectation_bound_special_layouts() {
        // 2D lattice with a single-qubit observable: deg = 4 splits over rows and columns.
        let (r, c, delta, time) = (0.7, 1.3, 0.02, 0.5);
        let row = ExpectationTerms {
            supp_o: 1,
            op_norm_o: 2.0,
            deg_p: 4,
            deg_ds: 0,
            ratio_inf: r,
            delta,
            time,
            t_a: 0.0,
        };
        let col = ExpectationTerms { ratio_inf: c, ..row };
        let summed = mitigated_expectation_bound(&row) + mitigated_expectation_bound(&col);
        assert!((summed - 24.0 * time * delta * (r + c) * 2.0).abs() < 1e-12);

        // 1D chain, t_A = T·r_inf, deg(P) = deg(D\S) = 2.
        let s = 3;
        let chain = ExpectationTerms {
            supp_o: s,
            op_norm_o: 1.0,
            deg_p: 2,
            deg_ds: 2,
            ratio_inf: r,
            delta,
            time,
            t_a: time * r,
        };
        let expected = 6.0 * delta * time * (s as f64 * 2.0 + 2.0 * s as f64) * r;
        assert!((expectation_error_bound(&chain) - expected).abs() < 1e-12);
    }

    #[test]
    fn max_allowed_delta_inverts_the_bound() {
        let t = ExpectationTerms { deg_p: 1, ..terms() };
        assert!((max_allowed_delta(0.6, &t).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(max_allowed_delta(0.0, &t).unwrap(), 0.0);
        let general = ExpectationTerms {
            supp_o: 2,
            op_norm_o: 1.5,
            deg_p: 3,
            deg_ds: 2,
            ratio_inf: 0.8,
            delta: 0.0,
            time: 0.7,
            t_a: 1.9,
        };
        let d = max_allowed_delta(0.37, &general).unwrap();
        assert!((expectation_error_bound(&ExpectationTerms { delta: d, ..general }) - 0.37).abs() < 1e-9);
        assert!(matches!(
            max_allowed_delta(1.0, &ExpectationTerms { supp_o: 0, ..general }),
            Err(DaqcError::DegenerateInput(_))
        ));
    }

    #[test]
    fn bounds_are_monotone() {
        let h_s = zz(3, &[((0, 1), 1.0), ((1, 2), -2.0)]);
        let h_p = zz(3, &[((0, 1), 0.4), ((1, 2), 1.0)]);
        let base = op_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.0, 1).unwrap();
        assert!(op_norm_error_bound(&h_p, &h_s, 0.2, 1.0, 1.0, 1).unwrap() > base);
        assert!(op_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.5, 1).unwrap() > base);
        assert!(op_norm_error_bound(&h_p, &h_s, 0.1, 1.0, 1.0, 2).unwrap() > base);
        let t = ExpectationTerms { deg_ds: 1, ..terms() };
        let b = expectation_error_bound(&t);
        for bigger in [
            ExpectationTerms { delta: 0.02, ..t },
            ExpectationTerms { t_a: 2.0, ..t },
            ExpectationTerms { deg_p: 3, ..t },
            ExpectationTerms { deg_ds: 2, ..t },
            ExpectationTerms { supp_o: 2, ..t },
        ] {
            assert!(expectation_error_bound(&bigger) > b);
        }
    }

    #[test]
    fn analysis_of_the_three_qubit_example() {
        let h = zz(3, &[((0, 1), 1.0), ((0, 2), 1.0)]);
        let observable = ObservableSpec::single_qubit(3, 0, Gate::X).unwrap();
        let defect = sample_defect(&triangle(), 0.1, 3).unwrap();
        let state = InitialState::AllPlus;
        for mode in [SynthesisMode::RemoveZeros, SynthesisMode::MitigateZeros] {
            let schedule = synthesize(&h, &h, &triangle(), 1.0, mode, 11).unwrap();
            let report = analyze(&AnalysisInput {
                h_p: &h,
                h_s: &h,
                defect_support: &triangle(),
                schedule: &schedule,
                h_delta: &defect.h_delta,
                delta: 0.1,
                observable: &observable,
                initial_state: Some(&state),
                trotter_steps: 1,
            })
            .unwrap();
            assert!(report.violations().is_empty(), "{report:?}");
            assert_eq!(report.deg_p, 2);
            match mode {
                SynthesisMode::RemoveZeros => {
                    assert_eq!(report.e_ds, 1);
                    assert!((report.op_norm_bound - 0.3).abs() < 1e-12);
                }
                SynthesisMode::MitigateZeros => {
                    assert_eq!(report.e_ds, 0);
                    assert_eq!(report.op_norm_bound, report.op_norm_first_term);
                    assert_eq!(report.expectation_bound, report.expectation_bound_mitigated);
                }
            }
            assert!(report.commutator_bound.is_some());
            assert!(report.exact_delta_o.unwrap() <= report.commutator_bound.unwrap() + 1e-12);
            let json = serde_json::to_string(&report).unwrap();
            assert!(json.contains("\"mode\":\"") && json.contains("op_norm_bound"));
        }
    }

    #[test]
    fn analysis_rejects_foreign_defects() {
        let h = zz(3, &[((0, 1), 1.0)]);
        let d = h.support();
        let schedule = synthesize(&h, &h, &d, 1.0, SynthesisMode::RemoveZeros, 0).unwrap();
        let observable = ObservableSpec::single_qubit(3, 0, Gate::X).unwrap();
        let stray = zz(3, &[((1, 2), 0.1)]);
        let input = AnalysisInput {
            h_p: &h,
            h_s: &h,
            defect_support: &d,
            schedule: &schedule,
            h_delta: &stray,
            delta: 0.1,
            observable: &observable,
            initial_state: None,
            trotter_steps: 1,
        };
        assert!(matches!(analyze(&input), Err(DaqcError::Validation(_))));
    }
}
