// Evaluates the analytic bounds for one sampled defect and compares them
// with exact dense values.

use daqc::bounds::{analyze, max_allowed_delta, sample_defect, AnalysisInput, ExpectationTerms};
use daqc::{synthesize, CouplingKey, CouplingVector, Gate, InitialState, InteractionGraph, ObservableSpec, SynthesisMode};

pub fn run_example() -> daqc::Result<()> {
    let chain = [(0, 1, 1.0), (1, 2, -0.8), (2, 3, 1.3)];
    let h_s = CouplingVector::from_entries(4, chain.iter().map(|&(i, j, v)| (CouplingKey::zz(i, j), v)))?;
    let h_p = h_s.map_values(|_, v| 0.5 * v.abs());
    let defects = InteractionGraph::from_edges(
        4,
        h_s.support().edges().copied().chain([CouplingKey::zz(0, 2), CouplingKey::zz(1, 3)]),
    )?;
    let delta = 1e-3;
    let time = 0.02;
    let defect = sample_defect(&defects, delta, 17)?;
    let observable = ObservableSpec::single_qubit(4, 1, Gate::X)?;

    for mode in [SynthesisMode::RemoveZeros, SynthesisMode::MitigateZeros] {
        let schedule = synthesize(&h_p, &h_s, &defects, time, mode, 3)?;
        let report = analyze(&AnalysisInput {
            h_p: &h_p,
            h_s: &h_s,
            defect_support: &defects,
            schedule: &schedule,
            h_delta: &defect.h_delta,
            delta,
            observable: &observable,
            initial_state: Some(&InitialState::AllPlus),
            trotter_steps: 1,
        })?;
        println!("{mode}");
        println!("  ‖H_ε‖_op  exact {:.3e}  bound {:.3e}", report.exact_op_norm.unwrap(), report.op_norm_bound);
        println!("  ‖H_ε‖_F   exact {:.3e}  bound {:.3e}", report.exact_frobenius.unwrap(), report.frob_bound);
        println!(
            "  Δ_O       exact {:.3e}  bound {:.3e}  commutator {:.3e}",
            report.exact_delta_o.unwrap(),
            report.expectation_bound,
            report.commutator_bound.unwrap()
        );
        println!("  regime: small defect {}, short time {}", report.small_defect, report.short_time);
        assert!(report.violations().is_empty());
    }

    let terms = ExpectationTerms {
        supp_o: 1,
        op_norm_o: 1.0,
        deg_p: 2,
        deg_ds: 2,
        ratio_inf: 0.5,
        delta: 0.0,
        time: 1.0,
        t_a: 0.5,
    };
    println!("largest δ keeping Δ_O below 1e-2: {:.3e}", max_allowed_delta(1e-2, &terms)?);
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
