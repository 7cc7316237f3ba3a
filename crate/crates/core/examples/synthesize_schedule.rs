// Three-qubit ZZ problem on a triangle where the source only measures two
// couplings. Compares the time-optimal and the mitigating schedules.

use daqc::blocks::build_sign_matrix;
use daqc::format::write_schedule;
use daqc::{synthesize, CouplingKey, CouplingVector, InteractionGraph, SynthesisMode};

pub fn run_example() -> daqc::Result<()> {
    let h_s = CouplingVector::from_entries(3, [(CouplingKey::zz(0, 1), 1.0), (CouplingKey::zz(0, 2), 2.0)])?;
    let h_p = CouplingVector::from_entries(3, [(CouplingKey::zz(0, 1), 0.7), (CouplingKey::zz(0, 2), -1.2)])?;
    let triangle = InteractionGraph::from_edges(3, [CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)])?;

    for mode in [SynthesisMode::RemoveZeros, SynthesisMode::MitigateZeros] {
        let schedule = synthesize(&h_p, &h_s, &triangle, 1.0, mode, 0)?;
        println!("{mode}: t_A = {:.6}", schedule.total_analog_time());
        print!("{}", write_schedule(&schedule));
        let leak = schedule.net_sign_weight(&CouplingKey::zz(1, 2));
        println!("net weight on the unmeasured (1,2) coupling: {leak:+.3e}");
        let signs = build_sign_matrix(&schedule.patterns, &triangle.edge_list())?;
        print!("{}", signs.to_csv());
        println!();
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
