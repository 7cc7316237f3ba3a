// Replays a schedule on a dense simulator. For ZZ couplings the replay is
// exact; with mixed axes the first-order product formula converges in `q`.

use daqc::dense::{build_dense, evolution_operator, operator_distance, operator_norm, replay_unitary};
use daqc::schedule::effective_couplings;
use daqc::{synthesize, CouplingKey, CouplingVector, PauliAxis, SynthesisMode};

pub fn run_example() -> daqc::Result<()> {
    let zz = CouplingVector::from_entries(
        4,
        [(CouplingKey::zz(0, 1), 1.0), (CouplingKey::zz(1, 2), 1.5), (CouplingKey::zz(2, 3), -0.7), (CouplingKey::zz(0, 3), 0.9)],
    )?;
    let target = zz.map_values(|k, v| if k.i == 0 { -v } else { 0.3 * v });
    let schedule = synthesize(&target, &zz, &zz.support(), 1.0, SynthesisMode::RemoveZeros, 1)?;
    let exact = evolution_operator(&build_dense(&target)?, 1.0);
    let replay = replay_unitary(&schedule, &zz, 1)?;
    println!("ZZ replay distance from exp(-iTH_P): {:.2e}", operator_distance(&replay, &exact));
    println!("‖H_P‖_op = {:.4}", operator_norm(&build_dense(&target)?)?);

    let xx = CouplingKey::new(0, 1, PauliAxis::X, PauliAxis::X)?;
    let mixed = CouplingVector::from_entries(3, [(xx, 1.0), (CouplingKey::zz(0, 1), 0.6), (CouplingKey::zz(1, 2), 1.1)])?;
    let target = CouplingVector::from_entries(3, [(xx, -0.5), (CouplingKey::zz(0, 1), 0.3), (CouplingKey::zz(1, 2), 0.8)])?;
    let schedule = synthesize(&target, &mixed, &mixed.support(), 1.0, SynthesisMode::RemoveZeros, 2)?;
    let ideal = evolution_operator(&build_dense(&effective_couplings(&schedule, &mixed)?)?, 1.0);
    for q in [1, 2, 4, 8, 16] {
        let u = replay_unitary(&schedule, &mixed, q)?;
        println!("mixed axes, q = {q:2}: distance {:.3e}", operator_distance(&u, &ideal));
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
