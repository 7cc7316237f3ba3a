// Coupling and schedule files as used by the `daqc` command.

use daqc::format::{parse_couplings, parse_graph, parse_schedule, write_couplings, write_schedule};
use daqc::{synthesize, SynthesisMode};

const SOURCE: &str = "\
# measured device couplings
n_qubits=3
0 1 z z 1.0
1 2 z z -2.0
";

const DEFECTS: &str = "\
n_qubits=3
0 1 z z 0
1 2 z z 0
0 2 z z 0
";

pub fn run_example() -> daqc::Result<()> {
    let h_s = parse_couplings(SOURCE)?;
    let defects = parse_graph(DEFECTS)?;
    let h_p = h_s.map_values(|_, v| v / 4.0);
    print!("{}", write_couplings(&h_p));

    let schedule = synthesize(&h_p, &h_s, &defects, 2.0, SynthesisMode::MitigateZeros, 0)?;
    let text = write_schedule(&schedule);
    print!("{text}");
    assert_eq!(parse_schedule(&text)?, schedule);
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
