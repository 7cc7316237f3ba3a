// Small sweep over random connected problems with per-size summaries.

use daqc::harness::{run_experiment, summarize, write_records, write_summary, ExperimentConfig};
use daqc::{SynthesisMode, TopologyKind};

pub fn run_example() -> daqc::Result<()> {
    for mode in [SynthesisMode::RemoveZeros, SynthesisMode::MitigateZeros] {
        let config = ExperimentConfig {
            trials: 20,
            mode,
            master_seed: 99,
            ..ExperimentConfig::new(TopologyKind::RandomConnected, 3..=5)
        };
        let records = run_experiment(&config)?;
        let sound = records.iter().all(|r| r.exact_op_norm.unwrap() <= r.bound_op_norm);
        println!("{mode}: {} trials, every bound holds: {sound}", records.len());

        let mut summary = Vec::new();
        write_summary(&summarize(&records), &mut summary)?;
        print!("{}", String::from_utf8_lossy(&summary));

        let mut csv = Vec::new();
        write_records(&records[..2], &mut csv)?;
        print!("{}", String::from_utf8_lossy(&csv));
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
