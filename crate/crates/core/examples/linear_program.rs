// Minimum-total-time LP solved by simplex and by vertex enumeration.

use daqc::lp::{brute_force_optimum, solve, LinearProgram, FEASIBILITY_TOL};

pub fn run_example() -> daqc::Result<()> {
    let rows = vec![vec![1.0, 1.0, -1.0, -1.0], vec![1.0, -1.0, 1.0, -1.0]];
    for rhs in [[0.5, -0.25], [1.0, 1.0], [0.0, 0.0]] {
        let lp = LinearProgram::from_rows(&rows, &rhs)?;
        let simplex = solve(&lp, FEASIBILITY_TOL)?;
        let oracle = brute_force_optimum(&lp)?;
        println!(
            "b = {rhs:?}: simplex {:?} {:.4} {:?}, enumeration {:.4}",
            simplex.status, simplex.objective_value, simplex.times, oracle.objective_value
        );
    }
    let infeasible = LinearProgram::from_rows(&[vec![1.0, 1.0]], &[-1.0])?;
    println!("nonnegative times cannot reach -1: {:?}", solve(&infeasible, FEASIBILITY_TOL)?.status);
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}
