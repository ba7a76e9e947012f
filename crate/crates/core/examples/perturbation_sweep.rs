//! Social cost of the four-node design along `G + δ·ΔG`, written as CSV.
//!
//! `cargo run -p lqnet --example perturbation_sweep -- [out.csv]`

use std::fs::File;
use std::io::{self, Write};

use lqnet::instances;
use lqnet::perturbation::{default_grid, linspace, sweep, SweepConfig, SweepSolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = instances::four_node_game();
    let pattern = instances::four_node_pattern();

    let config = SweepConfig::new(game.clone(), pattern.clone(), default_grid(), SweepSolver::Interior)?;
    let report = sweep(&config)?;
    let out: Box<dyn Write> = match std::env::args().nth(1) {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    };
    report.write_csv(out)?;

    let run = report.feasible_run(0.0).ok_or("infeasible at δ = 0")?;
    let fine = sweep(&SweepConfig::new(game, pattern, linspace(-0.6, 0.6, 1201), SweepSolver::Interior)?)?;
    let fine_run = fine.feasible_run(0.0).ok_or("infeasible at δ = 0")?;
    eprintln!(
        "feasible for δ in [{:.2}, {:.2}]; max cost jump {:.3e} (step 0.01) vs {:.3e} (step 0.001)",
        run.rows[0].delta,
        run.rows[run.rows.len() - 1].delta,
        run.max_adjacent_cost_jump(),
        fine_run.max_adjacent_cost_jump()
    );
    eprintln!("empirical |ΔC|/‖ΔG‖ up to {:.3}, ‖x‖ up to {:.3}", run.lipschitz_cost, run.delta_cap);
    Ok(())
}
