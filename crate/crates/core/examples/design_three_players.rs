//! Recover the free entries of a three-player network so that its Nash
//! equilibrium is also the social optimum.
//!
//! `cargo run -p lqnet --example design_three_players -- [seed]`

use lqnet::design::{design_solve, necessary_condition_det, potential_check, DesignOptions, DEFAULT_RANK_TOL};
use lqnet::instances::{three_player_problem, THREE_PLAYER_FREE, THREE_PLAYER_FREE_VALUES};

fn main() -> Result<(), lqnet::Error> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let problem = three_player_problem();
    let opts = DesignOptions { seed, ..DesignOptions::default() };
    let outcome = design_solve(&problem, &opts)?;

    println!(
        "{} feasible branch(es), {} with negative actions; {} of {} starts converged",
        outcome.solutions.len(),
        outcome.infeasible.len(),
        outcome.converged,
        outcome.starts_run
    );
    for s in &outcome.solutions {
        let g = s.adjacency.matrix();
        let free: Vec<String> = THREE_PLAYER_FREE.iter().map(|&(i, j)| format!("g{}{}={:.6}", i + 1, j + 1, g[(i, j)])).collect();
        let det = necessary_condition_det(&s.adjacency, DEFAULT_RANK_TOL);
        println!(
            "  branch {}: {}  x*={:.6?}  residual={:.2e}  singular={}  symmetric={}",
            s.branch_id,
            free.join(" "),
            s.x_star.to_vec(),
            s.residual(),
            det.singular,
            potential_check(&s.adjacency, 1e-9)
        );
    }
    if let Some((s, dist)) = outcome.closest(&problem, &THREE_PLAYER_FREE_VALUES) {
        println!("reference branch is {} (max deviation {:.2e})", s.branch_id, dist);
    }
    Ok(())
}
