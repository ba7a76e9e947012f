//! Does every player prefer joining the equilibrium to opting out?
//!
//! `cargo run -p lqnet --example individual_rationality`

use lqnet::equilibrium::{solve_ne_interior, solve_social_interior, solve_vi, Mapping, ViOptions};
use lqnet::ir::ir_check;
use lqnet::{instances, ActionProfile, NetworkGame};

fn show(label: &str, game: &NetworkGame, eq: &lqnet::equilibrium::EquilibriumResult) -> Result<(), lqnet::Error> {
    let rep = ir_check(game, eq, 1e-8)?;
    let costs: Vec<String> = rep.players.iter().map(|p| format!("{:+.4}", p.cost_at_eq)).collect();
    println!("{label:<28} {:<18} costs [{}]  all rational: {}", eq.kind.to_string(), costs.join(", "), rep.all_rational());
    Ok(())
}

fn main() -> Result<(), lqnet::Error> {
    let three = instances::three_player_game();
    show("three-player design", &three, &solve_ne_interior(&three)?)?;

    let edge = NetworkGame::from_rows(&[vec![0.0, 0.4], vec![0.6, 0.0]], &[-0.5, 1.0])?;
    show("boundary equilibrium", &edge, &solve_vi(&edge, Mapping::Ne, &ActionProfile::zeros(2), &ViOptions::default())?)?;

    // Nash costs are always -x²/2; the planner can ask one player to subsidize another.
    let lopsided = NetworkGame::from_rows(&[vec![0.0, 0.9], vec![0.0, 0.0]], &[0.1, 1.0])?;
    show("lopsided pair, Nash", &lopsided, &solve_ne_interior(&lopsided)?)?;
    show("lopsided pair, optimum", &lopsided, &solve_social_interior(&lopsided)?)?;
    Ok(())
}
