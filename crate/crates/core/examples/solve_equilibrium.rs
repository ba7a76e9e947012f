//! Nash equilibrium and social optimum of a small game, with and without the
//! nonnegativity constraint.
//!
//! `cargo run -p lqnet --example solve_equilibrium`

use lqnet::equilibrium::{solve_ne_interior, solve_social_interior, solve_vi, Mapping, ViOptions};
use lqnet::{ActionProfile, NetworkGame};

fn main() -> Result<(), lqnet::Error> {
    // Player 1 is a strong substitute for player 3: the interior solution goes negative.
    let game = NetworkGame::from_rows(
        &[vec![0.0, 0.3, 0.0], vec![0.2, 0.0, 0.1], vec![1.5, 0.0, 0.0]],
        &[2.0, 1.0, 0.5],
    )?;

    let ne = solve_ne_interior(&game)?;
    let so = solve_social_interior(&game)?;
    println!("interior NE      x = {:.6?}  (interior: {})", ne.x.to_vec(), ne.interior);
    println!("interior social  y = {:.6?}", so.x.to_vec());

    let x0 = ActionProfile::zeros(3);
    let cne = solve_vi(&game, Mapping::Ne, &x0, &ViOptions::default())?;
    let cso = solve_vi(&game, Mapping::Social, &x0, &ViOptions::default())?;
    println!(
        "constrained NE   x = {:.6?}  residual {:.1e}, complementarity {:.1e}, {} iterations",
        cne.x.to_vec(),
        cne.stationarity_residual,
        cne.complementarity_residual,
        cne.iterations
    );
    println!("constrained soc. y = {:.6?}", cso.x.to_vec());
    println!(
        "social cost: NE {:.6}, optimum {:.6}",
        game.social_cost(&cne.x)?,
        game.social_cost(&cso.x)?
    );
    Ok(())
}
