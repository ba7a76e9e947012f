//! Random symmetric networks whose equilibrium equals the benefit vector and
//! is socially optimal.
//!
//! `cargo run -p lqnet --example symmetric_design -- [n] [seed]`

use lqnet::certificates::cert_strong_monotone;
use lqnet::design::{check_coincidence, symmetric_design};
use lqnet::equilibrium::solve_social_interior;
use nalgebra::DVector;

fn main() -> Result<(), lqnet::Error> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let a: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * i as f64).collect();
    let sol = symmetric_design(&a, seed)?;
    println!("G =");
    for row in sol.adjacency.rows() {
        println!("  {:+.4?}", row);
    }
    let av = DVector::from_vec(a);
    let game = sol.game(&av)?;
    let coin = check_coincidence(&game, 1e-10)?;
    let so = solve_social_interior(&game)?;
    println!("|G a|          = {:.2e}", (sol.adjacency.matrix() * &av).amax());
    println!("NE             = {:.6?}", coin.x.to_vec());
    println!("social optimum = {:.6?}", so.x.to_vec());
    println!("coincide: {}, strong-monotone margin {:.3}", coin.holds, cert_strong_monotone(&sol.adjacency).margin);

    // Three players with equal benefits leave no room for a nonzero network.
    match symmetric_design(&[1.0; 3], seed) {
        Err(e) => println!("n = 3: {e}"),
        Ok(_) => println!("n = 3: unexpectedly feasible"),
    }
    Ok(())
}
