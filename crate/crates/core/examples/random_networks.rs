//! How often Erdős–Rényi networks are singular, the necessary condition for
//! a nonzero socially optimal equilibrium.
//!
//! `cargo run --release -p lqnet --example random_networks`

use lqnet::design::DEFAULT_RANK_TOL;
use lqnet::random_networks::{study, write_csv, ErConfig, WeightLaw};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rows = Vec::new();
    for n in [10, 30, 100] {
        for p in [0.001, 0.01, 0.05, 0.3] {
            rows.push(study(&ErConfig::unit(n, p, 100, 7), DEFAULT_RANK_TOL, 1e-8)?);
        }
    }
    let gaussian = ErConfig { weights: WeightLaw::Gaussian { mu: 0.0, sigma: 1.0 }, ..ErConfig::unit(30, 0.05, 100, 7) };
    rows.push(study(&gaussian, DEFAULT_RANK_TOL, 1e-8)?);
    write_csv(&rows, std::io::stdout())?;
    Ok(())
}
