//! Uniqueness and continuity certificates for a few networks.
//!
//! `cargo run -p lqnet --example certificates`

use lqnet::certificates::certify_all;
use lqnet::{instances, AdjacencyMatrix, Networked};

fn report(label: &str, g: &AdjacencyMatrix) {
    println!("{label}");
    for c in certify_all(g) {
        println!("  {:<24} margin {:>+9.4}  {}", c.name.to_string(), c.margin, if c.holds { "holds" } else { "-" });
    }
}

fn main() -> Result<(), lqnet::Error> {
    report("four-node symmetric design", &instances::four_node_symmetric());
    report("three-player design", instances::three_player_game().adjacency());
    report(
        "weak ring",
        &AdjacencyMatrix::from_rows(&[vec![0.0, 0.2, 0.0], vec![0.0, 0.0, 0.2], vec![0.2, 0.0, 0.0]])?,
    );
    Ok(())
}
