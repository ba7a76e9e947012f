//! Public-goods game with affine demand: equilibrium, social optimum and the
//! coincidence test. Also shows a custom demand function.
//!
//! `cargo run -p lqnet --example public_goods`

use std::sync::Arc;

use lqnet::design::pg_coincidence;
use lqnet::equilibrium::{solve_ne_pg, solve_social_pg};
use lqnet::game::DemandFunction;
use lqnet::{AdjacencyMatrix, GammaFamily, PublicGoodsGame};
use nalgebra::DVector;

/// Saturating demand `γ(w) = cap·w / (1 + w)` for `w > −1`.
#[derive(Debug)]
struct Saturating {
    cap: f64,
}

impl DemandFunction for Saturating {
    fn value(&self, _player: usize, w: f64) -> Result<f64, String> {
        if w <= -1.0 {
            return Err(format!("wealth {w} out of range"));
        }
        Ok(self.cap * w / (1.0 + w))
    }

    fn derivative(&self, _player: usize, w: f64) -> Result<f64, String> {
        Ok(self.cap / ((1.0 + w) * (1.0 + w)))
    }
}

fn main() -> Result<(), lqnet::Error> {
    let g = AdjacencyMatrix::from_rows(&[vec![0.0, 0.2], vec![0.1, 0.0]])?;
    let game = PublicGoodsGame::new(g.clone(), DVector::zeros(2), GammaFamily::affine(vec![1.0; 2], vec![0.5; 2]))?;
    let ne = solve_ne_pg(&game, 1e-12)?;
    let so = solve_social_pg(&game, 1e-12)?;
    let coin = pg_coincidence(&game, 1e-9)?;
    println!("affine demand: NE {:.6?}, social {:.6?}", ne.x.to_vec(), so.x.to_vec());
    println!("  coincide: {} (residual {:.3e})", coin.holds, coin.residual);

    // Full pass-through (d = 1) makes V = 0, so every equilibrium is optimal.
    let flat = PublicGoodsGame::new(g.clone(), DVector::from_element(2, 0.3), GammaFamily::affine(vec![0.5; 2], vec![1.0; 2]))?;
    println!("d = 1: coincide: {}", pg_coincidence(&flat, 1e-9)?.holds);

    let custom = PublicGoodsGame::new(g, DVector::from_element(2, 1.0), GammaFamily::Custom(Arc::new(Saturating { cap: 2.0 })))?;
    let eq = solve_ne_pg(&custom, 1e-12)?;
    println!("saturating demand: NE {:.6?} after {} fixed-point steps", eq.x.to_vec(), eq.iterations);
    Ok(())
}
