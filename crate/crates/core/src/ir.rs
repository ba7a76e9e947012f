//! Individual rationality: is taking part in the equilibrium at least as good
//! as opting out with `x_i = 0`, which costs nothing?

use crate::equilibrium::{EquilibriumResult, SolutionKind};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, NetworkGame};
use crate::linalg;

/// Slack in the `cost_at_eq ≤ cost_opt_out` comparison.
pub const RATIONALITY_SLACK: f64 = 1e-9;
/// Tolerance of the `J_i = −½x_i²` identity at a Nash equilibrium.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerIr {
    pub cost_at_eq: f64,
    pub cost_opt_out: f64,
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrReport {
    pub kind: SolutionKind,
    pub players: Vec<PlayerIr>,
}

impl IrReport {
    pub fn all_rational(&self) -> bool {
        self.players.iter().all(|p| p.rational)
    }
}

/// Natural residual of `map` on the orthant: `‖x − max(0, x − map)‖∞`.
fn orthant_residual(x: &ActionProfile, map: &nalgebra::DVector<f64>) -> f64 {
    let v = x.as_vector();
    linalg::vec_inf_norm(&(v - (v - map).map(|t| t.max(0.0))))
}

/// Per-player participation report for an equilibrium of `game`.
///
/// The profile is re-verified against `game` with tolerance `tol·(1 + ‖a‖∞)`.
/// At a Nash equilibrium each player's cost must equal `−½x_i²`.
pub fn ir_check(game: &NetworkGame, eq: &EquilibriumResult, tol: f64) -> Result<IrReport> {
    let x = &eq.x;
    let map = match eq.kind {
        SolutionKind::InteriorNe | SolutionKind::ConstrainedNe => game.grad_f(x)?,
        SolutionKind::InteriorSocial | SolutionKind::ConstrainedSocial => game.grad_w(x)?,
        SolutionKind::PgNe | SolutionKind::PgSocial => {
            return Err(Error::InvalidConfig("public-goods results need the public-goods game".into()))
        }
    };
    let residual = if eq.kind.is_constrained() {
        orthant_residual(x, &map)
    } else {
        linalg::vec_inf_norm(&map)
    };
    if !(residual <= tol * (1.0 + linalg::vec_inf_norm(game.a()))) {
        return Err(Error::NotAnEquilibrium { residual });
    }

    let mut players = Vec::with_capacity(game.a().len());
    for i in 0..x.len() {
        let cost = game.cost(i, x)?;
        if eq.kind.is_nash() {
            let gap = (cost + 0.5 * x[i] * x[i]).abs();
            if gap > IDENTITY_TOL * x[i].abs().max(1.0) {
                return Err(Error::NotAnEquilibrium { residual: gap });
            }
        }
        players.push(PlayerIr { cost_at_eq: cost, cost_opt_out: 0.0, rational: cost <= RATIONALITY_SLACK });
    }
    Ok(IrReport { kind: eq.kind, players })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{solve_ne_interior, solve_social_interior, solve_vi, Mapping, ViOptions};
    use crate::game::AdjacencyMatrix;
    use nalgebra::DVector;

    #[test]
    fn decoupled_players() {
        let game = NetworkGame::new(AdjacencyMatrix::zeros(2), DVector::from_vec(vec![1.0, 1.0])).unwrap();
        let eq = solve_ne_interior(&game).unwrap();
        let rep = ir_check(&game, &eq, 1e-8).unwrap();
        for p in &rep.players {
            assert_eq!(p.cost_at_eq, -0.5);
            assert!(p.rational);
        }
    }

    #[test]
    fn boundary_player_ties() {
        let game = NetworkGame::new(AdjacencyMatrix::zeros(2), DVector::from_vec(vec![-1.0, 2.0])).unwrap();
        let eq = solve_vi(&game, Mapping::Ne, &ActionProfile::zeros(2), &ViOptions::default()).unwrap();
        let rep = ir_check(&game, &eq, 1e-8).unwrap();
        assert_eq!(rep.players[0].cost_at_eq, 0.0);
        assert!(rep.all_rational());
    }

    #[test]
    fn rejects_non_equilibrium() {
        let game = NetworkGame::new(AdjacencyMatrix::zeros(2), DVector::from_vec(vec![1.0, 1.0])).unwrap();
        let mut eq = solve_ne_interior(&game).unwrap();
        eq.x = ActionProfile::from_vec(vec![2.0, 1.0]);
        assert!(matches!(ir_check(&game, &eq, 1e-8), Err(Error::NotAnEquilibrium { .. })));
    }

    #[test]
    fn social_optimum_can_be_irrational() {
        // Strong complements: the planner asks player 0 to overproduce.
        let game = NetworkGame::from_rows(&[vec![0.0, 0.0], vec![-0.8, 0.0]], &[0.1, 1.0]).unwrap();
        let so = solve_social_interior(&game).unwrap();
        let rep = ir_check(&game, &so, 1e-8).unwrap();
        assert!(!rep.all_rational());
    }
}
