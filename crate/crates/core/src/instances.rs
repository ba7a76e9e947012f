//! Reference instances used by the examples and tests.

use nalgebra::DVector;

use crate::design::{DesignProblem, FixedEntry};
use crate::game::{AdjacencyMatrix, NetworkGame};

/// Clamped entries of the three-player asymmetric design instance
/// (`g12 = −2`, `g31 = −3`, `g23 = 2`, zero-based).
pub const THREE_PLAYER_FIXED: [(usize, usize, f64); 3] = [(0, 1, -2.0), (2, 0, -3.0), (1, 2, 2.0)];

/// Free positions `g21`, `g13`, `g32`, zero-based.
pub const THREE_PLAYER_FREE: [(usize, usize); 3] = [(1, 0), (0, 2), (2, 1)];

/// Reference values of the free entries, rounded to about six digits.
pub const THREE_PLAYER_FREE_VALUES: [f64; 3] = [1.18042, -0.273107, 37.229];

/// Reference equilibrium of the three-player instance.
pub const THREE_PLAYER_X: [f64; 3] = [1.4046, 0.19173, 0.07544];

pub const THREE_PLAYER_A: [f64; 3] = [1.0, 2.0, 3.0];

/// The three-player coincidence design problem.
pub fn three_player_problem() -> DesignProblem {
    DesignProblem::new(
        THREE_PLAYER_A.to_vec(),
        THREE_PLAYER_FIXED
            .iter()
            .map(|&(i, j, value)| FixedEntry { i, j, value })
            .collect(),
        THREE_PLAYER_FREE.to_vec(),
    )
    .expect("static instance is valid")
}

/// Three-player game with the rounded reference free entries.
pub fn three_player_game() -> NetworkGame {
    let mut rows = vec![vec![0.0; 3]; 3];
    for &(i, j, v) in &THREE_PLAYER_FIXED {
        rows[i][j] = v;
    }
    for (&(i, j), &v) in THREE_PLAYER_FREE.iter().zip(&THREE_PLAYER_FREE_VALUES) {
        rows[i][j] = v;
    }
    NetworkGame::from_rows(&rows, &THREE_PLAYER_A).expect("static instance is valid")
}

/// Symmetric four-player network with zero row sums, so `G·1 = 0` and the
/// all-ones benefit vector gives `x* = 1` for both the equilibrium and the
/// social optimum. Spectral norm 0.6.
pub fn four_node_symmetric() -> AdjacencyMatrix {
    let upper = [(0, 1, 0.1), (0, 2, 0.2), (0, 3, -0.3), (1, 2, -0.3), (1, 3, 0.2), (2, 3, 0.1)];
    let mut rows = vec![vec![0.0; 4]; 4];
    for (i, j, v) in upper {
        rows[i][j] = v;
        rows[j][i] = v;
    }
    AdjacencyMatrix::from_rows(&rows).expect("static instance is valid")
}

pub fn four_node_game() -> NetworkGame {
    NetworkGame::new(four_node_symmetric(), DVector::from_element(4, 1.0)).expect("static instance is valid")
}

/// Perturbation direction touching `g13`, `g14`, `g31`, `g41`.
pub fn four_node_pattern() -> nalgebra::DMatrix<f64> {
    let mut p = nalgebra::DMatrix::zeros(4, 4);
    for (i, j) in [(0, 2), (0, 3), (2, 0), (3, 0)] {
        p[(i, j)] = 1.0;
    }
    p
}
