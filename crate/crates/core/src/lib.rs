//! Equilibrium computation and network design for linear-quadratic network games.
//!
//! Each of `n` players picks a scalar action `x_i ≥ 0` and pays
//! `J_i = ½x_i² + (z_i(x) − a_i)·x_i`, where `z = G·x` aggregates the actions of
//! its neighbours through the adjacency matrix `G`. The crate covers:
//!
//! - [`game`]: game instances, costs, aggregates and first-order maps, plus the
//!   public-goods variant with a demand family.
//! - [`equilibrium`]: interior Nash equilibria `(I+G)x = a`, social optima
//!   `(I+G+Gᵀ)y = a`, nonnegativity-constrained solutions of the associated
//!   variational inequalities, and the public-goods fixed points.
//! - [`design`]: checking and constructing networks whose equilibrium is
//!   socially optimal (`(I+G)x = a`, `Gᵀx = 0`).
//! - [`certificates`]: sufficient conditions on `G` for a unique coincident
//!   equilibrium and for continuity of the social cost.
//! - [`perturbation`]: social-cost sweeps along `G + δ·ΔG`.
//! - [`random_networks`]: singularity statistics of Erdős–Rényi networks.
//! - [`io`], [`ir`] and [`cli`]: file formats, the individual-rationality
//!   report and the `lqnet` command line.
//!
//! ```
//! use lqnet::{equilibrium, design, instances};
//!
//! let game = instances::three_player_game();
//! let ne = equilibrium::solve_ne_interior(&game).unwrap();
//! assert!((ne.x[0] - 1.4046).abs() < 1e-3);
//! let check = design::check_coincidence(&game, 5e-3).unwrap();
//! assert!(check.holds);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; `cargo run -p lqnet --example <name>`.

pub mod certificates;
pub mod cli;
pub mod design;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod instances;
pub mod io;
pub mod ir;
pub mod linalg;
pub mod perturbation;
pub mod random_networks;

pub use error::{Error, Result};
pub use game::{ActionProfile, AdjacencyMatrix, GammaFamily, NetworkGame, Networked, PublicGoodsGame};
