//! Networks whose Nash equilibrium coincides with the social optimum.
//!
//! The two coincide exactly when `(I+G)x = a` and `Gᵀx = 0`. This module checks
//! that condition for a given game, builds symmetric networks satisfying it
//! and recovers free adjacency entries from the bilinear system by multi-start
//! Levenberg–Marquardt.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve_ne_interior, solve_ne_pg, solve_social_interior};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, AdjacencyMatrix, NetworkGame, PublicGoodsGame, TOL_NONNEG};
use crate::linalg;

/// Relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
pub const DEFAULT_DESIGN_TOL: f64 = 1e-8;
pub const DEFAULT_STARTS: usize = 64;
/// Scaled sup-distance below which two design solutions are the same branch.
pub const DISTINCT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Coincidence {
    pub holds: bool,
    pub x: ActionProfile,
    /// `‖Gᵀx‖∞`
    pub residual_orth: f64,
    /// `‖x − y‖∞` against the interior social optimum, when that system is solvable.
    pub social_gap: Option<f64>,
}

/// Does the interior Nash equilibrium of `game` coincide with its social optimum?
pub fn check_coincidence(game: &NetworkGame, tol: f64) -> Result<Coincidence> {
    let ne = solve_ne_interior(game)?;
    let residual_orth = linalg::vec_inf_norm(&game.g().tr_mul(ne.x.as_vector()));
    let scale = 1.0 + linalg::vec_inf_norm(game.a());
    let social_gap = solve_social_interior(game)
        .ok()
        .map(|so| linalg::vec_inf_norm(&(ne.x.as_vector() - so.x.as_vector())));
    let holds = residual_orth <= tol * scale && ne.x.is_nonnegative(TOL_NONNEG);
    Ok(Coincidence { holds, x: ne.x, residual_orth, social_gap })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantCheck {
    pub det: f64,
    pub singular: bool,
    pub rank: usize,
    pub min_singular_value: f64,
    pub max_singular_value: f64,
}

/// Determinant, numerical rank and singularity of `G`. A nonzero coincident
/// equilibrium needs `G` singular, since `Gᵀx = 0`.
pub fn necessary_condition_det(g: &AdjacencyMatrix, rank_tol: f64) -> DeterminantCheck {
    let sv = linalg::singular_values(g.matrix());
    let max = sv.first().copied().unwrap_or(0.0);
    let min = sv.last().copied().unwrap_or(0.0);
    let threshold = rank_tol * max;
    DeterminantCheck {
        det: linalg::determinant(g.matrix()),
        singular: min <= threshold,
        rank: sv.iter().filter(|&&s| s > threshold).count(),
        min_singular_value: min,
        max_singular_value: max,
    }
}

/// Symmetric `G` (an exact potential game) up to `tol`.
pub fn potential_check(g: &AdjacencyMatrix, tol: f64) -> bool {
    linalg::max_asymmetry(g.matrix()) <= tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSolution {
    pub adjacency: AdjacencyMatrix,
    pub x_star: ActionProfile,
    /// `‖(I+G)x − a‖∞`
    pub residual_ne: f64,
    /// `‖Gᵀx‖∞`
    pub residual_orth: f64,
    pub branch_id: usize,
}

impl DesignSolution {
    pub fn residual(&self) -> f64 {
        self.residual_ne.max(self.residual_orth)
    }

    pub fn game(&self, a: &DVector<f64>) -> Result<NetworkGame> {
        NetworkGame::new(self.adjacency.clone(), a.clone())
    }

    fn evaluate(adjacency: AdjacencyMatrix, x: DVector<f64>, a: &DVector<f64>) -> Self {
        let g = adjacency.matrix();
        let residual_ne = linalg::vec_inf_norm(&(&x + g * &x - a));
        let residual_orth = linalg::vec_inf_norm(&g.tr_mul(&x));
        Self { adjacency, x_star: ActionProfile::new(x), residual_ne, residual_orth, branch_id: 0 }
    }
}

/// Random symmetric network with `G·a = 0`, so that `x* = a` is both the Nash
/// equilibrium and the social optimum.
///
/// Off-diagonal entries are drawn from the null space of the row constraints
/// and scaled to a spectral norm in `[0.1, 0.45]`, which keeps `I+G` and
/// `I+2G` positive definite.
pub fn symmetric_design(a: &[f64], seed: u64) -> Result<DesignSolution> {
    let n = a.len();
    if n < 2 {
        return Err(Error::InfeasibleDesign("need at least two players".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    // Row i of G·a as a linear function of the upper-triangular entries.
    let mut constraints = DMatrix::zeros(n, m);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        constraints[(i, k)] = a[j];
        constraints[(j, k)] = a[i];
    }
    let svd = constraints.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().fold(0.0_f64, |acc, &s| acc.max(s));
    let cutoff = smax * 1e-12 * m as f64;
    let row_space: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    if row_space.len() >= m {
        return Err(Error::InfeasibleDesign(format!(
            "only the zero network satisfies G·a = 0 for n = {n}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let project = |mut w: DVector<f64>| {
        for r in &row_space {
            let c = r.dot(&w);
            w.axpy(-c, r, 1.0);
        }
        w
    };
    let mut w = project(DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal)));
    if w.norm() < 1e-8 {
        return Err(Error::InfeasibleDesign("degenerate null-space sample".into()));
    }
    let build = |w: &DVector<f64>| {
        let mut g = DMatrix::zeros(n, n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            g[(i, j)] = w[k];
            g[(j, i)] = w[k];
        }
        g
    };
    let target = rng.random_range(0.1..0.45);
    w *= target / linalg::spectral_norm(&build(&w));
    let w = project(w);
    let adjacency = AdjacencyMatrix::new(build(&w))?;
    let a = DVector::from_column_slice(a);
    Ok(DesignSolution::evaluate(adjacency, a.clone(), &a))
}

/// Clamped off-diagonal entry of a design problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Adjacency entries either clamped or left to the designer; anything else is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignProblem {
    pub a: DVector<f64>,
    pub fixed: Vec<FixedEntry>,
    pub free: Vec<(usize, usize)>,
}

impl DesignProblem {
    pub fn new(a: Vec<f64>, fixed: Vec<FixedEntry>, free: Vec<(usize, usize)>) -> Result<Self> {
        let p = Self { a: DVector::from_vec(a), fixed, free };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidProblem("no players".into()));
        }
        if self.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem("a has non-finite entries".into()));
        }
        let mut seen = HashSet::new();
        let positions = self
            .fixed
            .iter()
            .map(|f| (f.i, f.j, "fixed"))
            .chain(self.free.iter().map(|&(i, j)| (i, j, "free")));
        for (i, j, which) in positions {
            if i >= n || j >= n {
                return Err(Error::InvalidProblem(format!("{which} entry ({i},{j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidProblem(format!("{which} entry ({i},{j}) is on the diagonal")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidProblem(format!("entry ({i},{j}) listed more than once")));
            }
        }
        if let Some(f) = self.fixed.iter().find(|f| !f.value.is_finite()) {
            return Err(Error::InvalidProblem(format!("fixed entry ({},{}) is not finite", f.i, f.j)));
        }
        Ok(())
    }

    fn matrix_with(&self, free_values: &[f64]) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(self.n(), self.n());
        for f in &self.fixed {
            g[(f.i, f.j)] = f.value;
        }
        for (&(i, j), &v) in self.free.iter().zip(free_values) {
            g[(i, j)] = v;
        }
        g
    }

    /// `[(I+G)x − a; Gᵀx]` for the stacked unknowns `u = [x; g_free]`.
    fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let x = u.rows(0, n).into_owned();
        let g = self.matrix_with(&u.as_slice()[n..]);
        let mut r = DVector::zeros(2 * n);
        r.rows_mut(0, n).copy_from(&(&x + &g * &x - &self.a));
        r.rows_mut(n, n).copy_from(&g.tr_mul(&x));
        r
    }

    fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let x = u.rows(0, n);
        let g = self.matrix_with(&u.as_slice()[n..]);
        let mut j = DMatrix::zeros(2 * n, n + self.free.len());
        j.view_mut((0, 0), (n, n))
            .copy_from(&(DMatrix::identity(n, n) + &g));
        j.view_mut((n, 0), (n, n)).copy_from(&g.transpose());
        for (k, &(p, q)) in self.free.iter().enumerate() {
            j[(p, n + k)] = x[q];
            j[(n + q, n + k)] = x[p];
        }
        j
    }
}

#[derive(Debug, Clone)]
pub struct DesignOptions {
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    /// Range of the initial free entries on the first pass.
    pub free_range: f64,
    /// Range used when the first pass finds nothing.
    pub wide_range: f64,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            seed: 0,
            tol: DEFAULT_DESIGN_TOL,
            max_iters: 500,
            free_range: 5.0,
            wide_range: 50.0,
        }
    }
}

/// All distinct design branches found, plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignOutcome {
    /// Feasible branches (`x ≥ 0`), canonically ordered.
    pub solutions: Vec<DesignSolution>,
    /// Converged branches with some negative action.
    pub infeasible: Vec<DesignSolution>,
    pub starts_run: usize,
    pub converged: usize,
    pub best_residual: f64,
}

impl DesignOutcome {
    /// Branch whose free entries are closest (sup-norm) to `target`.
    pub fn closest(&self, problem: &DesignProblem, target: &[f64]) -> Option<(&DesignSolution, f64)> {
        self.solutions
            .iter()
            .map(|s| {
                let d = problem
                    .free
                    .iter()
                    .zip(target)
                    .map(|(&(i, j), t)| (s.adjacency.matrix()[(i, j)] - t).abs())
                    .fold(0.0, f64::max);
                (s, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Levenberg–Marquardt from one start. Returns the final iterate and its residual.
fn levenberg_marquardt(problem: &DesignProblem, mut u: DVector<f64>, tol: f64, max_iters: usize) -> (DVector<f64>, f64) {
    let mut r = problem.residual(&u);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..max_iters {
        if linalg::vec_inf_norm(&r) <= 0.01 * tol || !cost.is_finite() {
            break;
        }
        let j = problem.jacobian(&u);
        let jtj = j.tr_mul(&j);
        let jtr = j.tr_mul(&r);
        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for k in 0..lhs.nrows() {
                lhs[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let step = match lhs.clone().cholesky() {
                Some(ch) => ch.solve(&(-&jtr)),
                None => linalg::least_squares(&lhs, &(-&jtr)),
            };
            let cand = &u + &step;
            let cr = problem.residual(&cand);
            let cc = cr.norm_squared();
            if cc.is_finite() && cc < cost {
                u = cand;
                r = cr;
                cost = cc;
                lambda = (lambda * 0.2).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let res = linalg::vec_inf_norm(&r);
    (u, res)
}

fn start_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Scaled sup-distance between two stacked solution vectors.
fn branch_distance(u: &[f64], v: &[f64]) -> f64 {
    let scale = u
        .iter()
        .chain(v)
        .fold(1.0_f64, |acc, x| acc.max(x.abs()));
    u.iter().zip(v).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale
}

fn run_pass(problem: &DesignProblem, opts: &DesignOptions, range: f64, stream_offset: u64) -> Vec<(DVector<f64>, f64)> {
    let n = problem.n();
    let m = problem.free.len();
    let amax = problem.a.iter().copied().fold(0.0_f64, f64::max).max(1e-3);
    (0..opts.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = start_rng(opts.seed, stream_offset + k as u64);
            let u0 = DVector::from_fn(n + m, |idx, _| {
                if idx < n {
                    rng.random_range(0.0..=amax)
                } else {
                    rng.random_range(-range..=range)
                }
            });
            levenberg_marquardt(problem, u0, opts.tol, opts.max_iters)
        })
        .collect()
}

/// Solve `(I+G)x = a, Gᵀx = 0` for `x` and the free entries of `G`.
pub fn design_solve(problem: &DesignProblem, opts: &DesignOptions) -> Result<DesignOutcome> {
    problem.validate()?;
    if opts.starts == 0 {
        return Err(Error::InvalidConfig("need at least one start".into()));
    }
    let mut runs = run_pass(problem, opts, opts.free_range, 0);
    let any_feasible = |runs: &[(DVector<f64>, f64)]| {
        runs.iter()
            .any(|(u, res)| *res <= opts.tol && u.rows(0, problem.n()).iter().all(|&v| v >= -opts.tol))
    };
    let mut starts_run = opts.starts;
    if !any_feasible(&runs) && opts.wide_range > opts.free_range {
        runs.extend(run_pass(problem, opts, opts.wide_range, 1 << 32));
        starts_run += opts.starts;
    }

    let best_residual = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mut converged: Vec<Vec<f64>> = runs
        .iter()
        .filter(|(_, res)| *res <= opts.tol)
        .map(|(u, _)| u.iter().copied().collect())
        .collect();
    let converged_count = converged.len();
    converged.sort_by(|p, q| {
        p.iter()
            .zip(q)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut distinct: Vec<Vec<f64>> = Vec::new();
    for u in converged {
        if distinct.iter().all(|d| branch_distance(d, &u) > DISTINCT_TOL) {
            distinct.push(u);
        }
    }

    let n = problem.n();
    let mut solutions = Vec::new();
    let mut infeasible = Vec::new();
    for u in distinct {
        let adjacency = AdjacencyMatrix::new(problem.matrix_with(&u[n..]))?;
        let x = DVector::from_column_slice(&u[..n]);
        let mut sol = DesignSolution::evaluate(adjacency, x, &problem.a);
        if sol.x_star.is_nonnegative(opts.tol) {
            sol.branch_id = solutions.len();
            solutions.push(sol);
        } else {
            sol.branch_id = infeasible.len();
            infeasible.push(sol);
        }
    }
    if solutions.is_empty() {
        return Err(Error::NoSolutionFound { best_residual, rejected_negative: infeasible.len() });
    }
    Ok(DesignOutcome { solutions, infeasible, starts_run, converged: converged_count, best_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PgCoincidence {
    pub holds: bool,
    pub x: ActionProfile,
    /// `‖GᵀVx‖∞` with `V = diag(1 − d)`.
    pub residual: f64,
}

/// Coincidence test for the public-goods game with affine demand: the Nash
/// equilibrium is also socially optimal iff `GᵀV x = 0`.
pub fn pg_coincidence(game: &PublicGoodsGame, tol: f64) -> Result<PgCoincidence> {
    let (_, d) = game.gamma().as_affine().ok_or(Error::AffineGammaRequired)?;
    let ne = solve_ne_pg(game, tol)?;
    let vx = ne.x.as_vector().component_mul(&d.map(|di| 1.0 - di));
    let residual = linalg::vec_inf_norm(&game.g().tr_mul(&vx));
    Ok(PgCoincidence { holds: residual <= tol, x: ne.x, residual })
}
