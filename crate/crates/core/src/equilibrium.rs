//! Nash equilibria and social optima.
//!
//! Interior solutions come from dense linear solves of `(I+G)x = a` and
//! `(I+G+Gᵀ)y = a`. On the nonnegative orthant the equilibrium is the solution
//! of a variational inequality, computed here by a projected fixed-point
//! iteration followed by an active-set polish.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionProfile, GammaFamily, NetworkGame, Networked, PublicGoodsGame, TOL_NONNEG};
use crate::linalg::{self, Factorized};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

/// Which problem produced an [`EquilibriumResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionKind {
    InteriorNe,
    InteriorSocial,
    ConstrainedNe,
    ConstrainedSocial,
    PgNe,
    PgSocial,
}

impl SolutionKind {
    pub fn is_nash(self) -> bool {
        matches!(self, Self::InteriorNe | Self::ConstrainedNe | Self::PgNe)
    }

    pub fn is_constrained(self) -> bool {
        matches!(self, Self::ConstrainedNe | Self::ConstrainedSocial)
    }
}

impl fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::InteriorNe => "interior-ne",
            Self::InteriorSocial => "interior-social",
            Self::ConstrainedNe => "constrained-ne",
            Self::ConstrainedSocial => "constrained-social",
            Self::PgNe => "pg-ne",
            Self::PgSocial => "pg-social",
        };
        f.write_str(s)
    }
}

/// Action profile together with the residuals that certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub x: ActionProfile,
    pub kind: SolutionKind,
    /// Sup-norm of the first-order map (natural residual for constrained kinds).
    pub stationarity_residual: f64,
    /// `max_i |x_i·F_i(x)|` for constrained kinds, zero otherwise.
    pub complementarity_residual: f64,
    /// Every action strictly above `TOL_NONNEG`.
    pub interior: bool,
    pub iterations: usize,
}

impl EquilibriumResult {
    fn new(x: DVector<f64>, kind: SolutionKind, stationarity: f64, complementarity: f64, iterations: usize) -> Self {
        let interior = x.iter().all(|&v| v > TOL_NONNEG);
        Self {
            x: ActionProfile::new(x),
            kind,
            stationarity_residual: stationarity,
            complementarity_residual: complementarity,
            interior,
            iterations,
        }
    }
}

/// Solve `m x = b` with one step of iterative refinement.
fn refined_solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let lu = Factorized::new(m)?;
    let mut x = lu.solve(b);
    let r = b - m * &x;
    x += lu.solve(&r);
    Ok(x)
}

/// Interior Nash equilibrium: `(I+G)x = a`. Negative entries are kept.
pub fn solve_ne_interior(game: &NetworkGame) -> Result<EquilibriumResult> {
    let m = game.ne_matrix();
    let x = refined_solve(&m, game.a())?;
    let res = linalg::vec_inf_norm(&(&m * &x - game.a()));
    Ok(EquilibriumResult::new(x, SolutionKind::InteriorNe, res, 0.0, 0))
}

/// Interior social optimum: `(I+G+Gᵀ)y = a`.
pub fn solve_social_interior(game: &NetworkGame) -> Result<EquilibriumResult> {
    let m = game.social_matrix();
    let y = refined_solve(&m, game.a())?;
    let res = linalg::vec_inf_norm(&(&m * &y - game.a()));
    Ok(EquilibriumResult::new(y, SolutionKind::InteriorSocial, res, 0.0, 0))
}

/// First-order map used by [`solve_vi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mapping {
    /// `F(x) = (I+G)x − a`
    Ne,
    /// `W(x) = (I+G+Gᵀ)x − a`
    Social,
}

#[derive(Debug, Clone)]
pub struct ViOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// Optional per-player upper bounds; `None` means the plain orthant.
    pub upper: Option<DVector<f64>>,
}

impl Default for ViOptions {
    fn default() -> Self {
        Self {
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            upper: None,
        }
    }
}

impl ViOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Affine VI on a box `[0, u]`: find `x` with `(M x − a)ᵀ(v − x) ≥ 0` for all `v` in the box.
struct BoxVi<'a> {
    m: DMatrix<f64>,
    a: &'a DVector<f64>,
    upper: Option<&'a DVector<f64>>,
}

impl BoxVi<'_> {
    fn map(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.m * x - self.a
    }

    fn project(&self, v: &mut DVector<f64>) {
        for i in 0..v.len() {
            let hi = self.upper.map_or(f64::INFINITY, |u| u[i]);
            v[i] = v[i].clamp(0.0, hi);
        }
    }

    fn natural_residual(&self, x: &DVector<f64>, f: &DVector<f64>) -> f64 {
        let mut p = x - f;
        self.project(&mut p);
        linalg::vec_inf_norm(&(x - p))
    }

    fn complementarity(&self, x: &DVector<f64>, f: &DVector<f64>) -> f64 {
        (0..x.len())
            .map(|i| match self.upper {
                Some(u) if f[i] < 0.0 => ((u[i] - x[i]) * f[i]).abs(),
                _ => (x[i] * f[i]).abs(),
            })
            .fold(0.0, f64::max)
    }

    /// Guess the active set from `x` and solve the reduced linear system exactly.
    fn polish(&self, x: &DVector<f64>, f: &DVector<f64>) -> Option<DVector<f64>> {
        let n = x.len();
        let mut fixed = DVector::zeros(n);
        let mut free = Vec::new();
        for i in 0..n {
            let step = x[i] - f[i];
            let hi = self.upper.map_or(f64::INFINITY, |u| u[i]);
            if step <= 0.0 {
                fixed[i] = 0.0;
            } else if step >= hi {
                fixed[i] = hi;
            } else {
                free.push(i);
            }
        }
        let mut out = fixed.clone();
        if !free.is_empty() {
            let k = free.len();
            let sub = DMatrix::from_fn(k, k, |r, c| self.m[(free[r], free[c])]);
            let rhs_full = self.a - &self.m * &fixed;
            let rhs = DVector::from_fn(k, |r, _| rhs_full[free[r]]);
            let sol = refined_solve(&sub, &rhs).ok()?;
            for (r, &i) in free.iter().enumerate() {
                out[i] = sol[r];
            }
        }
        Some(out)
    }
}

/// Nonnegativity-constrained equilibrium (`Mapping::Ne`) or social optimum
/// (`Mapping::Social`) as the solution of the variational inequality on the
/// orthant (or on `[0, upper]` when bounds are given).
pub fn solve_vi(game: &NetworkGame, which: Mapping, x0: &ActionProfile, opts: &ViOptions) -> Result<EquilibriumResult> {
    let n = game.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { what: "initial profile", expected: n, found: x0.len() });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if let Some(u) = &opts.upper {
        if u.len() != n {
            return Err(Error::DimensionMismatch { what: "upper bounds", expected: n, found: u.len() });
        }
        if u.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidConfig("upper bounds must be nonnegative".into()));
        }
    }

    let g_norm = linalg::inf_norm(game.g());
    let (m, kind, eta0) = match which {
        Mapping::Ne => (game.ne_matrix(), SolutionKind::ConstrainedNe, 1.0 / (1.0 + g_norm)),
        Mapping::Social => (game.social_matrix(), SolutionKind::ConstrainedSocial, 1.0 / (1.0 + 2.0 * g_norm)),
    };
    let vi = BoxVi { m, a: game.a(), upper: opts.upper.as_ref() };

    let mut x = x0.as_vector().clone();
    vi.project(&mut x);
    let mut f = vi.map(&x);
    let mut res = vi.natural_residual(&x, &f);
    let mut eta = eta0;
    let mut history: VecDeque<f64> = VecDeque::from([res]);
    let mut best = (res, x.clone());

    for iter in 0..opts.max_iters {
        if iter % 10 == 0 || res < 1e-6 {
            if let Some(p) = vi.polish(&x, &f) {
                let pf = vi.map(&p);
                let pres = vi.natural_residual(&p, &pf);
                let pcomp = vi.complementarity(&p, &pf);
                if pres <= opts.tol && pcomp <= opts.tol {
                    return Ok(EquilibriumResult::new(p, kind, pres, pcomp, iter));
                }
            }
        }
        let comp = vi.complementarity(&x, &f);
        if res <= opts.tol && comp <= opts.tol {
            return Ok(EquilibriumResult::new(x, kind, res, comp, iter));
        }

        // Nonmonotone acceptance against the worst of the last few residuals.
        let reference = history.iter().copied().fold(0.0, f64::max);
        loop {
            let mut cand = &x - eta * &f;
            vi.project(&mut cand);
            let cf = vi.map(&cand);
            let cres = vi.natural_residual(&cand, &cf);
            if cres < reference || cres == 0.0 {
                x = cand;
                f = cf;
                res = cres;
                break;
            }
            eta *= 0.5;
            if eta < eta0 * 1e-12 {
                return Err(Error::StepSelectionFailed { step: eta });
            }
        }
        history.push_back(res);
        if history.len() > 10 {
            history.pop_front();
        }
        if res < best.0 {
            best = (res, x.clone());
        }
    }

    Err(Error::MaxItersExceeded {
        iterations: opts.max_iters,
        residual: best.0,
        best: best.1.iter().copied().collect(),
    })
}

fn require_affine(game: &PublicGoodsGame) -> Result<(&DVector<f64>, &DVector<f64>)> {
    game.gamma().as_affine().ok_or(Error::AffineGammaRequired)
}

/// `‖(I+G)x − γ(θ + Gx)‖∞`
fn pg_ne_residual(game: &PublicGoodsGame, x: &DVector<f64>) -> Result<f64> {
    let profile = ActionProfile::new(x.clone());
    let z = game.aggregate(&profile)?;
    let demand = game.demand(&z)?;
    Ok(linalg::vec_inf_norm(&(x + z - demand)))
}

/// Public-goods Nash equilibrium `(I+G)x = γ(θ + Gx)`.
///
/// Affine demand gives the linear system `(I + (I−D)G)x = c + d⊙θ`; a custom
/// demand is handled by the fixed-point iteration `x ← (I+G)⁻¹γ(θ + Gx)`.
pub fn solve_ne_pg(game: &PublicGoodsGame, tol: f64) -> Result<EquilibriumResult> {
    solve_ne_pg_with(game, tol, DEFAULT_MAX_ITERS)
}

pub fn solve_ne_pg_with(game: &PublicGoodsGame, tol: f64, max_iters: usize) -> Result<EquilibriumResult> {
    let n = game.n();
    let g = game.g();
    match game.gamma() {
        GammaFamily::Affine { c, d } => {
            let dg = DMatrix::from_diagonal(d) * g;
            let m = DMatrix::identity(n, n) + g - dg;
            let rhs = c + d.component_mul(game.theta());
            let x = refined_solve(&m, &rhs)?;
            let res = pg_ne_residual(game, &x)?;
            Ok(EquilibriumResult::new(x, SolutionKind::PgNe, res, 0.0, 0))
        }
        GammaFamily::Custom(_) => {
            let lu = Factorized::new(&(DMatrix::identity(n, n) + g))?;
            let mut x = DVector::zeros(n);
            let mut res = f64::INFINITY;
            for iter in 0..max_iters {
                let demand = game.demand(&(g * &x))?;
                let next = lu.solve(&demand);
                let step = linalg::vec_inf_norm(&(&next - &x));
                x = next;
                if !x.iter().all(|v| v.is_finite()) {
                    break;
                }
                if step <= tol {
                    res = pg_ne_residual(game, &x)?;
                    if res <= tol {
                        return Ok(EquilibriumResult::new(x, SolutionKind::PgNe, res, 0.0, iter + 1));
                    }
                }
            }
            if res.is_infinite() && x.iter().all(|v| v.is_finite()) {
                res = pg_ne_residual(game, &x)?;
            }
            Err(Error::NoConvergence { iterations: max_iters, residual: res })
        }
    }
}

/// Gradient of the public-goods social cost:
/// `y + Gy + Gᵀy − γ − Gᵀ(γ′ ⊙ y)`, with `γ` and `γ′` evaluated at `θ + Gy`.
pub fn pg_social_gradient(game: &PublicGoodsGame, y: &ActionProfile) -> Result<DVector<f64>> {
    let g = game.g();
    let z = game.aggregate(y)?;
    let demand = game.demand(&z)?;
    let mut slope_y = DVector::zeros(game.n());
    for i in 0..game.n() {
        slope_y[i] = game.gamma().derivative(i, game.theta()[i] + z[i])? * y[i];
    }
    Ok(y.as_vector() + &z + g.tr_mul(y.as_vector()) - demand - g.tr_mul(&slope_y))
}

/// Social optimum of the public-goods game with affine demand.
///
/// Solves `(I + GᵀV + (I−D)G)y = c + d⊙θ` with `V = diag(1 − d)`.
pub fn solve_social_pg(game: &PublicGoodsGame, _tol: f64) -> Result<EquilibriumResult> {
    let (c, d) = require_affine(game)?;
    let n = game.n();
    let g = game.g();
    let v = DMatrix::from_diagonal(&d.map(|di| 1.0 - di));
    let m = DMatrix::identity(n, n) + g.transpose() * &v + &v * g;
    let rhs = c + d.component_mul(game.theta());
    let y = refined_solve(&m, &rhs)?;
    let res = linalg::vec_inf_norm(&pg_social_gradient(game, &ActionProfile::new(y.clone()))?);
    Ok(EquilibriumResult::new(y, SolutionKind::PgSocial, res, 0.0, 0))
}
