//! Social cost of an equilibrium along a line `G(δ) = G + δ·ΔG` of networks.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::certificates::cert_continuity;
use crate::equilibrium::{solve_ne_interior, solve_vi, Mapping, ViOptions};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, AdjacencyMatrix, NetworkGame, Networked, TOL_NONNEG};
use crate::io::format_number;
use crate::linalg;

pub const CSV_HEADER: &str = "delta,social_cost,feasible,min_x,spectral_margin";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSolver {
    /// Linear solve of `(I+G)x = a`; negative solutions are flagged infeasible.
    Interior,
    /// Projected VI solve on the orthant; always feasible.
    Constrained,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base_game: NetworkGame,
    pub delta_pattern: DMatrix<f64>,
    pub delta_grid: Vec<f64>,
    pub solver: SweepSolver,
    /// Per-player upper bounds, used by the constrained solver and for `Δ`.
    pub upper: Option<DVector<f64>>,
}

/// `steps` evenly spaced points from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let h = (to - from) / (steps - 1) as f64;
            (0..steps).map(|k| if k == steps - 1 { to } else { from + h * k as f64 }).collect()
        }
    }
}

/// 121 points on `[−0.6, 0.6]`.
pub fn default_grid() -> Vec<f64> {
    linspace(-0.6, 0.6, 121)
}

impl SweepConfig {
    pub fn new(base_game: NetworkGame, delta_pattern: DMatrix<f64>, delta_grid: Vec<f64>, solver: SweepSolver) -> Result<Self> {
        let cfg = Self { base_game, delta_pattern, delta_grid, solver, upper: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.base_game.n();
        if self.delta_pattern.shape() != (n, n) {
            return Err(Error::DimensionMismatch { what: "perturbation pattern", expected: n, found: self.delta_pattern.nrows() });
        }
        if (0..n).any(|i| self.delta_pattern[(i, i)] != 0.0) {
            return Err(Error::InvalidConfig("perturbation pattern must have a zero diagonal".into()));
        }
        if self.delta_pattern.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("perturbation pattern has non-finite entries".into()));
        }
        if self.delta_grid.is_empty() {
            return Err(Error::InvalidConfig("empty delta grid".into()));
        }
        if self.delta_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidConfig("delta grid must be strictly increasing".into()));
        }
        if let Some(u) = &self.upper {
            if u.len() != n {
                return Err(Error::DimensionMismatch { what: "upper bounds", expected: n, found: u.len() });
            }
        }
        Ok(())
    }

    pub fn game_at(&self, delta: f64) -> Result<NetworkGame> {
        let g = self.base_game.g() + &self.delta_pattern * delta;
        self.base_game.with_adjacency(AdjacencyMatrix::new(g)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Solved,
    Singular,
    /// The constrained solver hit its iteration or step limits.
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub status: RowStatus,
    pub x: Option<ActionProfile>,
    /// NaN unless solved.
    pub social_cost: f64,
    pub feasible: bool,
    pub min_x: f64,
    pub spectral_margin: f64,
    pub rowsum_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Max over adjacent feasible rows of `‖Δx‖₂ / ‖ΔG‖₂`.
    pub lipschitz_x: f64,
    /// Max over adjacent feasible rows of `|ΔC| / ‖ΔG‖₂`.
    pub lipschitz_cost: f64,
    /// `Δ`: norm of the upper bounds if given, else the largest `‖x‖₂` seen.
    pub delta_cap: f64,
    pattern_norm: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn solve_row(config: &SweepConfig, delta: f64) -> Result<SweepRow> {
    let game = config.game_at(delta)?;
    let (spectral, rowsum) = cert_continuity(game.adjacency());
    let mut row = SweepRow {
        delta,
        status: RowStatus::Solved,
        x: None,
        social_cost: f64::NAN,
        feasible: false,
        min_x: f64::NAN,
        spectral_margin: spectral.margin,
        rowsum_margin: rowsum.margin,
    };
    let solved = match config.solver {
        SweepSolver::Interior => solve_ne_interior(&game),
        SweepSolver::Constrained => {
            let opts = ViOptions { upper: config.upper.clone(), ..ViOptions::default() };
            solve_vi(&game, Mapping::Ne, &ActionProfile::zeros(game.n()), &opts)
        }
    };
    match solved {
        Ok(eq) => {
            row.social_cost = game.social_cost(&eq.x)?;
            row.min_x = eq.x.min();
            row.feasible = row.min_x >= -TOL_NONNEG;
            row.x = Some(eq.x);
        }
        Err(Error::SingularSystem { .. }) => row.status = RowStatus::Singular,
        Err(Error::MaxItersExceeded { .. } | Error::StepSelectionFailed { .. }) => row.status = RowStatus::Failed,
        Err(e) => return Err(e),
    }
    Ok(row)
}

impl SweepReport {
    fn assemble(rows: Vec<SweepRow>, pattern_norm: f64, upper: Option<&DVector<f64>>) -> Self {
        let mut lipschitz_x = 0.0_f64;
        let mut lipschitz_cost = 0.0_f64;
        for w in rows.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            if !(p.feasible && q.feasible) {
                continue;
            }
            let dg = (q.delta - p.delta) * pattern_norm;
            let (xp, xq) = (p.x.as_ref().unwrap(), q.x.as_ref().unwrap());
            lipschitz_x = lipschitz_x.max(ratio((xq.as_vector() - xp.as_vector()).norm(), dg));
            lipschitz_cost = lipschitz_cost.max(ratio((q.social_cost - p.social_cost).abs(), dg));
        }
        let delta_cap = match upper {
            Some(u) => u.norm(),
            None => rows
                .iter()
                .filter(|r| r.feasible)
                .filter_map(|r| r.x.as_ref().map(|x| x.norm2()))
                .fold(0.0, f64::max),
        };
        Self { rows, lipschitz_x, lipschitz_cost, delta_cap, pattern_norm }
    }

    /// Largest `|C(δ_{k+1}) − C(δ_k)|` over adjacent feasible rows.
    pub fn max_adjacent_cost_jump(&self) -> f64 {
        self.rows
            .windows(2)
            .filter(|w| w[0].feasible && w[1].feasible)
            .map(|w| (w[1].social_cost - w[0].social_cost).abs())
            .fold(0.0, f64::max)
    }

    /// The maximal run of consecutive feasible rows containing the row nearest `anchor`.
    pub fn feasible_run(&self, anchor: f64) -> Option<SweepReport> {
        let start = self
            .rows
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.delta - anchor).abs().total_cmp(&(b.1.delta - anchor).abs()))?
            .0;
        if !self.rows[start].feasible {
            return None;
        }
        let mut lo = start;
        while lo > 0 && self.rows[lo - 1].feasible {
            lo -= 1;
        }
        let mut hi = start;
        while hi + 1 < self.rows.len() && self.rows[hi + 1].feasible {
            hi += 1;
        }
        Some(Self::assemble(self.rows[lo..=hi].to_vec(), self.pattern_norm, None))
    }

    pub fn has_infeasible(&self) -> bool {
        self.rows.iter().any(|r| !r.feasible)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                format_number(r.delta),
                format_number(r.social_cost),
                r.feasible,
                format_number(r.min_x),
                format_number(r.spectral_margin)
            )?;
        }
        Ok(())
    }
}

/// Solve the game at every grid point. Singular or unsolved points are marked,
/// never fatal.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let rows = config
        .delta_grid
        .par_iter()
        .map(|&d| solve_row(config, d))
        .collect::<Result<Vec<_>>>()?;
    let pattern_norm = linalg::spectral_norm(&config.delta_pattern);
    Ok(SweepReport::assemble(rows, pattern_norm, config.upper.as_ref()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck {
    pub bounded: bool,
    pub max_ratio: f64,
}

/// Compare the empirical cost ratio against `k_cap·Δ`.
pub fn lipschitz_check(report: &SweepReport, k_cap: f64) -> Result<LipschitzCheck> {
    let pairs = report.rows.windows(2).filter(|w| w[0].feasible && w[1].feasible).count();
    if pairs == 0 {
        return Err(Error::InsufficientData("need two adjacent feasible rows".into()));
    }
    let max_ratio = report.lipschitz_cost;
    Ok(LipschitzCheck { bounded: max_ratio <= k_cap * report.delta_cap, max_ratio })
}
