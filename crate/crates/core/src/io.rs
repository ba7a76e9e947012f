//! Self-describing JSON documents for games, design problems and perturbation
//! patterns, plus the numeric formatting shared by every emitted report.
//!
//! Matrix indices in files are zero-based.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certificates::Certificate;
use crate::design::{DesignOutcome, DesignProblem, DesignSolution, FixedEntry};
use crate::equilibrium::EquilibriumResult;
use crate::error::{Error, Result};
use crate::game::{AdjacencyMatrix, GammaFamily, NetworkGame, PublicGoodsGame};
use crate::ir::IrReport;

/// Significant digits of every number in emitted reports.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Text form of a number rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        Value::Null
    }
}

fn nums<'a>(v: impl IntoIterator<Item = &'a f64>) -> Value {
    Value::Array(v.into_iter().map(|&x| num(x)).collect())
}

fn matrix_value(m: &DMatrix<f64>) -> Value {
    Value::Array(m.row_iter().map(|r| nums(r.iter())).collect())
}

fn format_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format { location: location.into(), message: message.into() }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| format_err(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format_err(path.display().to_string(), e.to_string()))
}

fn check_vec(field: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(format_err(field, format!("expected {n} entries, found {}", v.len())));
    }
    if let Some(k) = v.iter().position(|x| !x.is_finite()) {
        return Err(format_err(format!("{field}[{k}]"), "value is not finite"));
    }
    Ok(())
}

fn check_matrix(field: &str, rows: &[Vec<f64>], n: usize, zero_diagonal: bool) -> Result<DMatrix<f64>> {
    if rows.len() != n {
        return Err(format_err(field, format!("expected {n} rows, found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        check_vec(&format!("{field}[{i}]"), r, n)?;
        if zero_diagonal && r[i] != 0.0 {
            return Err(format_err(format!("{field}[{i}][{i}]"), format!("diagonal must be zero, found {}", r[i])));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// Game document: `n`, `g`, `a`, and optionally `theta`, `gamma` (affine
/// demand) and per-player `upper` bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub n: usize,
    pub g: Vec<Vec<f64>>,
    pub a: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
}

impl GameFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let file: Self = parse_json(text, source)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(format_err("n", "must be positive"));
        }
        check_matrix("g", &self.g, self.n, true)?;
        check_vec("a", &self.a, self.n)?;
        if let Some(theta) = &self.theta {
            check_vec("theta", theta, self.n)?;
        }
        if let Some(gamma) = &self.gamma {
            check_vec("gamma.c", &gamma.c, self.n)?;
            check_vec("gamma.d", &gamma.d, self.n)?;
        }
        if self.gamma.is_some() != self.theta.is_some() {
            return Err(format_err("gamma", "theta and gamma must be given together"));
        }
        if let Some(u) = &self.upper {
            check_vec("upper", u, self.n)?;
            if let Some(k) = u.iter().position(|&v| v < 0.0) {
                return Err(format_err(format!("upper[{k}]"), "bound must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn from_game(game: &NetworkGame) -> Self {
        Self {
            n: game.g().nrows(),
            g: game.g().row_iter().map(|r| r.iter().copied().collect()).collect(),
            a: game.a().iter().copied().collect(),
            theta: None,
            gamma: None,
            upper: None,
        }
    }

    pub fn adjacency(&self) -> Result<AdjacencyMatrix> {
        AdjacencyMatrix::new(check_matrix("g", &self.g, self.n, true)?)
    }

    pub fn network_game(&self) -> Result<NetworkGame> {
        NetworkGame::new(self.adjacency()?, DVector::from_column_slice(&self.a))
    }

    pub fn is_public_goods(&self) -> bool {
        self.gamma.is_some()
    }

    pub fn public_goods_game(&self) -> Result<Option<PublicGoodsGame>> {
        match (&self.theta, &self.gamma) {
            (Some(theta), Some(gamma)) => Ok(Some(PublicGoodsGame::new(
                self.adjacency()?,
                DVector::from_column_slice(theta),
                GammaFamily::affine(gamma.c.clone(), gamma.d.clone()),
            )?)),
            _ => Ok(None),
        }
    }

    pub fn upper(&self) -> Option<DVector<f64>> {
        self.upper.as_deref().map(DVector::from_column_slice)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game files always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| format_err(path.display().to_string(), e.to_string()))
    }
}

/// Design problem document: `n`, `a`, `fixed` entries `{i, j, value}` and
/// `free` positions `[i, j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub a: Vec<f64>,
    #[serde(default)]
    pub fixed: Vec<FixedEntry>,
    #[serde(default)]
    pub free: Vec<(usize, usize)>,
}

impl ProblemFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let file: Self = parse_json(text, source)?;
        check_vec("a", &file.a, file.n)?;
        file.problem().map_err(|e| format_err("fixed/free", e.to_string()))?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn problem(&self) -> Result<DesignProblem> {
        DesignProblem::new(self.a.clone(), self.fixed.clone(), self.free.clone())
    }

    pub fn from_problem(p: &DesignProblem) -> Self {
        Self { n: p.n(), a: p.a.iter().copied().collect(), fixed: p.fixed.clone(), free: p.free.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }
}

/// Perturbation direction document: `n` and an `n×n` `pattern` with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub n: usize,
    pub pattern: Vec<Vec<f64>>,
}

impl PatternFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let file: Self = parse_json(text, source)?;
        check_matrix("pattern", &file.pattern, file.n, true)?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        check_matrix("pattern", &self.pattern, self.n, true)
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self { n: m.nrows(), pattern: m.row_iter().map(|r| r.iter().copied().collect()).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pattern files always serialize")
    }
}

pub fn equilibrium_json(eq: &EquilibriumResult) -> Value {
    json!({
        "kind": eq.kind.to_string(),
        "x": nums(eq.x.as_vector().iter()),
        "stationarity_residual": num(eq.stationarity_residual),
        "complementarity_residual": num(eq.complementarity_residual),
        "interior": eq.interior,
        "iterations": eq.iterations,
    })
}

fn solution_json(s: &DesignSolution) -> Value {
    json!({
        "branch_id": s.branch_id,
        "g": matrix_value(s.adjacency.matrix()),
        "x": nums(s.x_star.as_vector().iter()),
        "residual_ne": num(s.residual_ne),
        "residual_orth": num(s.residual_orth),
    })
}

pub fn design_json(outcome: &DesignOutcome) -> Value {
    json!({
        "solutions": outcome.solutions.iter().map(solution_json).collect::<Vec<_>>(),
        "infeasible": outcome.infeasible.iter().map(solution_json).collect::<Vec<_>>(),
        "diagnostics": {
            "starts_run": outcome.starts_run,
            "converged": outcome.converged,
            "best_residual": num(outcome.best_residual),
        },
    })
}

pub fn certificates_json(certs: &[Certificate]) -> Value {
    json!({
        "certificates": certs.iter().map(|c| json!({
            "name": c.name.to_string(),
            "margin": num(c.margin),
            "holds": c.holds,
            "details": c.details.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<serde_json::Map<_, _>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn ir_json(report: &IrReport) -> Value {
    json!({
        "kind": report.kind.to_string(),
        "players": report.players.iter().enumerate().map(|(i, p)| json!({
            "player": i,
            "cost_at_eq": num(p.cost_at_eq),
            "cost_opt_out": num(p.cost_opt_out),
            "rational": p.rational,
        })).collect::<Vec<_>>(),
        "all_rational": report.all_rational(),
    })
}
