//! Game instances: adjacency matrices, linear-quadratic network games and the
//! public-goods variant with a demand family.
//!
//! Player `i` pays `½x_i² + (z_i(x) − a_i)·x_i` where `z(x) = G·x` is the
//! aggregate of its neighbours' actions. The public-goods game replaces the
//! constant `a_i` with a demand `γ_i(θ_i + z_i(x))`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Slack allowed when asserting that solver output is nonnegative.
pub const TOL_NONNEG: f64 = 1e-9;

/// Square matrix of edge weights with a zero diagonal.
///
/// `g[(i, j)]` is the influence of player `j`'s action on player `i`'s cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    g: DMatrix<f64>,
}

impl AdjacencyMatrix {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        if g.nrows() != g.ncols() {
            return Err(Error::DimensionMismatch {
                what: "adjacency columns",
                expected: g.nrows(),
                found: g.ncols(),
            });
        }
        if g.nrows() == 0 {
            return Err(Error::InvalidGame("adjacency matrix must have at least one player".into()));
        }
        if let Some(((i, j), v)) = g
            .iter()
            .enumerate()
            .map(|(k, v)| ((k % g.nrows(), k / g.nrows()), v))
            .find(|(_, v)| !v.is_finite())
        {
            return Err(Error::InvalidGame(format!("g[{i}][{j}] is not finite ({v})")));
        }
        if let Some(i) = (0..g.nrows()).find(|&i| g[(i, i)] != 0.0) {
            return Err(Error::InvalidGame(format!(
                "g[{i}][{i}] = {} but the diagonal must be zero",
                g[(i, i)]
            )));
        }
        Ok(Self { g })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidGame(format!(
                    "row {i} has {} entries, expected {n}",
                    r.len()
                )));
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        Self { g: DMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.g
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.g.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        crate::linalg::max_asymmetry(&self.g) <= tol
    }
}

/// A vector of scalar actions, one per player.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionProfile(DVector<f64>);

impl ActionProfile {
    pub fn new(x: DVector<f64>) -> Self {
        Self(x)
    }

    pub fn from_vec(x: Vec<f64>) -> Self {
        Self(DVector::from_vec(x))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when every action is at least `-tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.0.iter().all(|&v| v >= -tol)
    }

    pub fn norm2(&self) -> f64 {
        self.0.norm()
    }
}

impl std::ops::Index<usize> for ActionProfile {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for ActionProfile {
    fn from(v: Vec<f64>) -> Self {
        Self::from_vec(v)
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}

fn check_finite(what: &str, v: &DVector<f64>) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::InvalidGame(format!("{what}[{i}] is not finite"))),
        None => Ok(()),
    }
}

/// Shared behaviour of games played on an adjacency matrix.
pub trait Networked {
    fn adjacency(&self) -> &AdjacencyMatrix;

    fn n(&self) -> usize {
        self.adjacency().n()
    }

    /// `z = G·x`, the aggregate each player observes.
    fn aggregate(&self, x: &ActionProfile) -> Result<DVector<f64>> {
        check_len("action profile", self.n(), x.len())?;
        Ok(self.adjacency().matrix() * x.as_vector())
    }
}

/// Linear-quadratic network game.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGame {
    adjacency: AdjacencyMatrix,
    a: DVector<f64>,
}

impl Networked for NetworkGame {
    fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adjacency
    }
}

impl NetworkGame {
    pub fn new(adjacency: AdjacencyMatrix, a: DVector<f64>) -> Result<Self> {
        check_len("standalone benefits", adjacency.n(), a.len())?;
        check_finite("a", &a)?;
        Ok(Self { adjacency, a })
    }

    /// Convenience constructor from row vectors.
    pub fn from_rows(rows: &[Vec<f64>], a: &[f64]) -> Result<Self> {
        Self::new(AdjacencyMatrix::from_rows(rows)?, DVector::from_column_slice(a))
    }

    pub fn a(&self) -> &DVector<f64> {
        &self.a
    }

    pub fn g(&self) -> &DMatrix<f64> {
        self.adjacency.matrix()
    }

    /// Same benefits, different network.
    pub fn with_adjacency(&self, adjacency: AdjacencyMatrix) -> Result<Self> {
        Self::new(adjacency, self.a.clone())
    }

    /// Cost of player `i`: `½x_i² + (z_i − a_i)x_i`.
    pub fn cost(&self, i: usize, x: &ActionProfile) -> Result<f64> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        let z = self.aggregate(x)?;
        Ok(lq_cost(x[i], z[i], self.a[i]))
    }

    /// Sum of all players' costs.
    pub fn social_cost(&self, x: &ActionProfile) -> Result<f64> {
        let z = self.aggregate(x)?;
        Ok((0..self.n()).map(|i| lq_cost(x[i], z[i], self.a[i])).sum())
    }

    /// Nash first-order map `F(x) = (I + G)x − a`.
    pub fn grad_f(&self, x: &ActionProfile) -> Result<DVector<f64>> {
        let z = self.aggregate(x)?;
        Ok(x.as_vector() + z - &self.a)
    }

    /// Social first-order map `W(x) = (I + G + Gᵀ)x − a`.
    pub fn grad_w(&self, x: &ActionProfile) -> Result<DVector<f64>> {
        let f = self.grad_f(x)?;
        Ok(f + self.g().tr_mul(x.as_vector()))
    }

    /// `I + G`, the Nash system matrix.
    pub fn ne_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(self.n(), self.n()) + self.g()
    }

    /// `I + G + Gᵀ`, the social-optimum system matrix.
    pub fn social_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(self.n(), self.n()) + self.g() + self.g().transpose()
    }
}

#[inline]
fn lq_cost(x: f64, z: f64, a: f64) -> f64 {
    0.5 * x * x + (z - a) * x
}

/// User-supplied demand function for the public-goods game.
pub trait DemandFunction: Send + Sync + fmt::Debug {
    fn value(&self, player: usize, w: f64) -> std::result::Result<f64, String>;
    fn derivative(&self, player: usize, w: f64) -> std::result::Result<f64, String>;
}

/// Per-player demand functions `γ_i`.
#[derive(Debug, Clone)]
pub enum GammaFamily {
    /// `γ_i(w) = c_i + d_i·w`.
    Affine { c: DVector<f64>, d: DVector<f64> },
    Custom(Arc<dyn DemandFunction>),
}

impl GammaFamily {
    pub fn affine(c: Vec<f64>, d: Vec<f64>) -> Self {
        Self::Affine {
            c: DVector::from_vec(c),
            d: DVector::from_vec(d),
        }
    }

    pub fn value(&self, player: usize, w: f64) -> Result<f64> {
        match self {
            Self::Affine { c, d } => Ok(c[player] + d[player] * w),
            Self::Custom(f) => {
                let v = f
                    .value(player, w)
                    .map_err(|message| Error::Gamma { player, message })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Gamma { player, message: format!("non-finite value {v}") })
                }
            }
        }
    }

    pub fn derivative(&self, player: usize, w: f64) -> Result<f64> {
        match self {
            Self::Affine { d, .. } => Ok(d[player]),
            Self::Custom(f) => f
                .derivative(player, w)
                .map_err(|message| Error::Gamma { player, message }),
        }
    }

    pub fn as_affine(&self) -> Option<(&DVector<f64>, &DVector<f64>)> {
        match self {
            Self::Affine { c, d } => Some((c, d)),
            Self::Custom(_) => None,
        }
    }
}

/// Public-goods network game with incomes `θ` and demand family `γ`.
#[derive(Debug, Clone)]
pub struct PublicGoodsGame {
    adjacency: AdjacencyMatrix,
    theta: DVector<f64>,
    gamma: GammaFamily,
}

impl Networked for PublicGoodsGame {
    fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adjacency
    }
}

impl PublicGoodsGame {
    pub fn new(adjacency: AdjacencyMatrix, theta: DVector<f64>, gamma: GammaFamily) -> Result<Self> {
        let n = adjacency.n();
        check_len("incomes", n, theta.len())?;
        check_finite("theta", &theta)?;
        if let GammaFamily::Affine { c, d } = &gamma {
            check_len("demand intercepts", n, c.len())?;
            check_len("demand slopes", n, d.len())?;
            check_finite("gamma.c", c)?;
            check_finite("gamma.d", d)?;
        }
        Ok(Self { adjacency, theta, gamma })
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn gamma(&self) -> &GammaFamily {
        &self.gamma
    }

    pub fn g(&self) -> &DMatrix<f64> {
        self.adjacency.matrix()
    }

    /// `γ_i(θ_i + z_i)` for every player.
    pub fn demand(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.n());
        for i in 0..self.n() {
            out[i] = self.gamma.value(i, self.theta[i] + z[i])?;
        }
        Ok(out)
    }

    /// `½x_i² + (z_i − γ_i(θ_i + z_i))x_i`.
    pub fn cost(&self, i: usize, x: &ActionProfile) -> Result<f64> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        let z = self.aggregate(x)?;
        let demand = self.gamma.value(i, self.theta[i] + z[i])?;
        Ok(lq_cost(x[i], z[i], demand))
    }

    pub fn social_cost(&self, x: &ActionProfile) -> Result<f64> {
        let z = self.aggregate(x)?;
        let demand = self.demand(&z)?;
        Ok((0..self.n()).map(|i| lq_cost(x[i], z[i], demand[i])).sum())
    }
}
