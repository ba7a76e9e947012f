//! Sufficient conditions on `G` for a unique coincident equilibrium and for
//! continuity of the social cost. A failing certificate says nothing about
//! non-uniqueness.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::AdjacencyMatrix;
use crate::linalg;

/// Largest order accepted by the principal-minor enumeration.
pub const MAX_P_MATRIX_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateName {
    Prop1StrongMonotone,
    Prop2BlockP,
    GammaPMatrix,
    Gershgorin,
    ContinuitySpectral,
    ContinuityRowsum,
}

impl fmt::Display for CertificateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Prop1StrongMonotone => "prop1-strong-monotone",
            Self::Prop2BlockP => "prop2-block-p",
            Self::GammaPMatrix => "gamma-p-matrix",
            Self::Gershgorin => "gershgorin",
            Self::ContinuitySpectral => "continuity-spectral",
            Self::ContinuityRowsum => "continuity-rowsum",
        })
    }
}

/// A named sufficient condition; `holds` iff `margin > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub name: CertificateName,
    pub margin: f64,
    pub holds: bool,
    pub details: BTreeMap<String, f64>,
}

impl Certificate {
    fn new(name: CertificateName, margin: f64, details: &[(&str, f64)]) -> Self {
        Self {
            name,
            margin,
            holds: margin > 0.0,
            details: details.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Strong monotonicity of `F + W`: margin `2 − 3‖G‖₂`.
///
/// The details also carry `λ_min(3(G+Gᵀ)/2)` and the sharper bound `2 + λ_min`.
pub fn cert_strong_monotone(g: &AdjacencyMatrix) -> Certificate {
    let m = g.matrix();
    let sigma = linalg::spectral_norm(m);
    let lambda = linalg::min_symmetric_eigenvalue(&((m + m.transpose()) * 1.5));
    Certificate::new(
        CertificateName::Prop1StrongMonotone,
        2.0 - 3.0 * sigma,
        &[("sigma_max", sigma), ("lambda_min_sym", lambda), ("sharp_bound", 2.0 + lambda)],
    )
}

/// Uniform block-P condition: margin `2 − (2‖G‖∞ + ‖G‖₁)`.
pub fn cert_block_p(g: &AdjacencyMatrix) -> Certificate {
    let inf = linalg::inf_norm(g.matrix());
    let one = linalg::one_norm(g.matrix());
    Certificate::new(
        CertificateName::Prop2BlockP,
        2.0 - (2.0 * inf + one),
        &[("inf_norm", inf), ("one_norm", one)],
    )
}

/// Z-matrix with diagonal 2 and off-diagonal `−|2g_ij + g_ji|`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix(DMatrix<f64>);

impl GammaMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub fn build_gamma_matrix(g: &AdjacencyMatrix) -> GammaMatrix {
    let m = g.matrix();
    let n = g.n();
    GammaMatrix(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else {
            -(2.0 * m[(i, j)] + m[(j, i)]).abs()
        }
    }))
}

fn principal_minor(m: &DMatrix<f64>, mask: u32) -> f64 {
    let idx: Vec<usize> = (0..m.nrows()).filter(|&k| mask & (1 << k) != 0).collect();
    let k = idx.len();
    linalg::determinant(&DMatrix::from_fn(k, k, |r, c| m[(idx[r], idx[c])]))
}

fn check_p_order(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { what: "square matrix", expected: m.nrows(), found: m.ncols() });
    }
    if m.nrows() > MAX_P_MATRIX_ORDER {
        return Err(Error::TooLarge { n: m.nrows(), max: MAX_P_MATRIX_ORDER });
    }
    Ok(())
}

/// Smallest determinant over all nonempty principal submatrices.
pub fn min_principal_minor(m: &DMatrix<f64>) -> Result<f64> {
    check_p_order(m)?;
    let count: u32 = 1 << m.nrows();
    Ok((1..count)
        .into_par_iter()
        .map(|mask| principal_minor(m, mask))
        .reduce(|| f64::INFINITY, f64::min))
}

/// True iff every principal minor of `m` is strictly positive.
pub fn p_matrix_check(m: &DMatrix<f64>) -> Result<bool> {
    check_p_order(m)?;
    let count: u32 = 1 << m.nrows();
    Ok((1..count).into_par_iter().all(|mask| principal_minor(m, mask) > 0.0))
}

/// P-matrix test on `Γ`; margin is the smallest principal minor.
pub fn cert_gamma_p(g: &AdjacencyMatrix) -> Result<Certificate> {
    let gamma = build_gamma_matrix(g);
    let min = min_principal_minor(gamma.matrix())?;
    Ok(Certificate::new(CertificateName::GammaPMatrix, min, &[("min_principal_minor", min)]))
}

/// Gershgorin bound for `Γ`: margin `2 − ‖2G + Gᵀ‖∞`.
pub fn cert_gershgorin(g: &AdjacencyMatrix) -> Certificate {
    let m = g.matrix();
    let norm = linalg::inf_norm(&(m * 2.0 + m.transpose()));
    Certificate::new(CertificateName::Gershgorin, 2.0 - norm, &[("inf_norm_2g_plus_gt", norm)])
}

/// Continuity of the social cost: margins `1 − ‖G‖₂` and `1 − ‖G‖∞`.
pub fn cert_continuity(g: &AdjacencyMatrix) -> (Certificate, Certificate) {
    let sigma = linalg::spectral_norm(g.matrix());
    let inf = linalg::inf_norm(g.matrix());
    (
        Certificate::new(CertificateName::ContinuitySpectral, 1.0 - sigma, &[("sigma_max", sigma)]),
        Certificate::new(CertificateName::ContinuityRowsum, 1.0 - inf, &[("inf_norm", inf)]),
    )
}

/// All six certificates. For networks too large for the minor enumeration
/// the `gamma-p-matrix` entry has a NaN margin and does not hold.
pub fn certify_all(g: &AdjacencyMatrix) -> Vec<Certificate> {
    let gamma = cert_gamma_p(g).unwrap_or_else(|_| {
        Certificate::new(CertificateName::GammaPMatrix, f64::NAN, &[("skipped_order", g.n() as f64)])
    });
    let (spectral, rowsum) = cert_continuity(g);
    vec![cert_strong_monotone(g), cert_block_p(g), gamma, cert_gershgorin(g), spectral, rowsum]
}

/// Checks three facts about a symmetric matrix `A` numerically:
/// `A − λ_min·I ⪰ 0`, `|λ_min| ≤ ‖A‖₂`, and `λ_min(αI + A) = α + λ_min(A)`.
pub fn spectral_facts_selftest(a: &DMatrix<f64>) -> Result<bool> {
    const TOL: f64 = 1e-10;
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { what: "square matrix", expected: a.nrows(), found: a.ncols() });
    }
    let asym = linalg::max_asymmetry(a);
    if asym > 1e-12 {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let lambda = linalg::min_symmetric_eigenvalue(a);
    let shifted_ok = linalg::min_symmetric_eigenvalue(&(a - &eye * lambda)) >= -TOL;
    let radius_ok = lambda.abs() <= linalg::spectral_norm(a) + TOL;
    let shift_ok = [-1.0, 0.5, 2.0]
        .iter()
        .all(|&alpha| (linalg::min_symmetric_eigenvalue(&(&eye * alpha + a)) - (alpha + lambda)).abs() <= TOL);
    Ok(shifted_ok && radius_ok && shift_ok)
}
