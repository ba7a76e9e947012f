//! Dense helpers on top of nalgebra shared by the solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Systems whose reciprocal condition estimate falls below this are rejected.
pub const RCOND_MIN: f64 = 1e-12;

/// Maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute column sum.
pub fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let raw = |m: DMatrix<f64>| -> Option<Vec<f64>> {
        let sv: Vec<f64> = m.svd_unordered(false, false).singular_values.iter().copied().collect();
        sv.iter().all(|v| v.is_finite()).then_some(sv)
    };
    // The bidiagonal QR occasionally produces NaN on very sparse 0/1 matrices;
    // the transpose has the same spectrum and usually goes through.
    let mut sv = raw(m.clone())
        .or_else(|| raw(m.transpose()))
        .unwrap_or_else(|| {
            let gram = m.tr_mul(m);
            gram.symmetric_eigen().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect()
        });
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// LU factorisation with partial pivoting and a 1-norm reciprocal condition estimate.
pub struct Factorized {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    pub rcond: f64,
}

impl Factorized {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        let norm = one_norm(m);
        let lu = m.clone().lu();
        let rcond = match lu.try_inverse() {
            Some(inv) if norm > 0.0 => {
                let inv_norm = one_norm(&inv);
                if inv_norm.is_finite() && inv_norm > 0.0 {
                    1.0 / (norm * inv_norm)
                } else {
                    0.0
                }
            }
            _ => 0.0,
        };
        if !(rcond >= RCOND_MIN) {
            return Err(Error::SingularSystem { rcond });
        }
        Ok(Self { lu, rcond })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.lu
            .solve(b)
            .expect("factorization was checked to be nonsingular")
    }
}

/// Solves `m x = b`, rejecting numerically singular systems.
pub fn solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    Ok(Factorized::new(m)?.solve(b))
}

/// Determinant by LU; used for small principal minors.
pub fn determinant(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    m.clone().lu().determinant()
}

/// Minimum-norm least-squares solution of `j d = r` via SVD.
pub fn least_squares(j: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let eps = smax * 1e-13 * (j.nrows().max(j.ncols()) as f64);
    svd.solve(r, eps)
        .unwrap_or_else(|_| DVector::zeros(j.ncols()))
}
