#![allow(dead_code)]

use lqnet::{AdjacencyMatrix, NetworkGame};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Zero-diagonal matrix with entries uniform in `[-1, 1]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { rng.random_range(-1.0..1.0) })
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(lo..hi))
}

pub fn game(g: DMatrix<f64>, a: DVector<f64>) -> NetworkGame {
    NetworkGame::new(AdjacencyMatrix::new(g).unwrap(), a).unwrap()
}

pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows()).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Every solution of the LCP `x ≥ 0, Mx − a ≥ 0, xᵀ(Mx − a) = 0`, by
/// enumerating supports. Independent of the projected solver.
pub fn lcp_brute_force(m: &DMatrix<f64>, a: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = a.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).collect();
        let mut x = DVector::zeros(n);
        if !s.is_empty() {
            let sub = DMatrix::from_fn(s.len(), s.len(), |r, c| m[(s[r], s[c])]);
            let rhs = DVector::from_fn(s.len(), |r, _| a[s[r]]);
            let Some(sol) = sub.lu().solve(&rhs) else { continue };
            for (r, &k) in s.iter().enumerate() {
                x[k] = sol[r];
            }
        }
        let f = m * &x - a;
        let ok = (0..n).all(|k| if mask & (1 << k) != 0 { x[k] >= -1e-12 } else { f[k] >= -1e-12 });
        if ok && !out.iter().any(|y: &DVector<f64>| (y - &x).amax() < 1e-9) {
            out.push(x);
        }
    }
    out
}
