//! Monte-Carlo study of singularity on Erdős–Rényi adjacency matrices.
//!
//! A coincident nonzero equilibrium needs a singular `G`, so the fraction of
//! singular samples bounds how often a random network can be designed for it.
//! Every sample draws from its own ChaCha stream keyed by `(seed, index)`, so
//! parallel and serial runs agree exactly.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::design::{check_coincidence, necessary_condition_det};
use crate::error::{Error, Result};
use crate::game::{AdjacencyMatrix, NetworkGame};
use crate::io::format_number;

pub const CSV_HEADER: &str = "n,p,samples,fraction_singular,mean_min_sv,coincident";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightLaw {
    Unit,
    Uniform { lo: f64, hi: f64 },
    Gaussian { mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErConfig {
    pub n: usize,
    pub p: f64,
    pub weights: WeightLaw,
    pub directed: bool,
    pub samples: usize,
    pub seed: u64,
}

impl ErConfig {
    pub fn unit(n: usize, p: f64, samples: usize, seed: u64) -> Self {
        Self { n, p, weights: WeightLaw::Unit, directed: true, samples, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidConfig(format!("edge probability must lie in (0, 1), got {}", self.p)));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("need at least one sample".into()));
        }
        match self.weights {
            WeightLaw::Uniform { lo, hi } if !(lo < hi && lo.is_finite() && hi.is_finite()) => {
                Err(Error::InvalidConfig(format!("invalid uniform weight range [{lo}, {hi})")))
            }
            WeightLaw::Gaussian { mu, sigma } if !(sigma > 0.0 && mu.is_finite() && sigma.is_finite()) => {
                Err(Error::InvalidConfig(format!("invalid gaussian weights N({mu}, {sigma}²)")))
            }
            _ => Ok(()),
        }
    }

    /// The `index`-th sample; independent of every other index.
    pub fn sample(&self, index: usize) -> AdjacencyMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let normal = match self.weights {
            WeightLaw::Gaussian { mu, sigma } => Normal::new(mu, sigma).ok(),
            _ => None,
        };
        let weight = |rng: &mut ChaCha8Rng| match (self.weights, &normal) {
            (WeightLaw::Unit, _) => 1.0,
            (WeightLaw::Uniform { lo, hi }, _) => rng.random_range(lo..hi),
            (WeightLaw::Gaussian { .. }, Some(d)) => d.sample(rng),
            (WeightLaw::Gaussian { mu, .. }, None) => mu,
        };
        let n = self.n;
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            let cols = if self.directed { 0..n } else { (i + 1)..n };
            for j in cols {
                if i == j || !rng.random_bool(self.p) {
                    continue;
                }
                let w = weight(&mut rng);
                g[(i, j)] = w;
                if !self.directed {
                    g[(j, i)] = w;
                }
            }
        }
        AdjacencyMatrix::new(g).expect("sampled matrices have a zero diagonal")
    }
}

/// All samples of `config`, in index order.
pub fn sample_er(config: &ErConfig) -> Result<impl Iterator<Item = AdjacencyMatrix> + '_> {
    config.validate()?;
    Ok((0..config.samples).map(move |k| config.sample(k)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityStats {
    pub samples: usize,
    pub fraction_singular: f64,
    pub mean_min_sv: f64,
}

pub fn singularity_stats(config: &ErConfig, rank_tol: f64) -> Result<SingularityStats> {
    config.validate()?;
    let per_sample: Vec<(bool, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|k| {
            let check = necessary_condition_det(&config.sample(k), rank_tol);
            (check.singular, check.min_singular_value)
        })
        .collect();
    let singular = per_sample.iter().filter(|s| s.0).count();
    let mean = per_sample.iter().map(|s| s.1).sum::<f64>() / config.samples as f64;
    Ok(SingularityStats {
        samples: config.samples,
        fraction_singular: singular as f64 / config.samples as f64,
        mean_min_sv: mean,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanCounts {
    pub tested: usize,
    pub singular: usize,
    pub coincident: usize,
}

/// How many samples are singular, and how many make the equilibrium for
/// benefits `a` coincide with the social optimum. Samples where `I+G` is
/// singular count as not coincident.
pub fn coincidence_feasibility_scan(config: &ErConfig, a: &[f64], rank_tol: f64, tol: f64) -> Result<ScanCounts> {
    config.validate()?;
    if a.len() != config.n {
        return Err(Error::DimensionMismatch { what: "benefit vector", expected: config.n, found: a.len() });
    }
    let a = DVector::from_column_slice(a);
    let flags: Vec<(bool, bool)> = (0..config.samples)
        .into_par_iter()
        .map(|k| {
            let g = config.sample(k);
            let singular = necessary_condition_det(&g, rank_tol).singular;
            let game = NetworkGame::new(g, a.clone()).expect("dimensions checked");
            let coincident = check_coincidence(&game, tol).map(|c| c.holds).unwrap_or(false);
            (singular, coincident)
        })
        .collect();
    Ok(ScanCounts {
        tested: flags.len(),
        singular: flags.iter().filter(|f| f.0).count(),
        coincident: flags.iter().filter(|f| f.1).count(),
    })
}

/// One CSV row of the random-network study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub p: f64,
    pub stats: SingularityStats,
    pub coincident: usize,
}

/// Singularity statistics plus the coincidence count for the all-ones benefit vector.
pub fn study(config: &ErConfig, rank_tol: f64, tol: f64) -> Result<StudyRow> {
    let stats = singularity_stats(config, rank_tol)?;
    let scan = coincidence_feasibility_scan(config, &vec![1.0; config.n], rank_tol, tol)?;
    Ok(StudyRow { n: config.n, p: config.p, stats, coincident: scan.coincident })
}

pub fn write_csv<W: Write>(rows: &[StudyRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            format_number(r.p),
            r.stats.samples,
            format_number(r.stats.fraction_singular),
            format_number(r.stats.mean_min_sv),
            r.coincident
        )?;
    }
    Ok(())
}
