use lqnet::design::{necessary_condition_det, DEFAULT_RANK_TOL};
use lqnet::random_networks::{
    coincidence_feasibility_scan, sample_er, singularity_stats, study, write_csv, ErConfig, WeightLaw, CSV_HEADER,
};

#[test]
fn edge_density_matches_p() {
    let cfg = ErConfig::unit(60, 0.5, 20, 1);
    let edges: usize = sample_er(&cfg).unwrap().map(|g| g.matrix().iter().filter(|v| **v != 0.0).count()).sum();
    let density = edges as f64 / (20.0 * 60.0 * 59.0);
    assert!((density - 0.5).abs() < 0.03, "density {density}");
}

#[test]
fn samples_are_reproducible_and_independent_of_order() {
    let cfg = ErConfig { weights: WeightLaw::Gaussian { mu: 0.0, sigma: 1.0 }, ..ErConfig::unit(12, 0.4, 10, 42) };
    let all: Vec<_> = sample_er(&cfg).unwrap().collect();
    assert_eq!(cfg.sample(7), all[7]);
    assert_ne!(all[0], all[1]);
    let other = ErConfig { seed: 43, ..cfg.clone() };
    assert_ne!(other.sample(0), all[0]);
}

#[test]
fn undirected_samples_are_symmetric() {
    let cfg = ErConfig { directed: false, weights: WeightLaw::Uniform { lo: -1.0, hi: 1.0 }, ..ErConfig::unit(15, 0.3, 5, 3) };
    for g in sample_er(&cfg).unwrap() {
        assert!(g.is_symmetric(0.0));
        assert!(g.matrix().iter().all(|v| (-1.0..1.0).contains(v)));
    }
}

#[test]
fn very_sparse_sample_has_finite_spectrum() {
    // This sample once produced a NaN singular value.
    let g = ErConfig::unit(100, 0.001, 200, 9).sample(178);
    let check = necessary_condition_det(&g, DEFAULT_RANK_TOL);
    assert!(check.min_singular_value.is_finite() && check.max_singular_value.is_finite());
    assert!(check.singular);
}

#[test]
fn singularity_falls_with_size_at_fixed_p() {
    let small = singularity_stats(&ErConfig::unit(30, 0.05, 100, 5), DEFAULT_RANK_TOL).unwrap();
    let large = singularity_stats(&ErConfig::unit(100, 0.05, 100, 5), DEFAULT_RANK_TOL).unwrap();
    assert!(small.fraction_singular >= large.fraction_singular);
    assert!(small.fraction_singular > 0.9);
}

#[test]
fn coincidence_needs_singularity() {
    let cfg = ErConfig::unit(8, 0.2, 200, 8);
    let scan = coincidence_feasibility_scan(&cfg, &[1.0; 8], DEFAULT_RANK_TOL, 1e-8).unwrap();
    assert_eq!(scan.tested, 200);
    assert!(scan.coincident <= scan.singular);
    assert!(scan.coincident > 0);
}

#[test]
fn empty_networks_coincide_everywhere() {
    let cfg = ErConfig::unit(10, 1e-9, 30, 2);
    let scan = coincidence_feasibility_scan(&cfg, &[1.0; 10], DEFAULT_RANK_TOL, 1e-8).unwrap();
    assert_eq!((scan.singular, scan.coincident), (30, 30));
}

#[test]
fn invalid_configs() {
    assert!(singularity_stats(&ErConfig::unit(10, 1.5, 5, 0), DEFAULT_RANK_TOL).is_err());
    assert!(singularity_stats(&ErConfig::unit(10, 0.5, 0, 0), DEFAULT_RANK_TOL).is_err());
    let bad = ErConfig { weights: WeightLaw::Uniform { lo: 1.0, hi: 0.0 }, ..ErConfig::unit(5, 0.5, 5, 0) };
    assert!(sample_er(&bad).is_err());
    assert!(coincidence_feasibility_scan(&ErConfig::unit(5, 0.5, 5, 0), &[1.0; 4], 1e-10, 1e-8).is_err());
}

#[test]
fn csv_output() {
    let row = study(&ErConfig::unit(10, 0.2, 20, 4), DEFAULT_RANK_TOL, 1e-8).unwrap();
    let mut buf = Vec::new();
    write_csv(&[row], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&fields[..3], &["10", "0.2", "20"]);
}
