//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lqnet::certificates::{cert_block_p, cert_gamma_p, cert_gershgorin, cert_strong_monotone, spectral_facts_selftest};
use lqnet::design::{check_coincidence, design_solve, necessary_condition_det, symmetric_design, DesignOptions, DesignProblem, DEFAULT_RANK_TOL};
use lqnet::equilibrium::{solve_ne_interior, solve_social_interior, solve_vi, EquilibriumResult, Mapping, ViOptions};
use lqnet::instances;
use lqnet::ir::ir_check;
use lqnet::perturbation::{linspace, sweep, SweepConfig, SweepSolver};
use lqnet::random_networks::{coincidence_feasibility_scan, singularity_stats, ErConfig};
use lqnet::{ActionProfile, AdjacencyMatrix, NetworkGame, Networked};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

/// Nash results gathered from every criterion, audited by criterion 8.
#[derive(Default)]
struct Ledger {
    equilibria: Vec<(NetworkGame, EquilibriumResult)>,
}

impl Ledger {
    fn keep(&mut self, game: &NetworkGame, eq: &EquilibriumResult) {
        if eq.kind.is_nash() {
            self.equilibria.push((game.clone(), eq.clone()));
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sup(v: &DVector<f64>) -> f64 {
    v.amax()
}

fn c1_three_player_regression(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let game = instances::three_player_game();
    let eq = solve_ne_interior(&game).map_err(|e| e.to_string())?;
    let coin = check_coincidence(&game, 5e-3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want = DVector::from_column_slice(&instances::THREE_PLAYER_X);
    let dx = sup(&(eq.x.as_vector() - &want));
    check(dx <= 1e-3, || format!("|x - reference| = {dx:.3e}"))?;
    check(coin.residual_orth <= 5e-3, || format!("residual_orth = {:.3e}", coin.residual_orth))?;
    check(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"))?;
    ledger.keep(&game, &eq);
    Ok(format!("|x - reference| = {dx:.2e}, residual_orth = {:.2e}, {elapsed:?}", coin.residual_orth))
}

fn c2_design_recovery(ledger: &mut Ledger) -> Outcome {
    let problem = instances::three_player_problem();
    let target = instances::THREE_PLAYER_FREE_VALUES;
    let a = DVector::from_column_slice(&instances::THREE_PLAYER_A);
    let mut worst_time = Duration::ZERO;
    let mut worst_rel = 0.0_f64;
    let mut worst_abs = 0.0_f64;
    for seed in 0..8 {
        let opts = DesignOptions { seed, ..DesignOptions::default() };
        let start = Instant::now();
        let out = design_solve(&problem, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        let elapsed = start.elapsed();
        worst_time = worst_time.max(elapsed);
        check(elapsed < Duration::from_secs(10), || format!("seed {seed} took {elapsed:?}"))?;
        check(out.solutions.iter().any(|s| s.residual() <= 1e-8), || format!("seed {seed}: no branch with residual <= 1e-8"))?;

        // Distance of each branch to the reference entries, absolute and relative
        // to max(1, |reference|), since the reference values carry ~6 significant digits.
        let matched = out.solutions.iter().filter(|s| s.residual() <= 1e-8).find_map(|s| {
            let (mut abs, mut rel) = (0.0_f64, 0.0_f64);
            for (&(i, j), &t) in problem.free.iter().zip(&target) {
                let d = (s.adjacency.matrix()[(i, j)] - t).abs();
                abs = abs.max(d);
                rel = rel.max(d / t.abs().max(1.0));
            }
            (rel <= 1e-3).then_some((s, abs, rel))
        });
        let (sol, abs, rel) = matched.ok_or_else(|| format!("seed {seed}: no branch within 1e-3 of the reference values"))?;
        worst_abs = worst_abs.max(abs);
        worst_rel = worst_rel.max(rel);
        let det = necessary_condition_det(&sol.adjacency, DEFAULT_RANK_TOL);
        check(det.singular, || format!("seed {seed}: recovered G not singular (min sv {:.2e})", det.min_singular_value))?;
        let game = sol.game(&a).map_err(|e| e.to_string())?;
        let eq = solve_ne_interior(&game).map_err(|e| e.to_string())?;
        ledger.keep(&game, &eq);
    }
    Ok(format!(
        "8 seeds, max deviation {worst_abs:.2e} abs / {worst_rel:.2e} rel, slowest {worst_time:?}"
    ))
}

fn c3_two_player_impossibility(ledger: &mut Ledger) -> Outcome {
    let mut rng = common::rng(3);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let g: f64 = rng.random_range(-2.0..2.0);
        if g.abs() >= 0.05 {
            return g;
        }
    };
    let mut designs = 0;
    for k in 0..1000 {
        let (g12, g21) = (draw(&mut rng), draw(&mut rng));
        let a = [rng.random_range(0.1..2.0), rng.random_range(0.1..2.0)];
        let game = NetworkGame::from_rows(&[vec![0.0, g12], vec![g21, 0.0]], &a).map_err(|e| e.to_string())?;
        // A singular I+G has no interior equilibrium at all.
        if let Ok(c) = check_coincidence(&game, 1e-8) {
            check(!c.holds, || format!("game {k} coincides: g12 = {g12}, g21 = {g21}"))?;
            if let Ok(eq) = solve_ne_interior(&game) {
                ledger.keep(&game, &eq);
            }
        }
        if k % 10 == 0 {
            let problem = DesignProblem::new(a.to_vec(), vec![], vec![(0, 1), (1, 0)]).map_err(|e| e.to_string())?;
            let out = design_solve(&problem, &DesignOptions { seed: k, starts: 16, ..DesignOptions::default() })
                .map_err(|e| e.to_string())?;
            for s in out.solutions.iter().chain(&out.infeasible) {
                let m = s.adjacency.matrix();
                let prod = (m[(0, 1)] * m[(1, 0)]).abs();
                check(prod <= 1e-6, || format!("design {k}: |g12 g21| = {prod:.3e}"))?;
            }
            designs += 1;
        }
    }
    Ok(format!("1000 games never coincide, {designs} free designs all have |g12 g21| <= 1e-6"))
}

fn c4_symmetric_design(ledger: &mut Ledger) -> Outcome {
    let mut worst_ga = 0.0_f64;
    let mut worst_cost = 0.0_f64;
    for seed in 0..100u64 {
        let n = 4 + (seed % 5) as usize;
        let a = vec![1.0; n];
        let sol = symmetric_design(&a, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let av = DVector::from_element(n, 1.0);
        let ga = sup(&(sol.adjacency.matrix() * &av));
        worst_ga = worst_ga.max(ga);
        check(ga <= 1e-12, || format!("seed {seed}: |Ga| = {ga:.3e}"))?;
        check(sol.x_star.as_vector() == &av, || format!("seed {seed}: x* != a"))?;
        check(sol.adjacency.is_symmetric(0.0), || format!("seed {seed}: not symmetric"))?;

        let game = sol.game(&av).map_err(|e| e.to_string())?;
        let ne = solve_ne_interior(&game).map_err(|e| e.to_string())?;
        let so = solve_social_interior(&game).map_err(|e| e.to_string())?;
        let c_ne = game.social_cost(&ne.x).map_err(|e| e.to_string())?;
        let c_so = game.social_cost(&so.x).map_err(|e| e.to_string())?;
        let rel = (c_ne - c_so).abs() / c_so.abs().max(1.0);
        worst_cost = worst_cost.max(rel);
        check(rel <= 1e-12, || format!("seed {seed}: cost gap {rel:.3e}"))?;
        ledger.keep(&game, &ne);
    }
    Ok(format!("100 designs, max |Ga| = {worst_ga:.2e}, max relative cost gap = {worst_cost:.2e}"))
}

/// Random zero-diagonal matrix rescaled so that `measure` equals a random
/// target below `cap`.
fn scaled_matrix(
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    cap: f64,
    measure: impl Fn(&DMatrix<f64>) -> f64,
) -> DMatrix<f64> {
    loop {
        let g = common::random_matrix(rng, n);
        let m = measure(&g);
        if m > 1e-6 {
            let target = rng.random_range(0.05..cap);
            return g * (target / m);
        }
    }
}

fn starts_agree(game: &NetworkGame, rng: &mut rand_chacha::ChaCha8Rng, ledger: &mut Ledger) -> Result<f64, String> {
    let n = game.n();
    let oracle = common::lcp_brute_force(&game.ne_matrix(), game.a());
    check(oracle.len() == 1, || format!("brute force found {} solutions", oracle.len()))?;
    let mut spread = 0.0_f64;
    for _ in 0..10 {
        let x0 = ActionProfile::new(common::random_vector(rng, n, 0.0, 5.0));
        let eq = solve_vi(game, Mapping::Ne, &x0, &ViOptions::default()).map_err(|e| e.to_string())?;
        spread = spread.max(sup(&(eq.x.as_vector() - &oracle[0])));
        ledger.keep(game, &eq);
    }
    check(spread <= 1e-6, || format!("starts disagree by {spread:.3e}"))?;
    Ok(spread)
}

fn c5_certificates(ledger: &mut Ledger) -> Outcome {
    let mut rng = common::rng(5);
    let mut spread = 0.0_f64;
    for k in 0..50 {
        let n = rng.random_range(2..=6);
        let g = scaled_matrix(&mut rng, n, 2.0 / 3.0, lqnet::linalg::spectral_norm);
        let adj = AdjacencyMatrix::new(g).map_err(|e| e.to_string())?;
        check(cert_strong_monotone(&adj).holds, || format!("monotone instance {k} fails its certificate"))?;
        let game = NetworkGame::new(adj, common::random_vector(&mut rng, n, -1.0, 2.0)).map_err(|e| e.to_string())?;
        spread = spread.max(starts_agree(&game, &mut rng, ledger).map_err(|e| format!("monotone {k}: {e}"))?);
    }
    for k in 0..50 {
        let n = rng.random_range(2..=6);
        let g = scaled_matrix(&mut rng, n, 2.0, |m| 2.0 * lqnet::linalg::inf_norm(m) + lqnet::linalg::one_norm(m));
        let adj = AdjacencyMatrix::new(g).map_err(|e| e.to_string())?;
        check(cert_block_p(&adj).holds, || format!("block-p instance {k} fails its certificate"))?;
        let game = NetworkGame::new(adj, common::random_vector(&mut rng, n, -1.0, 2.0)).map_err(|e| e.to_string())?;
        spread = spread.max(starts_agree(&game, &mut rng, ledger).map_err(|e| format!("block-p {k}: {e}"))?);
    }

    let (mut bp, mut gers, mut gamma) = (0, 0, 0);
    for k in 0..500 {
        let n = rng.random_range(2..=7);
        let scale = rng.random_range(0.0..1.2);
        let adj = AdjacencyMatrix::new(common::random_matrix(&mut rng, n) * scale).map_err(|e| e.to_string())?;
        let b = cert_block_p(&adj).holds;
        let g = cert_gershgorin(&adj).holds;
        let p = cert_gamma_p(&adj).map_err(|e| e.to_string())?.holds;
        check(!b || g, || format!("matrix {k}: block-p holds but gershgorin fails"))?;
        check(!g || p, || format!("matrix {k}: gershgorin holds but gamma is not a P-matrix"))?;
        bp += b as usize;
        gers += g as usize;
        gamma += p as usize;
    }
    Ok(format!(
        "100 games agree within {spread:.2e}; chain on 500 matrices ({bp} block-p, {gers} gershgorin, {gamma} P)"
    ))
}

fn c6_oracle_equivalence(ledger: &mut Ledger) -> Outcome {
    let mut rng = common::rng(6);
    let (mut interior, mut boundary) = (0, 0);
    for k in 0..100 {
        let n = rng.random_range(2..=8);
        let g = scaled_matrix(&mut rng, n, 0.4, lqnet::linalg::inf_norm);
        let game = common::game(g, common::random_vector(&mut rng, n, 0.5, 2.0));
        let vi = solve_vi(&game, Mapping::Ne, &ActionProfile::zeros(n), &ViOptions::default()).map_err(|e| e.to_string())?;
        let int = solve_ne_interior(&game).map_err(|e| e.to_string())?;
        if int.x.is_nonnegative(0.0) {
            let d = sup(&(vi.x.as_vector() - int.x.as_vector()));
            check(d <= 1e-8, || format!("game {k}: VI and interior differ by {d:.3e}"))?;
            interior += 1;
            ledger.keep(&game, &int);
        } else {
            check(vi.complementarity_residual <= 1e-10, || {
                format!("game {k}: complementarity {:.3e}", vi.complementarity_residual)
            })?;
            boundary += 1;
        }
        ledger.keep(&game, &vi);
    }
    Ok(format!("{interior} interior matches, {boundary} boundary cases"))
}

fn c7_continuity(ledger: &mut Ledger) -> Outcome {
    let game = instances::four_node_game();
    let run = |steps: usize| -> Result<_, String> {
        let cfg = SweepConfig::new(game.clone(), instances::four_node_pattern(), linspace(-0.6, 0.6, steps), SweepSolver::Interior)
            .map_err(|e| e.to_string())?;
        sweep(&cfg).map_err(|e| e.to_string())
    };
    let coarse = run(121)?;
    let fine = run(1201)?;
    check(coarse.has_infeasible(), || "no infeasible regime in [-0.6, 0.6]".into())?;
    let c = coarse.feasible_run(0.0).ok_or("delta = 0 infeasible")?;
    let f = fine.feasible_run(0.0).ok_or("delta = 0 infeasible")?;
    let (jc, jf) = (c.max_adjacent_cost_jump(), f.max_adjacent_cost_jump());
    let ratio = jc / jf;
    check(ratio >= 5.0, || format!("jump ratio {ratio:.2}"))?;
    let first_bad = coarse.rows.iter().filter(|r| !r.feasible).map(|r| r.delta).fold(f64::NAN, |m, d| if d.abs() < m.abs() || m.is_nan() { d } else { m });

    for r in c.rows.iter().filter(|r| r.x.is_some()) {
        let g = SweepConfig::new(game.clone(), instances::four_node_pattern(), vec![r.delta], SweepSolver::Interior)
            .and_then(|cfg| cfg.game_at(r.delta))
            .map_err(|e| e.to_string())?;
        if let Ok(eq) = solve_ne_interior(&g) {
            ledger.keep(&g, &eq);
        }
    }
    Ok(format!(
        "max jump {jc:.3e} -> {jf:.3e} (x{ratio:.1}), feasible run [{:.2}, {:.2}], infeasible nearest 0 at {first_bad:.2}",
        c.rows[0].delta,
        c.rows[c.rows.len() - 1].delta
    ))
}

fn c8_individual_rationality(ledger: &Ledger) -> Outcome {
    let mut players = 0;
    for (k, (game, eq)) in ledger.equilibria.iter().enumerate() {
        let rep = ir_check(game, eq, 1e-8).map_err(|e| format!("equilibrium {k} ({}): {e}", eq.kind))?;
        check(rep.all_rational(), || format!("equilibrium {k} ({}) has a player with positive cost", eq.kind))?;
        for (i, p) in rep.players.iter().enumerate() {
            let xi = eq.x[i];
            let gap = (p.cost_at_eq + 0.5 * xi * xi).abs();
            check(gap <= 1e-9 * xi.abs().max(1.0), || format!("equilibrium {k}, player {i}: identity gap {gap:.3e}"))?;
        }
        players += rep.players.len();
    }
    Ok(format!("{} equilibria, {players} players, all costs <= 0", ledger.equilibria.len()))
}

fn c9_random_networks() -> Outcome {
    let start = Instant::now();
    let dense = ErConfig::unit(100, 0.3, 200, 9);
    let stats = singularity_stats(&dense, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
    let scan = coincidence_feasibility_scan(&dense, &[1.0; 100], DEFAULT_RANK_TOL, 1e-8).map_err(|e| e.to_string())?;
    let sparse = ErConfig::unit(100, 0.001, 200, 9);
    let sparse_stats = singularity_stats(&sparse, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(stats.fraction_singular <= 0.01, || format!("p = 0.3 singular fraction {}", stats.fraction_singular))?;
    check(scan.coincident == 0, || format!("p = 0.3 coincident {}", scan.coincident))?;
    check(sparse_stats.fraction_singular >= 0.99, || format!("p = 0.001 singular fraction {}", sparse_stats.fraction_singular))?;
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "p=0.3: singular {:.3}, coincident {}; p=0.001: singular {:.3}; {elapsed:?}",
        stats.fraction_singular, scan.coincident, sparse_stats.fraction_singular
    ))
}

fn c10_spectral_selftest() -> Outcome {
    let mut rng = common::rng(10);
    for k in 0..100 {
        let n = rng.random_range(1..=10);
        let scale: f64 = rng.random_range(0.1..10.0);
        let b = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale);
        let a = (&b + b.transpose()) * 0.5;
        let ok = spectral_facts_selftest(&a).map_err(|e| format!("matrix {k}: {e}"))?;
        check(ok, || format!("matrix {k} (n = {n}) fails"))?;
    }
    Ok("100 symmetric matrices".into())
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 three-player regression", c1_three_player_regression(&mut ledger)),
        ("2 design recovery", c2_design_recovery(&mut ledger)),
        ("3 two-player impossibility", c3_two_player_impossibility(&mut ledger)),
        ("4 symmetric design", c4_symmetric_design(&mut ledger)),
        ("5 certificates predict convergence", c5_certificates(&mut ledger)),
        ("6 VI vs interior oracle", c6_oracle_equivalence(&mut ledger)),
        ("7 continuity sweep", c7_continuity(&mut ledger)),
        ("8 individual rationality", c8_individual_rationality(&ledger)),
        ("9 random networks", c9_random_networks()),
        ("10 spectral self-test", c10_spectral_selftest()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
