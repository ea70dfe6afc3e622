//! Acceptance criteria for the rendezvous game library.
//!
//! Every criterion runs inside `acceptance_criteria`, which prints one
//! PASS/FAIL line per criterion and fails if any criterion fails. Run with
//! `cargo test -p rendezvous-core --test acceptance -- --nocapture` to see
//! the lines on success.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rendezvous_core::*;

use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn default_game() -> (GameConfig, SphereModel) {
    let cfg = GameConfig::default();
    let model = SphereModel::from_config(&cfg);
    (cfg, model)
}

fn quantum_table() -> ProbabilityTable<f64> {
    let standard = AngleAssignment::standard();
    full_table(&TwoQubitState::phi_plus(), &standard, &standard).unwrap()
}

/// Criterion 1: Quantum success probability is 5/6: exact route exactly, float
/// route within 1e-12.
fn quantum_success() -> Outcome {
    let cfg = GameConfig::default();
    let float = success_probability(&cfg, &quantum_table()).unwrap();
    let standard = AngleAssignment::standard();
    let exact_table = quantum::exact_phi_plus_table(&standard, &standard).ok_or("no exact table")?;
    let exact = success_probability(&cfg, &exact_table).unwrap();
    check(
        exact == Exact::new(5, 6) && (float - 5.0 / 6.0).abs() <= 1e-12,
        format!("exact {exact}, float {float:.15}"),
    )
}

/// Criterion 2: Every off-diagonal quantum cell has P(opposite) = 3/4 within 1e-12.
fn off_diagonal_cells() -> Outcome {
    let t = quantum_table();
    let worst = t
        .iter()
        .filter(|(i, j, _)| i != j)
        .map(|(_, _, c)| (c.opp() - 0.75).abs())
        .fold(0.0, f64::max);
    let count = t.iter().filter(|(i, j, _)| i != j).count();
    check(
        count == 6 && worst <= 1e-12,
        format!("{count} cells, max |P(opp) - 3/4| = {worst:.2e}"),
    )
}

/// Criterion 3: Classical optimum over all 64 pairs is exactly 7/9 and every
/// identical-code pair except HHH and VVV attains it.
fn classical_optimum() -> Outcome {
    let opt = optimize_classical(&GameConfig::default()).unwrap();
    let expected: Vec<StrategyPair> = DeterministicStrategy::all(3)
        .filter(|c| !matches!(c.to_string().as_str(), "HHH" | "VVV"))
        .map(StrategyPair::identical)
        .collect();
    let all_present = expected.iter().all(|p| opt.optima.contains(p));
    check(
        opt.value == Exact::new(7, 9) && all_present,
        format!("value {}, {} optimal pairs", opt.value, opt.optima.len()),
    )
}

/// Criterion 4: Local bounds: correlation form 5, probability form 7, both exact.
fn bell_bounds() -> Outcome {
    let corr = lhv_bound(&BellExpression::rendezvous(3).unwrap()).unwrap();
    let prob = probability_bound(&GameConfig::default()).unwrap();
    check(
        corr == 5.0 && prob == 7.0,
        format!("lhv_bound {corr}, probability_bound {prob}"),
    )
}

/// Criterion 5: Quantum violation: probability form 7.5 and signed correlation form
/// 6, the latter both from the identity 2·7.5 - 9 and from the Born
/// tables directly.
fn quantum_violation() -> Outcome {
    let cfg = GameConfig::default();
    let t = quantum_table();
    let pf = probability_form_value(&cfg, &t).unwrap();
    let via_identity = 2.0 * pf - 9.0;
    let direct = signed_correlation_form_value(&correlations(&t));
    check(
        (pf - 7.5).abs() <= 1e-12 && (via_identity - 6.0).abs() <= 1e-12 && (direct - 6.0).abs() <= 1e-12,
        format!("eq2 {pf:.15}, corr via identity {via_identity:.15}, corr from tables {direct:.15}"),
    )
}

/// Criterion 6: Geometry agrees with the task function on all 36 joint choices at a
/// 60° view, and the realizable separations are {0, 60, 120, 180}.
fn geometry_equivalence() -> Outcome {
    let (cfg, model) = default_game();
    let cells = geometry::meeting_table(&model, &cfg).unwrap();
    let agree = cells.iter().filter(|c| c.meets == c.task_success).count();
    let mut seps: Vec<f64> = cells.iter().map(|c| c.separation_deg).collect();
    seps.sort_by(f64::total_cmp);
    seps.dedup();
    check(
        cells.len() == 36 && agree == 36 && seps == [0.0, 60.0, 120.0, 180.0],
        format!("{agree}/{} agree, separations {seps:?}", cells.len()),
    )
}

/// Criterion 7: Monte Carlo: quantum estimate within 0.002 of 5/6 at n = 10⁶; the
/// exhaustive sweep of (HHV, HHV) is exactly 7/9.
fn monte_carlo_convergence() -> Outcome {
    let (cfg, model) = default_game();
    let opts = RunOptions {
        shards: 4,
        ..Default::default()
    };
    let r = run(&cfg, &model, &StrategySpec::standard_quantum(), 1_000_000, 42, &opts).unwrap();
    let det = StrategySpec::Deterministic {
        pair: "HHV/HHV".parse().unwrap(),
    };
    let sweep = exhaustive_check_exact(&cfg, &model, &det).unwrap();
    let err = (r.estimate - 5.0 / 6.0).abs();
    check(
        err <= 0.002 && sweep == Some(Exact::new(7, 9)),
        format!(
            "estimate {:.6} (|err| {err:.2e}), sweep {}",
            r.estimate,
            sweep.map_or("none".to_string(), |v| v.to_string())
        ),
    )
}

fn random_mixture(rng: &mut ChaCha8Rng, pairs: &[StrategyPair]) -> SharedRandomnessStrategy {
    let k = rng.random_range(1..=10);
    let raw: Vec<(StrategyPair, i64)> = (0..k)
        .map(|_| {
            (
                pairs[rng.random_range(0..pairs.len())].clone(),
                rng.random_range(1..1000),
            )
        })
        .collect();
    let total: i64 = raw.iter().map(|(_, w)| w).sum();
    SharedRandomnessStrategy::new(raw.into_iter().map(|(p, w)| (p, Exact::new(w, total))).collect()).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let amps = [0; 4].map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    TwoQubitState::normalized(amps).unwrap()
}

/// Criterion 8: Game-core success equals the Monte Carlo exhaustive check on random
/// mixtures and random pure states, and Bell bounds equal the maxima over
/// enumerated strategy pairs.
fn cross_module_equivalence() -> Outcome {
    let (cfg, model) = default_game();
    let pairs: Vec<StrategyPair> = StrategyPair::all(3).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut exact_mismatch = 0;
    for _ in 0..200 {
        let mixture = random_mixture(&mut rng, &pairs);
        let table = mixture_table(&mixture).unwrap();
        let core = success_probability(&cfg, &table).unwrap();
        let spec = StrategySpec::Mixture { mixture };
        let mc = exhaustive_check(&cfg, &model, &spec).unwrap();
        worst = worst.max((core.as_f64() - mc).abs());
        if exhaustive_check_exact(&cfg, &model, &spec).unwrap() != Some(core) {
            exact_mismatch += 1;
        }
    }
    for _ in 0..50 {
        let state = random_state(&mut rng);
        let angles = |rng: &mut ChaCha8Rng| AngleAssignment::new(&[0; 3].map(|_| rng.random_range(-180.0..180.0)));
        let (alice, bob) = (angles(&mut rng), angles(&mut rng));
        let core = success_probability(&cfg, &full_table(&state, &alice, &bob).unwrap()).unwrap();
        let mc = exhaustive_check(&cfg, &model, &StrategySpec::Quantum { state, alice, bob }).unwrap();
        worst = worst.max((core - mc).abs());
    }

    // bounds against enumerated pairs, on the standard game and random games
    let mut bound_mismatch = 0;
    let mut games = vec![
        cfg.clone(),
        GameConfig::rendezvous(2).unwrap(),
        GameConfig::rendezvous(4).unwrap(),
    ];
    for _ in 0..10 {
        let m = rng.random_range(2..=4);
        let coeff = (0..m)
            .map(|_| (0..m).map(|_| if rng.random() { 1 } else { -1 }).collect())
            .collect();
        games.push(GameConfig::with_coeff(coeff).unwrap());
    }
    for g in &games {
        let expr = BellExpression::from_game(g);
        let (mut best_corr, mut best_prob) = (f64::NEG_INFINITY, Exact::from_integer(-1));
        for p in StrategyPair::all(g.m()) {
            let t = deterministic_table(&p);
            best_corr = best_corr.max(expr.value(&correlations(&t)).unwrap());
            best_prob = best_prob.max(probability_form_value(g, &t).unwrap());
        }
        let m2 = (g.m() * g.m()) as i64;
        let opt = optimize_classical(g).unwrap();
        if lhv_bound(&expr).unwrap() != best_corr
            || probability_bound(g).unwrap() != best_prob.as_f64()
            || opt.value * Exact::from_integer(m2) != best_prob
        {
            bound_mismatch += 1;
        }
    }
    check(
        worst <= 1e-12 && exact_mismatch == 0 && bound_mismatch == 0,
        format!(
            "max |diff| {worst:.2e} over 250 strategies, {exact_mismatch} exact mismatches, \
             {bound_mismatch}/{} bound mismatches",
            games.len()
        ),
    )
}

/// Criterion 9: CHSH local bound is 2.
fn chsh_anchor() -> Outcome {
    let b = lhv_bound(&BellExpression::chsh()).unwrap();
    check(b == 2.0, format!("lhv_bound(CHSH) = {b}"))
}

/// Criterion 10: Identical (seed, trials, shards) give byte-identical reports.
fn reproducibility() -> Outcome {
    let (cfg, model) = default_game();
    let strategies = [
        StrategySpec::standard_quantum(),
        StrategySpec::Mixture {
            mixture: SharedRandomnessStrategy::uniform(StrategyPair::all(3).collect()).unwrap(),
        },
    ];
    let mut identical = 0;
    for s in &strategies {
        for shards in [1, 4] {
            let opts = RunOptions {
                shards,
                ..Default::default()
            };
            let a = serde_json::to_vec(&run(&cfg, &model, s, 100_003, 2718, &opts).unwrap()).unwrap();
            let b = serde_json::to_vec(&run(&cfg, &model, s, 100_003, 2718, &opts).unwrap()).unwrap();
            identical += usize::from(a == b);
        }
    }
    check(identical == 4, format!("{identical}/4 report pairs byte-identical"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("AC1 quantum success = 5/6", quantum_success),
        ("AC2 off-diagonal P(opp) = 3/4", off_diagonal_cells),
        ("AC3 classical optimum = 7/9", classical_optimum),
        ("AC4 Bell bounds 5 and 7", bell_bounds),
        ("AC5 quantum violation 7.5 / 6", quantum_violation),
        ("AC6 geometry equivalence", geometry_equivalence),
        ("AC7 Monte Carlo convergence", monte_carlo_convergence),
        ("AC8 cross-module equivalence", cross_module_equivalence),
        ("AC9 CHSH anchor = 2", chsh_anchor),
        ("AC10 reproducibility", reproducibility),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
