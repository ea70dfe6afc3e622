use anyhow::{bail, Result};

use rendezvous_core::geometry::{best_classical_meeting, meeting_table};
use rendezvous_core::montecarlo::geometric_success;
use rendezvous_core::{
    correlations, exhaustive_check, exhaustive_check_exact, lhv_bound, optimize_classical, probability_bound,
    probability_form_value, run, success_probability, AngleAssignment, BellExpression, GameConfig, Probability,
    RunOptions, Scoring, SphereModel, StrategySpec, TwoQubitState,
};

use crate::cli::{QuantumSettings, SweepParam};
use crate::output::{
    cell_rows, rational_string, BellDoc, Document, GeometryRow, OptimizeDoc, SimulationDoc, SweepRow, ValueDoc,
};
use crate::parse;

/// Most points a sweep may evaluate.
const MAX_SWEEP_POINTS: usize = 100_000;

fn quantum_spec(cfg: &GameConfig, q: &QuantumSettings) -> Result<StrategySpec> {
    let alice = match &q.angles {
        Some(a) => AngleAssignment::new(a),
        None => AngleAssignment::evenly_spaced(cfg.m(), cfg.azimuth_step_deg()),
    };
    let bob = q
        .bob_angles
        .as_deref()
        .map_or_else(|| alice.clone(), AngleAssignment::new);
    let state = match &q.state {
        Some(s) => TwoQubitState::new(parse::amplitudes(s)?)?,
        None => TwoQubitState::phi_plus(),
    };
    Ok(StrategySpec::Quantum { state, alice, bob })
}

/// Resolves a strategy name: `quantum`, `classical-best`, a code pair such
/// as `HHV/HHV`, or a mixture `HHV/HHV@1/2;HVH/HVH@1/2` (optionally
/// prefixed by `mix:`).
pub fn strategy(name: &str, cfg: &GameConfig, q: &QuantumSettings) -> Result<StrategySpec> {
    let name = name.trim();
    Ok(match name {
        "quantum" => quantum_spec(cfg, q)?,
        "classical-best" => {
            let opt = optimize_classical(cfg)?;
            let pair = opt
                .optima
                .into_iter()
                .next()
                .expect("the search always keeps an optimum");
            StrategySpec::Deterministic { pair }
        }
        _ => {
            let body = name.strip_prefix("mix:").unwrap_or(name);
            if name.starts_with("mix:") || body.contains(['@', ';']) {
                StrategySpec::Mixture {
                    mixture: parse::mixture(body)?,
                }
            } else {
                StrategySpec::Deterministic { pair: body.parse()? }
            }
        }
    })
}

fn check_size(spec: &StrategySpec, cfg: &GameConfig) -> Result<()> {
    if let StrategySpec::Quantum { alice, bob, .. } = spec {
        if bob.len() != alice.len() {
            bail!("Alice has {} angles but Bob has {}", alice.len(), bob.len());
        }
    }
    if spec.m() != cfg.m() {
        bail!("strategy covers {} paths but the game has {}", spec.m(), cfg.m());
    }
    Ok(())
}

pub fn exact(cfg: &GameConfig, protocol: &str, q: &QuantumSettings) -> Result<Document> {
    let spec = strategy(protocol, cfg, q)?;
    check_size(&spec, cfg)?;
    let table = spec.table()?;
    let exact = spec.exact_table()?.map(|t| success_probability(cfg, &t)).transpose()?;
    let expr = BellExpression::from_game(cfg);
    let signed = expr.value(&correlations(&table))?;

    let mut doc = Document::new("exact", cfg);
    doc.protocol = Some(protocol.to_string());
    doc.success = Some(ValueDoc::new(exact, success_probability(cfg, &table)?));
    doc.bell = Some(BellDoc {
        eq2_value: Some(probability_form_value(cfg, &table)?),
        eq2_bound: probability_bound(cfg)?,
        corr_value: Some(signed.abs()),
        corr_value_signed: Some(signed),
        corr_bound: lhv_bound(&expr)?,
    });
    doc.tables = Some(cell_rows(&table));
    Ok(doc)
}

pub fn optimize(cfg: &GameConfig) -> Result<Document> {
    let opt = optimize_classical(cfg)?;
    let mut doc = Document::new("optimize", cfg);
    doc.optimize = Some(OptimizeDoc {
        value: ValueDoc::exact(opt.value),
        wins: opt.wins,
        optima: opt.optima.iter().map(ToString::to_string).collect(),
    });
    doc.bell = Some(BellDoc {
        eq2_value: None,
        eq2_bound: probability_bound(cfg)?,
        corr_value: None,
        corr_value_signed: None,
        corr_bound: lhv_bound(&BellExpression::from_game(cfg))?,
    });
    Ok(doc)
}

pub struct SimulateArgs<'a> {
    pub strategy: &'a str,
    pub trials: u64,
    pub shards: usize,
    pub scoring: Scoring,
    pub exhaustive: bool,
    pub seed: u64,
}

pub fn simulate(cfg: &GameConfig, args: &SimulateArgs, q: &QuantumSettings) -> Result<Document> {
    let spec = strategy(args.strategy, cfg, q)?;
    check_size(&spec, cfg)?;
    let model = SphereModel::from_config(cfg);
    let scoring = match args.scoring {
        Scoring::Geometry => "geometry",
        Scoring::TaskFunction => "task",
    };
    let exact_value = || -> Result<ValueDoc> {
        Ok(match args.scoring {
            Scoring::Geometry => ValueDoc::new(
                exhaustive_check_exact(cfg, &model, &spec)?,
                exhaustive_check(cfg, &model, &spec)?,
            ),
            Scoring::TaskFunction => {
                let exact = spec.exact_table()?.map(|t| success_probability(cfg, &t)).transpose()?;
                ValueDoc::new(exact, success_probability(cfg, &spec.table()?)?)
            }
        })
    };

    let (mode, report) = if args.exhaustive {
        ("exhaustive", None)
    } else {
        let opts = RunOptions {
            shards: args.shards,
            scoring: args.scoring,
        };
        ("sampled", Some(run(cfg, &model, &spec, args.trials, args.seed, &opts)?))
    };
    let mut doc = Document::new("simulate", cfg);
    doc.simulation = Some(SimulationDoc {
        mode: mode.to_string(),
        strategy: args.strategy.to_string(),
        scoring: scoring.to_string(),
        report,
        exact: Some(exact_value()?),
    });
    Ok(doc)
}

pub fn geometry(cfg: &GameConfig) -> Result<Document> {
    let model = SphereModel::from_config(cfg);
    let rows = meeting_table(&model, cfg)?
        .into_iter()
        .map(|c| GeometryRow {
            alice_path: c.path_a.index(),
            alice_dir: c.dir_a.to_string(),
            bob_path: c.path_b.index(),
            bob_dir: c.dir_b.to_string(),
            alice_longitude_deg: c.alice_longitude_deg,
            bob_longitude_deg: c.bob_longitude_deg,
            separation_deg: c.separation_deg,
            meets: c.meets,
            task_success: c.task_success,
        })
        .collect();
    let mut doc = Document::new("geometry", cfg);
    doc.geometry = Some(rows);
    Ok(doc)
}

/// Inclusive grid `from, from+step, …` up to `to`.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
        bail!("sweep range needs finite from <= to and step > 0 (got {from}, {to}, {step})");
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    if n > MAX_SWEEP_POINTS {
        bail!("sweep has {n} points, more than {MAX_SWEEP_POINTS}");
    }
    Ok((0..n).map(|k| from + k as f64 * step).collect())
}

pub struct SweepArgs {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

pub fn sweep(cfg: &GameConfig, args: &SweepArgs, q: &QuantumSettings) -> Result<Document> {
    let points = grid(args.from, args.to, args.step)?;
    let spec = quantum_spec(cfg, q)?;
    check_size(&spec, cfg)?;
    let StrategySpec::Quantum { state, alice, bob } = spec else {
        unreachable!("quantum_spec builds a quantum spec")
    };
    let model = SphereModel::from_config(cfg);

    let mut rows = Vec::with_capacity(points.len());
    for value in points {
        let (game, bob) = match args.param {
            SweepParam::Fov => (cfg.clone().with_fov(value)?, bob.clone()),
            SweepParam::Angle => (cfg.clone(), bob.rotated(value)),
        };
        let table = rendezvous_core::full_table(&state, &alice, &bob)?;
        let classical = best_classical_meeting(&model, &game)?;
        rows.push(SweepRow {
            param: match args.param {
                SweepParam::Fov => "fov_deg",
                SweepParam::Angle => "bob_offset_deg",
            }
            .to_string(),
            value,
            quantum_success: geometric_success(&game, &model, &table)?,
            classical_best: classical.as_f64(),
            classical_best_rational: rational_string(classical),
        });
    }
    let mut doc = Document::new("sweep", cfg);
    doc.sweep = Some(rows);
    Ok(doc)
}
