//! Seeded end-to-end simulation of the game.
//!
//! Each trial draws both paths uniformly and independently, obtains the two
//! directions from the strategy (Born sampling, code lookup, or a fresh
//! code pair per trial for mixtures) and scores the round. Scoring goes
//! through the geometric meeting rule unless [`Scoring::TaskFunction`] is
//! requested.
//!
//! Trials are split into shards. Shard `k` owns a ChaCha8 stream seeded
//! with `seed` on stream number `k`, and the report only sums shard counts,
//! so a report is a pure function of `(seed, trials, shards, strategy)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{deterministic_table, mixture_table, SharedRandomnessStrategy, StrategyPair};
use crate::error::{Error, Result};
use crate::game::{joint_success, success_probability, Direction, GameConfig, JointChoice, PathChoice};
use crate::geometry::{meets, SphereModel};
use crate::quantum::{exact_phi_plus_table, full_table, sample_cell, AngleAssignment, TwoQubitState};
use crate::table::{Cell, Exact, Probability, ProbabilityTable};

/// z-value of the two-sided 95% normal interval.
const Z95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategySpec {
    Quantum {
        state: TwoQubitState,
        alice: AngleAssignment,
        bob: AngleAssignment,
    },
    Deterministic {
        pair: StrategyPair,
    },
    Mixture {
        mixture: SharedRandomnessStrategy,
    },
}

impl StrategySpec {
    /// `|φ⁺⟩` measured at 0°, 120°, -120° by both parties.
    pub fn standard_quantum() -> Self {
        StrategySpec::Quantum {
            state: TwoQubitState::phi_plus(),
            alice: AngleAssignment::standard(),
            bob: AngleAssignment::standard(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            StrategySpec::Quantum { alice, .. } => alice.len(),
            StrategySpec::Deterministic { pair } => pair.m(),
            StrategySpec::Mixture { mixture } => mixture.m(),
        }
    }

    fn check(&self, cfg: &GameConfig) -> Result<()> {
        if let StrategySpec::Quantum { alice, bob, .. } = self {
            if alice.len() != bob.len() {
                return Err(Error::SizeMismatch {
                    expected: alice.len(),
                    actual: bob.len(),
                });
            }
        }
        if self.m() != cfg.m() {
            return Err(Error::InvalidStrategy(format!(
                "strategy covers {} paths but the game has {}",
                self.m(),
                cfg.m()
            )));
        }
        Ok(())
    }

    /// Outcome table of the strategy in floating point.
    pub fn table(&self) -> Result<ProbabilityTable<f64>> {
        match self {
            StrategySpec::Quantum { state, alice, bob } => full_table(state, alice, bob),
            StrategySpec::Deterministic { pair } => Ok(deterministic_table(pair).to_f64()),
            StrategySpec::Mixture { mixture } => Ok(mixture_table(mixture)?.to_f64()),
        }
    }

    /// Outcome table in exact arithmetic, when one exists: always for
    /// finite-support strategies, and for `|φ⁺⟩` at angles with rational
    /// `cos²` differences.
    pub fn exact_table(&self) -> Result<Option<ProbabilityTable<Exact>>> {
        match self {
            StrategySpec::Quantum { state, alice, bob } => {
                if *state == TwoQubitState::phi_plus() {
                    Ok(exact_phi_plus_table(alice, bob))
                } else {
                    Ok(None)
                }
            }
            StrategySpec::Deterministic { pair } => Ok(Some(deterministic_table(pair))),
            StrategySpec::Mixture { mixture } => Ok(Some(mixture_table(mixture)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scoring {
    /// Landing points within the field of view.
    #[default]
    Geometry,
    /// `f(i, j) = A·B`.
    TaskFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub shards: usize,
    pub scoring: Scoring,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            shards: 1,
            scoring: Scoring::Geometry,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// 95% normal interval, clamped to `[0, 1]`.
    pub ci95: [f64; 2],
    pub seed: u64,
    pub shards: usize,
    pub scoring: Scoring,
    pub exact_reference: Option<f64>,
    /// `(estimate - exact_reference) / std_error`.
    pub z_score: Option<f64>,
}

impl SimulationReport {
    fn from_counts(trials: u64, successes: u64, seed: u64, opts: &RunOptions, exact: Option<f64>) -> Self {
        let n = trials as f64;
        let estimate = successes as f64 / n;
        let std_error = (estimate * (1.0 - estimate) / n).sqrt();
        let ci95 = [
            (estimate - Z95 * std_error).clamp(0.0, 1.0),
            (estimate + Z95 * std_error).clamp(0.0, 1.0),
        ];
        let z_score = exact.and_then(|p| {
            if std_error > 0.0 {
                Some((estimate - p) / std_error)
            } else if estimate == p {
                Some(0.0)
            } else {
                None
            }
        });
        SimulationReport {
            trials,
            successes,
            estimate,
            std_error,
            ci95,
            seed,
            shards: opts.shards,
            scoring: opts.scoring,
            exact_reference: exact,
            z_score,
        }
    }

    pub fn ci_contains(&self, p: f64) -> bool {
        self.ci95[0] <= p && p <= self.ci95[1]
    }
}

/// Per-trial direction source.
enum Sampler<'a> {
    Cells(Vec<Cell<f64>>),
    Pair(&'a StrategyPair),
    Mixture {
        cumulative: Vec<f64>,
        pairs: Vec<&'a StrategyPair>,
    },
}

impl<'a> Sampler<'a> {
    fn new(strategy: &'a StrategySpec) -> Result<Self> {
        Ok(match strategy {
            StrategySpec::Quantum { state, alice, bob } => {
                let table = full_table(state, alice, bob)?;
                Sampler::Cells(table.iter().map(|(_, _, c)| c.clone()).collect())
            }
            StrategySpec::Deterministic { pair } => Sampler::Pair(pair),
            StrategySpec::Mixture { mixture } => {
                let mut acc = 0.0;
                let mut cumulative = Vec::new();
                let mut pairs = Vec::new();
                for (pair, w) in mixture.components() {
                    acc += w.as_f64();
                    cumulative.push(acc);
                    pairs.push(pair);
                }
                Sampler::Mixture { cumulative, pairs }
            }
        })
    }

    fn directions<R: Rng>(&self, m: usize, i: PathChoice, j: PathChoice, rng: &mut R) -> (Direction, Direction) {
        match self {
            Sampler::Cells(cells) => sample_cell(&cells[i.offset() * m + j.offset()], rng),
            Sampler::Pair(pair) => (pair.alice.direction(i), pair.bob.direction(j)),
            Sampler::Mixture { cumulative, pairs } => {
                let u = rng.random::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                let k = cumulative.partition_point(|&c| c <= u).min(pairs.len() - 1);
                (pairs[k].alice.direction(i), pairs[k].bob.direction(j))
            }
        }
    }
}

fn score(cfg: &GameConfig, model: &SphereModel, scoring: Scoring, jc: &JointChoice) -> Result<bool> {
    match scoring {
        Scoring::Geometry => meets(model, cfg, jc),
        Scoring::TaskFunction => joint_success(cfg, jc),
    }
}

/// Number of trials handled by shard `k`.
fn shard_trials(trials: u64, shards: usize, k: usize) -> u64 {
    let shards = shards as u64;
    trials / shards + u64::from((k as u64) < trials % shards)
}

/// The random stream used by shard `k`.
pub fn shard_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

pub fn run(
    cfg: &GameConfig,
    model: &SphereModel,
    strategy: &StrategySpec,
    trials: u64,
    seed: u64,
    opts: &RunOptions,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if opts.shards == 0 {
        return Err(Error::InvalidConfig("shard count must be at least 1".into()));
    }
    strategy.check(cfg)?;
    let sampler = Sampler::new(strategy)?;
    let m = cfg.m();

    let successes = (0..opts.shards)
        .into_par_iter()
        .map(|k| -> Result<u64> {
            let mut rng = shard_rng(seed, k);
            let mut wins = 0;
            for _ in 0..shard_trials(trials, opts.shards, k) {
                let i = PathChoice::from_offset(rng.random_range(0..m));
                let j = PathChoice::from_offset(rng.random_range(0..m));
                let (a, b) = sampler.directions(m, i, j, &mut rng);
                if score(cfg, model, opts.scoring, &JointChoice::new(i, a, j, b))? {
                    wins += 1;
                }
            }
            Ok(wins)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();

    let exact = match opts.scoring {
        Scoring::Geometry => exhaustive_check(cfg, model, strategy)?,
        Scoring::TaskFunction => success_probability(cfg, &strategy.table()?)?,
    };
    Ok(SimulationReport::from_counts(
        trials,
        successes,
        seed,
        opts,
        Some(exact),
    ))
}

/// Success probability of a table when rounds are judged by the meeting
/// rule: `Σ_{i,j} Σ_{a,b} P(a, b | i, j)·[meet] / m²`.
pub fn geometric_success<T: Probability>(
    cfg: &GameConfig,
    model: &SphereModel,
    table: &ProbabilityTable<T>,
) -> Result<T> {
    if table.m() != cfg.m() {
        return Err(Error::SizeMismatch {
            expected: cfg.m(),
            actual: table.m(),
        });
    }
    let mut total = T::zero();
    for (i, j, cell) in table.iter() {
        for a in Direction::BOTH {
            for b in Direction::BOTH {
                if meets(model, cfg, &JointChoice::new(i, a, j, b))? {
                    total = total + cell.p(a, b);
                }
            }
        }
    }
    let pairs = T::from_usize(cfg.m() * cfg.m()).expect("path count fits the scalar type");
    Ok(total / pairs)
}

/// Exact success probability by sweeping every path pair and every outcome
/// the strategy can produce, scored geometrically.
pub fn exhaustive_check(cfg: &GameConfig, model: &SphereModel, strategy: &StrategySpec) -> Result<f64> {
    strategy.check(cfg)?;
    geometric_success(cfg, model, &strategy.table()?)
}

/// [`exhaustive_check`] in rational arithmetic; `None` when the strategy
/// has no exact table.
pub fn exhaustive_check_exact(cfg: &GameConfig, model: &SphereModel, strategy: &StrategySpec) -> Result<Option<Exact>> {
    strategy.check(cfg)?;
    match strategy.exact_table()? {
        Some(t) => Ok(Some(geometric_success(cfg, model, &t)?)),
        None => Ok(None),
    }
}

/// Equal-weight mixture over `pairs`.
pub fn uniform_mixture(pairs: Vec<StrategyPair>) -> Result<StrategySpec> {
    Ok(StrategySpec::Mixture {
        mixture: SharedRandomnessStrategy::uniform(pairs)?,
    })
}
