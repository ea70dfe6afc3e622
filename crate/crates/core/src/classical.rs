//! Local-hidden-variable strategies for the rendezvous game.
//!
//! A deterministic strategy is a *code*: a fixed direction for every path,
//! written with `H` for `+` and `V` for `-` (e.g. `HHV`). The path a party
//! takes is never a function of the shared randomness, so a strategy only
//! maps paths to directions.
//!
//! Shared randomness is an explicit finite mixture of code pairs. The
//! success probability is linear in the mixture weights, so its maximum over
//! all mixtures is attained at a single deterministic pair; enumerating the
//! `2^m × 2^m` pairs therefore gives the classical optimum. The test
//! `random_mixtures_never_beat_the_optimum` checks this on random mixtures.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Direction, GameConfig, PathChoice, MAX_ENUMERATION_PATHS};
use crate::table::Probability;
use crate::table::{Cell, Exact, ProbabilityTable, NORMALIZATION_TOL};

/// Predetermined direction for each path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    code: Vec<Direction>,
}

impl DeterministicStrategy {
    pub fn new(code: Vec<Direction>) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::InvalidStrategy("empty code".into()));
        }
        Ok(DeterministicStrategy { code })
    }

    pub fn constant(m: usize, dir: Direction) -> Self {
        DeterministicStrategy { code: vec![dir; m] }
    }

    /// Code number `index` in canonical order: lexicographic with `+ < -`,
    /// so `0` is all-`H` and `2^m - 1` is all-`V`.
    pub fn from_index(m: usize, index: u32) -> Self {
        let code = (0..m)
            .map(|k| {
                if index >> (m - 1 - k) & 1 == 1 {
                    Direction::Minus
                } else {
                    Direction::Plus
                }
            })
            .collect();
        DeterministicStrategy { code }
    }

    pub fn index(&self) -> u32 {
        self.code
            .iter()
            .fold(0, |acc, d| (acc << 1) | u32::from(*d == Direction::Minus))
    }

    /// All `2^m` codes in canonical order.
    pub fn all(m: usize) -> impl Iterator<Item = DeterministicStrategy> {
        (0..1u32 << m).map(move |k| DeterministicStrategy::from_index(m, k))
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn code(&self) -> &[Direction] {
        &self.code
    }

    pub fn direction(&self, path: PathChoice) -> Direction {
        self.code[path.offset()]
    }
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.code.iter().try_for_each(|d| write!(f, "{}", d.letter()))
    }
}

impl FromStr for DeterministicStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let code = s
            .trim()
            .chars()
            .map(|c| {
                Direction::from_letter(c)
                    .ok_or_else(|| Error::InvalidStrategy(format!("bad code letter {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DeterministicStrategy::new(code)
    }
}

impl Serialize for DeterministicStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DeterministicStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One code for Alice and one for Bob.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategyPair {
    pub alice: DeterministicStrategy,
    pub bob: DeterministicStrategy,
}

impl StrategyPair {
    pub fn new(alice: DeterministicStrategy, bob: DeterministicStrategy) -> Result<Self> {
        if alice.len() != bob.len() {
            return Err(Error::SizeMismatch {
                expected: alice.len(),
                actual: bob.len(),
            });
        }
        Ok(StrategyPair { alice, bob })
    }

    /// Both parties hold the same code.
    pub fn identical(code: DeterministicStrategy) -> Self {
        StrategyPair {
            alice: code.clone(),
            bob: code,
        }
    }

    pub fn m(&self) -> usize {
        self.alice.len()
    }

    /// All `4^m` pairs, ordered by (alice code, bob code).
    pub fn all(m: usize) -> impl Iterator<Item = StrategyPair> {
        DeterministicStrategy::all(m).flat_map(move |a| {
            DeterministicStrategy::all(m).map(move |b| StrategyPair {
                alice: a.clone(),
                bob: b,
            })
        })
    }
}

impl fmt::Display for StrategyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.alice, self.bob)
    }
}

impl FromStr for StrategyPair {
    type Err = Error;

    /// `"HHV/HVH"` or `"HHV,HVH"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['/', ','])
            .ok_or_else(|| Error::InvalidStrategy(format!("expected ALICE/BOB codes, got {s:?}")))?;
        StrategyPair::new(a.parse()?, b.parse()?)
    }
}

/// Finite mixture of code pairs with exact weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedRandomnessStrategy {
    components: Vec<(StrategyPair, Exact)>,
}

impl SharedRandomnessStrategy {
    pub fn new(components: Vec<(StrategyPair, Exact)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidStrategy("mixture has no components".into()))?;
        let m = first.0.m();
        let mut total = Exact::from_integer(0);
        for (pair, w) in &components {
            if pair.m() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    actual: pair.m(),
                });
            }
            if *w < Exact::from_integer(0) {
                return Err(Error::ProbabilityOutOfRange(w.as_f64()));
            }
            total += *w;
        }
        let total = total.as_f64();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                what: "mixture weights",
                total,
            });
        }
        Ok(SharedRandomnessStrategy { components })
    }

    /// Equal weight on each listed pair.
    pub fn uniform(pairs: Vec<StrategyPair>) -> Result<Self> {
        let n = i64::try_from(pairs.len()).map_err(|_| Error::InvalidStrategy("too many pairs".into()))?;
        if n == 0 {
            return Err(Error::InvalidStrategy("mixture has no components".into()));
        }
        SharedRandomnessStrategy::new(pairs.into_iter().map(|p| (p, Exact::new(1, n))).collect())
    }

    pub fn components(&self) -> &[(StrategyPair, Exact)] {
        &self.components
    }

    pub fn m(&self) -> usize {
        self.components[0].0.m()
    }
}

/// Point-mass table: path pair `(i, j)` always yields
/// `(alice.code[i], bob.code[j])`.
pub fn deterministic_table(pair: &StrategyPair) -> ProbabilityTable<Exact> {
    ProbabilityTable::from_fn(pair.m(), |i, j| {
        Cell::point(pair.alice.direction(i), pair.bob.direction(j))
    })
    .expect("point-mass cells are normalized")
}

/// Convex combination of the components' deterministic tables.
pub fn mixture_table(s: &SharedRandomnessStrategy) -> Result<ProbabilityTable<Exact>> {
    let tables: Vec<_> = s.components.iter().map(|(p, w)| (deterministic_table(p), *w)).collect();
    ProbabilityTable::convex_combination(tables.iter().map(|(t, w)| (t, *w)))
}

/// Result of exhaustive optimization over deterministic strategy pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOptimum {
    /// Best success probability.
    pub value: Exact,
    /// Number of winning path pairs (out of `m²`) for each optimal pair.
    pub wins: usize,
    /// Every optimal pair, in canonical order.
    pub optima: Vec<StrategyPair>,
}

/// Best classical success probability, found by checking all `4^m`
/// deterministic code pairs.
pub fn optimize_classical(cfg: &GameConfig) -> Result<ClassicalOptimum> {
    let m = cfg.m();
    if m > MAX_ENUMERATION_PATHS {
        return Err(Error::EnumerationLimit {
            m,
            limit: MAX_ENUMERATION_PATHS,
        });
    }
    let full: u32 = (1 << m) - 1;
    let bit = |k: usize| 1u32 << (m - 1 - k);
    // rows[i]: Bob directions (as a minus-mask) that win on every column
    // when Alice plays `+` on path i.
    let rows: Vec<u32> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| cfg.coeff()[i][j] == -1)
                .fold(0, |acc, j| acc | bit(j))
        })
        .collect();

    let per_alice: Vec<(usize, Vec<u32>)> = (0..=full)
        .into_par_iter()
        .map(|alice| {
            let targets: Vec<u32> = (0..m)
                .map(|i| if alice & bit(i) != 0 { rows[i] ^ full } else { rows[i] })
                .collect();
            let mut best = 0usize;
            let mut best_bobs = Vec::new();
            for bob in 0..=full {
                let wins: usize = targets.iter().map(|t| m - (bob ^ t).count_ones() as usize).sum();
                if wins > best {
                    best = wins;
                    best_bobs.clear();
                }
                if wins == best {
                    best_bobs.push(bob);
                }
            }
            (best, best_bobs)
        })
        .collect();

    let wins = per_alice.iter().map(|(w, _)| *w).max().unwrap_or(0);
    let optima = per_alice
        .into_iter()
        .enumerate()
        .filter(|(_, (w, _))| *w == wins)
        .flat_map(|(alice, (_, bobs))| {
            bobs.into_iter().map(move |bob| StrategyPair {
                alice: DeterministicStrategy::from_index(m, alice as u32),
                bob: DeterministicStrategy::from_index(m, bob),
            })
        })
        .collect();
    let value = Exact::new(wins as i64, (m * m) as i64);
    Ok(ClassicalOptimum { value, wins, optima })
}

/// For a pair sharing one code: the fraction of ordered pairs of distinct
/// paths on which the code gives opposite directions.
pub fn conditional_opposite_bound(pair: &StrategyPair) -> Result<Exact> {
    if pair.alice != pair.bob {
        return Err(Error::InvalidStrategy(format!(
            "codes differ: {} vs {}",
            pair.alice, pair.bob
        )));
    }
    let code = pair.alice.code();
    let m = code.len();
    if m < 2 {
        return Err(Error::InvalidStrategy("need at least two paths".into()));
    }
    let discordant = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && code[i] != code[j])
        .count();
    Ok(Exact::new(discordant as i64, (m * (m - 1)) as i64))
}
