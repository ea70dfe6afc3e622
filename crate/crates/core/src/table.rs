//! Conditional outcome tables `P(a, b | i, j)` over all path pairs.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Direction, PathChoice};

/// Exact probability type used for finite-support classical strategies.
pub type Exact = Rational64;

/// Tolerance used when validating normalization of tables and weights.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Scalar that can hold a probability: `f64` or [`Exact`].
pub trait Probability: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync {
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Probability for f64 {}
impl Probability for Exact {}

/// Joint distribution over the four outcome pairs of one path pair.
///
/// Entries are ordered `(+,+), (+,-), (-,+), (-,-)` with Alice's outcome
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell<T> {
    probs: [T; 4],
}

impl<T: Probability> Cell<T> {
    /// Unvalidated cell; tables validate on construction.
    pub fn new(probs: [T; 4]) -> Self {
        Cell { probs }
    }

    /// All mass on one outcome pair.
    pub fn point(a: Direction, b: Direction) -> Self {
        let mut probs = [T::zero(), T::zero(), T::zero(), T::zero()];
        probs[slot(a, b)] = T::one();
        Cell { probs }
    }

    pub fn probs(&self) -> &[T; 4] {
        &self.probs
    }

    pub fn p(&self, a: Direction, b: Direction) -> T {
        self.probs[slot(a, b)].clone()
    }

    pub fn same(&self) -> T {
        self.probs[0].clone() + self.probs[3].clone()
    }

    pub fn opp(&self) -> T {
        self.probs[1].clone() + self.probs[2].clone()
    }

    /// `E = P(same) - P(opp)`.
    pub fn correlation(&self) -> T {
        self.same() - self.opp()
    }

    pub fn marginal_a(&self, a: Direction) -> T {
        self.p(a, Direction::Plus) + self.p(a, Direction::Minus)
    }

    pub fn marginal_b(&self, b: Direction) -> T {
        self.p(Direction::Plus, b) + self.p(Direction::Minus, b)
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |acc, p| acc + p)
    }

    /// Outcome pairs with Alice and Bob exchanged.
    pub fn swapped(&self) -> Self {
        let [pp, pm, mp, mm] = self.probs.clone();
        Cell {
            probs: [pp, mp, pm, mm],
        }
    }

    fn scaled(&self, w: &T) -> Self {
        Cell {
            probs: self.probs.clone().map(|p| p * w.clone()),
        }
    }

    fn plus(&self, other: &Self) -> Self {
        let mut probs = self.probs.clone();
        for (p, q) in probs.iter_mut().zip(other.probs.iter()) {
            *p = p.clone() + q.clone();
        }
        Cell { probs }
    }

    pub fn to_f64(&self) -> Cell<f64> {
        Cell {
            probs: self.probs.clone().map(|p| p.as_f64()),
        }
    }

    fn validate(&self) -> Result<()> {
        for p in &self.probs {
            let v = p.as_f64();
            if !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(&v) {
                return Err(Error::ProbabilityOutOfRange(v));
            }
        }
        let total = self.total().as_f64();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                what: "table cell",
                total,
            });
        }
        Ok(())
    }
}

pub(crate) fn slot(a: Direction, b: Direction) -> usize {
    let bit = |d: Direction| usize::from(d == Direction::Minus);
    2 * bit(a) + bit(b)
}

/// Outcome pair stored in the given slot of a [`Cell`].
pub(crate) fn outcome_of_slot(slot: usize) -> (Direction, Direction) {
    let dir = |minus: bool| if minus { Direction::Minus } else { Direction::Plus };
    (dir(slot & 2 != 0), dir(slot & 1 != 0))
}

/// An `m × m` grid of [`Cell`]s, one per (Alice path, Bob path).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable<T> {
    m: usize,
    cells: Vec<Cell<T>>,
}

impl<T: Probability> ProbabilityTable<T> {
    /// Builds a table from rows of cells, checking shape and normalization.
    pub fn new(rows: Vec<Vec<Cell<T>>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidConfig("empty probability table".into()));
        }
        let mut cells = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            cells.extend(row);
        }
        let table = ProbabilityTable { m, cells };
        for cell in &table.cells {
            cell.validate()?;
        }
        Ok(table)
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(PathChoice, PathChoice) -> Cell<T>) -> Result<Self> {
        let rows = PathChoice::all(m)
            .map(|i| PathChoice::all(m).map(|j| f(i, j)).collect())
            .collect();
        ProbabilityTable::new(rows)
    }

    /// Every cell equal to `cell`.
    pub fn uniform_cells(m: usize, cell: Cell<T>) -> Result<Self> {
        ProbabilityTable::from_fn(m, |_, _| cell.clone())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Cell for a path pair. Panics if either path exceeds `m`.
    pub fn cell(&self, i: PathChoice, j: PathChoice) -> &Cell<T> {
        assert!(i.index() <= self.m && j.index() <= self.m, "path out of range");
        &self.cells[i.offset() * self.m + j.offset()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PathChoice, PathChoice, &Cell<T>)> {
        let m = self.m;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, c)| (PathChoice::from_offset(k / m), PathChoice::from_offset(k % m), c))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cell<T>]> {
        self.cells.chunks(self.m)
    }

    /// `weight · self + (1 - weight) · other`.
    pub fn mix(&self, other: &Self, weight: T) -> Result<Self> {
        if other.m != self.m {
            return Err(Error::SizeMismatch {
                expected: self.m,
                actual: other.m,
            });
        }
        let rest = T::one() - weight.clone();
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.scaled(&weight).plus(&b.scaled(&rest)))
            .collect();
        let table = ProbabilityTable { m: self.m, cells };
        for cell in &table.cells {
            cell.validate()?;
        }
        Ok(table)
    }

    /// Convex combination `Σ w_k · table_k`; weights must sum to one.
    pub fn convex_combination<'a>(parts: impl IntoIterator<Item = (&'a Self, T)>) -> Result<Self>
    where
        T: 'a,
    {
        let mut acc: Option<ProbabilityTable<T>> = None;
        let mut weight_sum = T::zero();
        for (table, w) in parts {
            weight_sum = weight_sum + w.clone();
            let scaled: Vec<Cell<T>> = table.cells.iter().map(|c| c.scaled(&w)).collect();
            acc = Some(match acc {
                None => ProbabilityTable {
                    m: table.m,
                    cells: scaled,
                },
                Some(prev) => {
                    if prev.m != table.m {
                        return Err(Error::SizeMismatch {
                            expected: prev.m,
                            actual: table.m,
                        });
                    }
                    let cells = prev.cells.iter().zip(&scaled).map(|(a, b)| a.plus(b)).collect();
                    ProbabilityTable { m: prev.m, cells }
                }
            });
        }
        let total = weight_sum.as_f64();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                what: "mixture weights",
                total,
            });
        }
        let table = acc.ok_or_else(|| Error::InvalidStrategy("empty mixture".into()))?;
        for cell in &table.cells {
            cell.validate()?;
        }
        Ok(table)
    }

    pub fn to_f64(&self) -> ProbabilityTable<f64> {
        ProbabilityTable {
            m: self.m,
            cells: self.cells.iter().map(Cell::to_f64).collect(),
        }
    }

    /// Largest violation of no-signalling across all settings: how much
    /// one party's marginal moves when the other party changes setting.
    pub fn signalling_gap(&self) -> f64 {
        let mut gap = 0.0f64;
        for i in PathChoice::all(self.m) {
            for a in Direction::BOTH {
                let ms: Vec<f64> = PathChoice::all(self.m)
                    .map(|j| self.cell(i, j).marginal_a(a).as_f64())
                    .collect();
                gap = gap.max(spread(&ms));
            }
        }
        for j in PathChoice::all(self.m) {
            for b in Direction::BOTH {
                let ms: Vec<f64> = PathChoice::all(self.m)
                    .map(|i| self.cell(i, j).marginal_b(b).as_f64())
                    .collect();
                gap = gap.max(spread(&ms));
            }
        }
        gap
    }
}

fn spread(xs: &[f64]) -> f64 {
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}
