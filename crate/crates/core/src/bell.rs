//! Correlation functions and Bell expressions with brute-force local bounds.
//!
//! For ±1 outcomes `E = P(same) - P(opp) = 2·P(same) - 1 = 1 - 2·P(opp)`.
//! Substituting this into a correlation expression `Σ c_ij E_ij` with ±1
//! coefficients turns it into the probability form
//! `Σ_{c=+1} P(same) + Σ_{c=-1} P(opp) = (m² + Σ c_ij E_ij) / 2`, which is
//! how the probability bound of a game is derived from its correlation
//! bound.
//!
//! For the three-path game the quantum value of the probability form is
//! 7.5 against a local bound of 7; that 7.5 is the "violation" figure, not
//! a ratio.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameConfig, MAX_ENUMERATION_PATHS};
use crate::table::{Probability, ProbabilityTable};

pub use crate::game::probability_form_value;

/// `E[i][j]`, the mean product of the outcomes for path pair `(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    entries: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            if let Some(e) = row.iter().find(|e| e.is_nan() || e.abs() > 1.0 + 1e-12) {
                return Err(Error::InvalidConfig(format!("correlation {e} outside [-1, 1]")));
            }
        }
        Ok(CorrelationMatrix { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }
}

pub fn correlations<T: Probability>(table: &ProbabilityTable<T>) -> CorrelationMatrix {
    CorrelationMatrix {
        entries: table
            .rows()
            .map(|row| row.iter().map(|c| c.correlation().as_f64()).collect())
            .collect(),
    }
}

/// Linear functional `Σ c[i][j]·E[i][j]` on correlation matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BellExpression {
    coeff: Vec<Vec<f64>>,
    #[serde(skip)]
    bound: OnceLock<f64>,
}

impl PartialEq for BellExpression {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff
    }
}

impl BellExpression {
    pub fn new(coeff: Vec<Vec<f64>>) -> Result<Self> {
        let m = coeff.len();
        if m == 0 {
            return Err(Error::InvalidConfig("empty Bell expression".into()));
        }
        for row in &coeff {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfig("non-finite coefficient".into()));
            }
        }
        Ok(BellExpression {
            coeff,
            bound: OnceLock::new(),
        })
    }

    /// The expression whose probability form is a game's success sum.
    pub fn from_game(cfg: &GameConfig) -> Self {
        let coeff = cfg
            .coeff()
            .iter()
            .map(|r| r.iter().map(|&c| f64::from(c)).collect())
            .collect();
        BellExpression {
            coeff,
            bound: OnceLock::new(),
        }
    }

    /// `A₁(B₁-B₂-B₃) + A₂(B₂-B₁-B₃) + A₃(B₃-B₁-B₂)` for `m = 3`; diagonal
    /// `+1`, off-diagonal `-1` in general.
    pub fn rendezvous(m: usize) -> Result<Self> {
        BellExpression::new(
            (0..m)
                .map(|i| (0..m).map(|j| if i == j { 1.0 } else { -1.0 }).collect())
                .collect(),
        )
    }

    pub fn chsh() -> Self {
        BellExpression::new(vec![vec![1.0, 1.0], vec![1.0, -1.0]]).expect("square")
    }

    pub fn m(&self) -> usize {
        self.coeff.len()
    }

    pub fn coeff(&self) -> &[Vec<f64>] {
        &self.coeff
    }

    pub fn value(&self, e: &CorrelationMatrix) -> Result<f64> {
        if e.m() != self.m() {
            return Err(Error::SizeMismatch {
                expected: self.m(),
                actual: e.m(),
            });
        }
        Ok(self
            .coeff
            .iter()
            .zip(e.rows())
            .flat_map(|(c, r)| c.iter().zip(r).map(|(c, e)| c * e))
            .sum())
    }

    /// Value on predetermined outcomes `A`, `B ∈ {±1}^m`.
    pub fn value_on_signs(&self, alice: &[i8], bob: &[i8]) -> f64 {
        self.coeff
            .iter()
            .zip(alice)
            .map(|(row, &a)| row.iter().zip(bob).map(|(c, &b)| c * f64::from(a * b)).sum::<f64>())
            .sum()
    }

    /// Local-realistic maximum of the expression, cached after the first
    /// call.
    pub fn classical_bound(&self) -> Result<f64> {
        if let Some(b) = self.bound.get() {
            return Ok(*b);
        }
        let b = lhv_bound(self)?;
        Ok(*self.bound.get_or_init(|| b))
    }
}

/// Maximum of `Σ c_ij A_i B_j` over `A, B ∈ {±1}^m`.
///
/// Enumerates Alice's `2^m` sign vectors; for each, Bob's best reply sets
/// `B_j = sign(Σ_i c_ij A_i)`, contributing `|Σ_i c_ij A_i|`.
pub fn lhv_bound(expr: &BellExpression) -> Result<f64> {
    let m = expr.m();
    if m > MAX_ENUMERATION_PATHS {
        return Err(Error::EnumerationLimit {
            m,
            limit: MAX_ENUMERATION_PATHS,
        });
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0..1u32 << m {
        let sign = |i: usize| if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        let value: f64 = (0..m)
            .map(|j| (0..m).map(|i| expr.coeff[i][j] * sign(i)).sum::<f64>().abs())
            .sum();
        best = best.max(value);
    }
    Ok(best)
}

/// `Σ_i E_ii - Σ_{i≠j} E_ij`, without absolute value.
pub fn signed_correlation_form_value(e: &CorrelationMatrix) -> f64 {
    let mut total = 0.0;
    for (i, row) in e.rows().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            total += if i == j { *v } else { -*v };
        }
    }
    total
}

/// `|Σ_i E_ii - Σ_{i≠j} E_ij|`; local models keep this at most 5 for
/// three paths.
pub fn correlation_form_value(e: &CorrelationMatrix) -> f64 {
    signed_correlation_form_value(e).abs()
}

/// Local bound on a game's probability form:
/// `(lhv_bound + m²) / 2`.
pub fn probability_bound(cfg: &GameConfig) -> Result<f64> {
    let m = cfg.m() as f64;
    Ok((BellExpression::from_game(cfg).classical_bound()? + m * m) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{deterministic_table, optimize_classical, StrategyPair};
    use crate::game::success_probability;
    use crate::quantum::{full_table, AngleAssignment, TwoQubitState};
    use crate::table::{Cell, Exact};
    use proptest::prelude::*;

    fn quantum_table() -> ProbabilityTable<f64> {
        let standard = AngleAssignment::standard();
        full_table(&TwoQubitState::phi_plus(), &standard, &standard).unwrap()
    }

    fn uniform3() -> ProbabilityTable<f64> {
        ProbabilityTable::uniform_cells(3, Cell::new([0.25; 4])).unwrap()
    }

    #[test]
    fn correlation_examples() {
        let e = correlations(&quantum_table());
        assert!((e.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((e.get(0, 1) + 0.5).abs() < 1e-12);
        let e = correlations(&uniform3());
        assert!(e.rows().iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn probability_form_examples() {
        let cfg = GameConfig::default();
        assert!((probability_form_value(&cfg, &quantum_table()).unwrap() - 7.5).abs() < 1e-12);
        let best = deterministic_table(&"HHV/HHV".parse().unwrap());
        assert_eq!(probability_form_value(&cfg, &best).unwrap(), Exact::from_integer(7));
        assert!((probability_form_value(&cfg, &uniform3()).unwrap() - 4.5).abs() < 1e-15);
    }

    #[test]
    fn correlation_form_examples() {
        let e = correlations(&quantum_table());
        assert!((signed_correlation_form_value(&e) - 6.0).abs() < 1e-12);
        assert!((correlation_form_value(&e) - 6.0).abs() < 1e-12);
        let e = correlations(&deterministic_table(&"HHV/HHV".parse().unwrap()));
        assert_eq!(correlation_form_value(&e), 5.0);
        let zero = CorrelationMatrix::new(vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(correlation_form_value(&zero), 0.0);
    }

    #[test]
    fn lhv_bound_examples() {
        assert_eq!(lhv_bound(&BellExpression::rendezvous(3).unwrap()).unwrap(), 5.0);
        let ones = BellExpression::new(vec![vec![1.0; 3]; 3]).unwrap();
        assert_eq!(lhv_bound(&ones).unwrap(), 9.0);
        assert_eq!(lhv_bound(&BellExpression::chsh()).unwrap(), 2.0);
        assert!(lhv_bound(&BellExpression::rendezvous(13).unwrap()).is_err());
    }

    #[test]
    fn lhv_bound_matches_full_enumeration() {
        // independent 4^m oracle
        let brute = |expr: &BellExpression| {
            let m = expr.m();
            let signs = |k: u32| {
                (0..m)
                    .map(|i| if k >> i & 1 == 1 { -1 } else { 1 })
                    .collect::<Vec<i8>>()
            };
            (0..1u32 << m)
                .flat_map(|a| (0..1u32 << m).map(move |b| (a, b)))
                .map(|(a, b)| expr.value_on_signs(&signs(a), &signs(b)))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let exprs = [
            BellExpression::rendezvous(3).unwrap(),
            BellExpression::rendezvous(4).unwrap(),
            BellExpression::chsh(),
            BellExpression::new(vec![vec![0.5, -2.0, 1.0], vec![0.25, 1.0, -1.0], vec![3.0, 0.0, 1.0]]).unwrap(),
        ];
        for e in &exprs {
            assert_eq!(lhv_bound(e).unwrap(), brute(e));
        }
    }

    #[test]
    fn probability_bound_examples() {
        assert_eq!(probability_bound(&GameConfig::default()).unwrap(), 7.0);
        assert_eq!(probability_bound(&GameConfig::rendezvous(2).unwrap()).unwrap(), 4.0);
        let ones = GameConfig::with_coeff(vec![vec![1; 3]; 3]).unwrap();
        assert_eq!(probability_bound(&ones).unwrap(), 9.0);
    }

    #[test]
    fn bound_agrees_with_strategy_optimum() {
        let cfg = GameConfig::default();
        let opt = optimize_classical(&cfg).unwrap();
        assert_eq!(probability_bound(&cfg).unwrap() / 9.0, opt.value.as_f64());
        let expr = BellExpression::from_game(&cfg);
        let best_over_pairs = StrategyPair::all(3)
            .map(|p| correlation_form_value(&correlations(&deterministic_table(&p))))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(expr.classical_bound().unwrap(), best_over_pairs);
    }

    #[test]
    fn classical_bound_is_cached() {
        let e = BellExpression::rendezvous(3).unwrap();
        assert_eq!(e.classical_bound().unwrap(), 5.0);
        assert_eq!(e.bound.get(), Some(&5.0));
    }

    fn arb_table() -> impl Strategy<Value = ProbabilityTable<f64>> {
        prop::collection::vec(prop::array::uniform4(0.0f64..1.0), 9).prop_filter_map("non-zero", |cells| {
            let rows = cells
                .chunks(3)
                .map(|r| {
                    r.iter()
                        .map(|p| {
                            let t: f64 = p.iter().sum();
                            Cell::new(p.map(|x| x / t))
                        })
                        .collect()
                })
                .collect();
            ProbabilityTable::new(rows).ok()
        })
    }

    proptest! {
        #[test]
        fn identity_chain(t in arb_table()) {
            let cfg = GameConfig::default();
            let pf = probability_form_value(&cfg, &t).unwrap();
            let signed = signed_correlation_form_value(&correlations(&t));
            prop_assert!((pf - (signed + 9.0) / 2.0).abs() < 1e-12);
            prop_assert!((success_probability(&cfg, &t).unwrap() - pf / 9.0).abs() < 1e-12);
            prop_assert!(correlations(&t).rows().iter().flatten().all(|e| e.abs() <= 1.0 + 1e-12));
        }
    }
}
