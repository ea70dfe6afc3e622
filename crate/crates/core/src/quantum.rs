//! Two-qubit polarization states and Born-rule outcome tables.
//!
//! Amplitudes are indexed `HH, HV, VH, VV` (Alice's photon first). A
//! polarizer at angle θ passes `cos θ·H + sin θ·V`, reported as `+1`; the
//! orthogonal outcome `-sin θ·H + cos θ·V` is reported as `-1`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Direction;
use crate::table::{outcome_of_slot, Cell, Exact, ProbabilityTable};

/// Tolerance on `Σ |amplitude|² = 1`.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Pure state of two polarization qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    amplitudes: [Complex64; 4],
}

impl TwoQubitState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let total: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !total.is_finite() || (total - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized {
                what: "two-qubit state",
                total,
            });
        }
        Ok(TwoQubitState { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                what: "two-qubit state",
                total: norm * norm,
            });
        }
        TwoQubitState::new(amplitudes.map(|a| a / norm))
    }

    /// `(|HH⟩ + |VV⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        TwoQubitState {
            amplitudes: [h, z, z, h],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }
}

/// Polarizer angle in degrees, canonicalized to `[-90, 90)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasurementSetting {
    angle_deg: f64,
}

impl MeasurementSetting {
    pub fn new(angle_deg: f64) -> Self {
        let mut a = angle_deg.rem_euclid(180.0);
        if a >= 90.0 {
            a -= 180.0;
        }
        MeasurementSetting { angle_deg: a }
    }

    pub fn angle_deg(self) -> f64 {
        self.angle_deg
    }

    fn eigvec(self, outcome: Direction) -> [f64; 2] {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        match outcome {
            Direction::Plus => [c, s],
            Direction::Minus => [-s, c],
        }
    }
}

/// One party's polarizer setting for each path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleAssignment(Vec<MeasurementSetting>);

impl AngleAssignment {
    pub fn new(angles_deg: &[f64]) -> Self {
        AngleAssignment(angles_deg.iter().map(|&a| MeasurementSetting::new(a)).collect())
    }

    /// Path 1 → 0°, path 2 → 120°, path 3 → -120°.
    pub fn standard() -> Self {
        AngleAssignment::new(&[0.0, 120.0, -120.0])
    }

    /// Path `k` measured at `(k-1)·step_deg`.
    pub fn evenly_spaced(m: usize, step_deg: f64) -> Self {
        AngleAssignment((0..m).map(|k| MeasurementSetting::new(k as f64 * step_deg)).collect())
    }

    /// Every setting rotated by `offset_deg`.
    pub fn rotated(&self, offset_deg: f64) -> Self {
        AngleAssignment(
            self.0
                .iter()
                .map(|s| MeasurementSetting::new(s.angle_deg + offset_deg))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.0
    }
}

/// Born-rule joint distribution for one pair of polarizer settings.
pub fn born_table(state: &TwoQubitState, a: MeasurementSetting, b: MeasurementSetting) -> Cell<f64> {
    let amps = state.amplitudes();
    let mut probs = [0.0; 4];
    for (slot, p) in probs.iter_mut().enumerate() {
        let (oa, ob) = outcome_of_slot(slot);
        let (va, vb) = (a.eigvec(oa), b.eigvec(ob));
        let mut amp = Complex64::new(0.0, 0.0);
        for x in 0..2 {
            for y in 0..2 {
                amp += amps[2 * x + y] * (va[x] * vb[y]);
            }
        }
        *p = amp.norm_sqr();
    }
    Cell::new(probs)
}

/// Born tables for every (Alice path, Bob path) combination.
pub fn full_table(
    state: &TwoQubitState,
    alice: &AngleAssignment,
    bob: &AngleAssignment,
) -> Result<ProbabilityTable<f64>> {
    if alice.len() != bob.len() {
        return Err(Error::SizeMismatch {
            expected: alice.len(),
            actual: bob.len(),
        });
    }
    ProbabilityTable::from_fn(alice.len(), |i, j| {
        born_table(state, alice.0[i.offset()], bob.0[j.offset()])
    })
}

/// Draws an outcome pair from a cell by inverse CDF.
pub fn sample_cell<R: Rng + ?Sized>(cell: &Cell<f64>, rng: &mut R) -> (Direction, Direction) {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    let mut last = 0;
    for (slot, &p) in cell.probs().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cum += p;
        last = slot;
        if u < cum {
            return outcome_of_slot(slot);
        }
    }
    // u landed in the rounding gap above the accumulated total
    outcome_of_slot(last)
}

/// Simulates one joint measurement on `state`.
pub fn sample_outcome<R: Rng + ?Sized>(
    state: &TwoQubitState,
    a: MeasurementSetting,
    b: MeasurementSetting,
    rng: &mut R,
) -> (Direction, Direction) {
    sample_cell(&born_table(state, a, b), rng)
}

/// `cos²(Δ)` as an exact rational when `Δ` (degrees) is a multiple of 30°
/// or 45°.
pub fn exact_cos_sq(delta_deg: f64) -> Option<Exact> {
    let d = delta_deg.rem_euclid(180.0);
    let k = (d / 15.0).round();
    if (d - 15.0 * k).abs() > 1e-9 {
        return None;
    }
    let (n, den) = match k as i64 % 12 {
        0 => (1, 1),
        2 | 10 => (3, 4),
        3 | 9 => (1, 2),
        4 | 8 => (1, 4),
        6 => (0, 1),
        _ => return None,
    };
    Some(Exact::new(n, den))
}

/// The `|φ⁺⟩` table in exact arithmetic, via `P(same) = cos²(a - b)` with
/// outcomes uniform within the same/opposite classes. `None` when some
/// angle difference has no exact rational `cos²`.
pub fn exact_phi_plus_table(alice: &AngleAssignment, bob: &AngleAssignment) -> Option<ProbabilityTable<Exact>> {
    if alice.len() != bob.len() {
        return None;
    }
    let half = Exact::new(1, 2);
    let mut rows = Vec::with_capacity(alice.len());
    for a in alice.settings() {
        let mut row = Vec::with_capacity(bob.len());
        for b in bob.settings() {
            let same = exact_cos_sq(a.angle_deg - b.angle_deg)?;
            let opp = Exact::from_integer(1) - same;
            row.push(Cell::new([same * half, opp * half, opp * half, same * half]));
        }
        rows.push(row);
    }
    ProbabilityTable::new(rows).ok()
}
