//! Landing points on the equator and the field-of-view meeting rule.
//!
//! Seen from either pole, the `+` end of path `k` points at azimuth
//! `(k-1)·step` and the `-` end at the antipodal azimuth. Both parties use
//! the same longitude convention, so equal path and direction land on the
//! same equator point; this fixes the South-pole orientation that the
//! picture alone leaves open.
//!
//! The field of view is the largest equatorial separation at which the
//! parties still see each other, and the threshold is inclusive: with a
//! 60° view, partners 60° apart meet.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{joint_success, Direction, GameConfig, JointChoice, PathChoice, MAX_ENUMERATION_PATHS};
use crate::table::Exact;

/// Slack on angle comparisons, in degrees.
pub const ANGLE_TOL_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EquatorPoint {
    longitude_deg: f64,
}

impl EquatorPoint {
    pub fn new(longitude_deg: f64) -> Self {
        let mut lon = longitude_deg.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        if lon >= 360.0 {
            lon = 0.0;
        }
        EquatorPoint { longitude_deg: lon }
    }

    pub fn longitude_deg(self) -> f64 {
        self.longitude_deg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    /// Alice, starting from the North pole.
    North,
    /// Bob, starting from the South pole.
    South,
}

/// Paths radiating from each pole at evenly spaced azimuths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereModel {
    m: usize,
    step_deg: f64,
}

impl SphereModel {
    pub fn new(m: usize, step_deg: f64) -> Result<Self> {
        if m < 1 || !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bad sphere model: m = {m}, step = {step_deg}"
            )));
        }
        Ok(SphereModel { m, step_deg })
    }

    pub fn from_config(cfg: &GameConfig) -> Self {
        SphereModel {
            m: cfg.m(),
            step_deg: cfg.azimuth_step_deg(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn azimuth_deg(&self, path: PathChoice) -> f64 {
        path.offset() as f64 * self.step_deg
    }

    /// Where a party reaches the equator. The formula does not depend on the
    /// party.
    pub fn landing(&self, _party: Party, path: PathChoice, dir: Direction) -> Result<EquatorPoint> {
        let path = PathChoice::new(path.index(), self.m)?;
        let offset = match dir {
            Direction::Plus => 0.0,
            Direction::Minus => 180.0,
        };
        Ok(EquatorPoint::new(self.azimuth_deg(path) + offset))
    }
}

/// Angular distance along the equator, in `[0, 180]`.
pub fn separation(p: EquatorPoint, q: EquatorPoint) -> f64 {
    let d = (p.longitude_deg - q.longitude_deg).abs();
    d.min(360.0 - d)
}

/// True iff the two landing points are within the field of view.
pub fn meets(model: &SphereModel, cfg: &GameConfig, jc: &JointChoice) -> Result<bool> {
    let a = model.landing(Party::North, jc.path_a, jc.dir_a)?;
    let b = model.landing(Party::South, jc.path_b, jc.dir_b)?;
    Ok(separation(a, b) <= cfg.fov_deg() + ANGLE_TOL_DEG)
}

/// One row of the landing/meeting table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeetingCell {
    pub path_a: PathChoice,
    pub dir_a: Direction,
    pub path_b: PathChoice,
    pub dir_b: Direction,
    pub alice_longitude_deg: f64,
    pub bob_longitude_deg: f64,
    pub separation_deg: f64,
    pub meets: bool,
    /// Whether the abstract task function declares this choice a success.
    pub task_success: bool,
}

/// All `(2m)²` joint choices with their landing points and outcomes.
pub fn meeting_table(model: &SphereModel, cfg: &GameConfig) -> Result<Vec<MeetingCell>> {
    JointChoice::all(cfg.m())
        .map(|jc| {
            let a = model.landing(Party::North, jc.path_a, jc.dir_a)?;
            let b = model.landing(Party::South, jc.path_b, jc.dir_b)?;
            Ok(MeetingCell {
                path_a: jc.path_a,
                dir_a: jc.dir_a,
                path_b: jc.path_b,
                dir_b: jc.dir_b,
                alice_longitude_deg: a.longitude_deg(),
                bob_longitude_deg: b.longitude_deg(),
                separation_deg: separation(a, b),
                meets: meets(model, cfg, &jc)?,
                task_success: joint_success(cfg, &jc)?,
            })
        })
        .collect()
}

/// Best deterministic success probability when success is judged by the
/// meeting rule instead of the task matrix. Bob best-responds to each of
/// Alice's codes path by path.
pub fn best_classical_meeting(model: &SphereModel, cfg: &GameConfig) -> Result<Exact> {
    let m = cfg.m();
    if m > MAX_ENUMERATION_PATHS {
        return Err(Error::EnumerationLimit {
            m,
            limit: MAX_ENUMERATION_PATHS,
        });
    }
    // hit[i * m + j][alice dir][bob dir]
    let mut hit = vec![[[false; 2]; 2]; m * m];
    for jc in JointChoice::all(m) {
        let k = jc.path_a.offset() * m + jc.path_b.offset();
        hit[k][dir_bit(jc.dir_a)][dir_bit(jc.dir_b)] = meets(model, cfg, &jc)?;
    }
    let mut best = 0usize;
    for alice in 0..1u32 << m {
        let a_bit = |i: usize| (alice >> i & 1) as usize;
        let total: usize = (0..m)
            .map(|j| {
                (0..2)
                    .map(|b| (0..m).filter(|&i| hit[i * m + j][a_bit(i)][b]).count())
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        best = best.max(total);
    }
    Ok(Exact::new(best as i64, (m * m) as i64))
}

fn dir_bit(d: Direction) -> usize {
    usize::from(d == Direction::Minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::optimize_classical;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(i: usize) -> PathChoice {
        PathChoice::new(i, 3).unwrap()
    }

    fn default_model() -> (SphereModel, GameConfig) {
        let cfg = GameConfig::default();
        (SphereModel::from_config(&cfg), cfg)
    }

    #[test]
    fn landing_examples() {
        let (model, _) = default_model();
        let lon = |party, i, d| model.landing(party, p(i), d).unwrap().longitude_deg();
        assert_eq!(lon(Party::North, 1, Direction::Plus), 0.0);
        assert_eq!(lon(Party::South, 1, Direction::Minus), 180.0);
        assert_eq!(lon(Party::North, 2, Direction::Plus), 120.0);
        assert!(model
            .landing(Party::North, PathChoice::new(4, 4).unwrap(), Direction::Plus)
            .is_err());
    }

    #[test]
    fn separation_examples() {
        let e = EquatorPoint::new;
        assert_eq!(separation(e(0.0), e(0.0)), 0.0);
        assert_eq!(separation(e(0.0), e(300.0)), 60.0);
        assert_eq!(separation(e(0.0), e(180.0)), 180.0);
        assert_eq!(separation(e(-60.0), e(60.0)), 120.0);
        assert_eq!(EquatorPoint::new(-1e-20).longitude_deg(), 0.0);
    }

    #[test]
    fn meets_examples() {
        let (model, cfg) = default_model();
        let (plus, minus) = (Direction::Plus, Direction::Minus);
        assert!(meets(&model, &cfg, &JointChoice::new(p(1), plus, p(1), plus)).unwrap());
        assert!(!meets(&model, &cfg, &JointChoice::new(p(1), plus, p(1), minus)).unwrap());
        assert!(!meets(&model, &cfg, &JointChoice::new(p(1), plus, p(2), plus)).unwrap());
        assert!(meets(&model, &cfg, &JointChoice::new(p(1), plus, p(2), minus)).unwrap());
    }

    #[test]
    fn equivalence_with_task_function() {
        let (model, cfg) = default_model();
        let table = meeting_table(&model, &cfg).unwrap();
        assert_eq!(table.len(), 36);
        assert!(table.iter().all(|c| c.meets == c.task_success));
        let mut seps: Vec<f64> = table.iter().map(|c| c.separation_deg).collect();
        seps.sort_by(f64::total_cmp);
        seps.dedup();
        assert_eq!(seps, [0.0, 60.0, 120.0, 180.0]);
        assert_eq!(table.iter().filter(|c| c.meets).count(), 18);
    }

    #[test]
    fn fov_sensitivity() {
        let (model, cfg) = default_model();
        let mismatches = |fov: f64| -> Vec<MeetingCell> {
            let cfg = cfg.clone().with_fov(fov).unwrap();
            meeting_table(&model, &cfg)
                .unwrap()
                .into_iter()
                .filter(|c| c.meets != c.task_success)
                .collect()
        };
        let narrow = mismatches(59.9);
        assert_eq!(narrow.len(), 12);
        assert!(narrow.iter().all(|c| c.path_a != c.path_b && c.dir_a != c.dir_b));
        let wide = mismatches(120.0);
        assert_eq!(wide.len(), 12);
        assert!(wide.iter().all(|c| c.path_a != c.path_b && c.dir_a == c.dir_b));
    }

    #[test]
    fn meeting_counts_by_fov() {
        let (model, cfg) = default_model();
        let count = |fov: f64| {
            let cfg = cfg.clone().with_fov(fov).unwrap();
            meeting_table(&model, &cfg).unwrap().iter().filter(|c| c.meets).count()
        };
        assert_eq!(count(0.0), 6);
        assert_eq!(count(60.0), 18);
        assert_eq!(count(180.0), 36);
    }

    #[test]
    fn separation_is_a_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let [a, b, c] = [0; 3].map(|_| EquatorPoint::new(rng.random_range(-720.0..720.0)));
            assert_eq!(separation(a, b), separation(b, a));
            assert!(separation(a, b) >= 0.0 && separation(a, b) <= 180.0);
            assert!(separation(a, c) <= separation(a, b) + separation(b, c) + 1e-9);
            assert_eq!(separation(a, a), 0.0);
        }
    }

    #[test]
    fn geometric_optimum_matches_task_optimum_at_default_fov() {
        let (model, cfg) = default_model();
        assert_eq!(
            best_classical_meeting(&model, &cfg).unwrap(),
            optimize_classical(&cfg).unwrap().value
        );
        let all = cfg.clone().with_fov(180.0).unwrap();
        assert_eq!(best_classical_meeting(&model, &all).unwrap(), Exact::from_integer(1));
    }
}
