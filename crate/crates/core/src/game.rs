//! The rendezvous game itself: paths, directions, the ±1 task matrix and
//! the success functional.
//!
//! A game is fully described by its coefficient matrix. Entry `coeff[i][j]`
//! is `+1` when the parties must take the *same* direction to meet (Alice on
//! path `i`, Bob on path `j`) and `-1` when they must take *opposite*
//! directions. Every path pair is drawn with probability `1/m²`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Probability, ProbabilityTable};

/// Largest number of paths for which strategy spaces are enumerated.
pub const MAX_ENUMERATION_PATHS: usize = 12;

/// Direction taken along a path, `+` or `-`.
///
/// A polarization outcome `H` maps to [`Direction::Plus`], `V` to
/// [`Direction::Minus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Plus, Direction::Minus];

    pub fn sign(self) -> i8 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Direction::Plus),
            -1 => Some(Direction::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }

    /// Polarization letter used in codes such as `HHV`.
    pub fn letter(self) -> char {
        match self {
            Direction::Plus => 'H',
            Direction::Minus => 'V',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'H' | 'h' | '+' => Some(Direction::Plus),
            'V' | 'v' | '-' => Some(Direction::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        })
    }
}

/// A 1-based path label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathChoice(usize);

impl PathChoice {
    pub fn new(index: usize, m: usize) -> Result<Self> {
        if index == 0 || index > m {
            return Err(Error::PathOutOfRange { index, m });
        }
        Ok(PathChoice(index))
    }

    /// Path from a zero-based offset. Unchecked; callers iterate `0..m`.
    pub(crate) fn from_offset(offset: usize) -> Self {
        PathChoice(offset + 1)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn offset(self) -> usize {
        self.0 - 1
    }

    /// All paths `1..=m` in order.
    pub fn all(m: usize) -> impl Iterator<Item = PathChoice> + Clone {
        (0..m).map(PathChoice::from_offset)
    }

    pub(crate) fn check(self, m: usize) -> Result<Self> {
        PathChoice::new(self.0, m)
    }
}

impl fmt::Display for PathChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One round of play: each party's path and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointChoice {
    pub path_a: PathChoice,
    pub dir_a: Direction,
    pub path_b: PathChoice,
    pub dir_b: Direction,
}

impl JointChoice {
    pub fn new(path_a: PathChoice, dir_a: Direction, path_b: PathChoice, dir_b: Direction) -> Self {
        JointChoice {
            path_a,
            dir_a,
            path_b,
            dir_b,
        }
    }

    /// Every joint choice for an `m`-path game, ordered by
    /// (path_a, dir_a, path_b, dir_b) with `+` before `-`.
    pub fn all(m: usize) -> impl Iterator<Item = JointChoice> {
        PathChoice::all(m).flat_map(move |pa| {
            Direction::BOTH.into_iter().flat_map(move |da| {
                PathChoice::all(m).flat_map(move |pb| {
                    Direction::BOTH
                        .into_iter()
                        .map(move |db| JointChoice::new(pa, da, pb, db))
                })
            })
        })
    }
}

/// Game definition: number of paths, viewing angle, path spacing and the
/// ±1 task matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    m: usize,
    fov_deg: f64,
    azimuth_step_deg: f64,
    coeff: Vec<Vec<i8>>,
}

impl Default for GameConfig {
    /// Three paths 120° apart, a 60° field of view, and `f(i,i) = +1`,
    /// `f(i,j) = -1` otherwise.
    fn default() -> Self {
        GameConfig::rendezvous(3).expect("m = 3 is valid")
    }
}

impl GameConfig {
    pub const DEFAULT_FOV_DEG: f64 = 60.0;

    pub fn new(coeff: Vec<Vec<i8>>, fov_deg: f64, azimuth_step_deg: f64) -> Result<Self> {
        let m = coeff.len();
        if m < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 paths, got {m}")));
        }
        for row in &coeff {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|c| c.abs() != 1) {
                return Err(Error::InvalidConfig(format!("coefficient {bad} is not ±1")));
            }
        }
        check_fov(fov_deg)?;
        if !(azimuth_step_deg.is_finite() && azimuth_step_deg > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "azimuth step {azimuth_step_deg} must be positive"
            )));
        }
        Ok(GameConfig {
            m,
            fov_deg,
            azimuth_step_deg,
            coeff,
        })
    }

    /// The rendezvous family: `m` paths spaced `360/m` degrees apart, same
    /// direction required on equal paths and opposite directions otherwise.
    pub fn rendezvous(m: usize) -> Result<Self> {
        let coeff = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1 } else { -1 }).collect())
            .collect();
        GameConfig::new(coeff, Self::DEFAULT_FOV_DEG, 360.0 / m.max(1) as f64)
    }

    /// Same geometry as [`GameConfig::rendezvous`] but with a custom task
    /// matrix.
    pub fn with_coeff(coeff: Vec<Vec<i8>>) -> Result<Self> {
        let m = coeff.len().max(1);
        GameConfig::new(coeff, Self::DEFAULT_FOV_DEG, 360.0 / m as f64)
    }

    pub fn with_fov(mut self, fov_deg: f64) -> Result<Self> {
        check_fov(fov_deg)?;
        self.fov_deg = fov_deg;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn fov_deg(&self) -> f64 {
        self.fov_deg
    }

    pub fn azimuth_step_deg(&self) -> f64 {
        self.azimuth_step_deg
    }

    pub fn coeff(&self) -> &[Vec<i8>] {
        &self.coeff
    }

    pub fn path(&self, index: usize) -> Result<PathChoice> {
        PathChoice::new(index, self.m)
    }

    pub(crate) fn coeff_at(&self, i: usize, j: usize) -> i8 {
        self.coeff[i][j]
    }
}

fn check_fov(fov_deg: f64) -> Result<()> {
    if !(0.0..=180.0).contains(&fov_deg) {
        return Err(Error::InvalidConfig(format!(
            "field of view {fov_deg} outside [0, 180]"
        )));
    }
    Ok(())
}

/// `f(i, j)`: `+1` if equal directions succeed, `-1` if opposite ones do.
pub fn task_value(cfg: &GameConfig, i: PathChoice, j: PathChoice) -> Result<i8> {
    let (i, j) = (i.check(cfg.m)?, j.check(cfg.m)?);
    Ok(cfg.coeff_at(i.offset(), j.offset()))
}

/// The parties meet iff `f(i, j) = A·B`.
pub fn joint_success(cfg: &GameConfig, jc: &JointChoice) -> Result<bool> {
    let f = task_value(cfg, jc.path_a, jc.path_b)?;
    Ok(f == jc.dir_a.sign() * jc.dir_b.sign())
}

/// Sum over all path pairs of the probability of taking winning directions.
///
/// For the three-path game this is the Bell expression bounded by 7 for
/// local models; it equals `m²` times [`success_probability`].
pub fn probability_form_value<T: Probability>(cfg: &GameConfig, table: &ProbabilityTable<T>) -> Result<T> {
    if table.m() != cfg.m {
        return Err(Error::SizeMismatch {
            expected: cfg.m,
            actual: table.m(),
        });
    }
    let mut total = T::zero();
    for (i, j, cell) in table.iter() {
        let win = if cfg.coeff_at(i.offset(), j.offset()) == 1 {
            cell.same()
        } else {
            cell.opp()
        };
        total = total + win;
    }
    Ok(total)
}

/// Overall success probability under uniformly random, independent path
/// choices.
pub fn success_probability<T: Probability>(cfg: &GameConfig, table: &ProbabilityTable<T>) -> Result<T> {
    let total = probability_form_value(cfg, table)?;
    let pairs = T::from_usize(cfg.m * cfg.m).expect("path count fits the scalar type");
    Ok(total / pairs)
}
