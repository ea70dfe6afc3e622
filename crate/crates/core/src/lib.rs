//! Exact and simulated evaluation of the entanglement-assisted rendezvous
//! game.
//!
//! Two parties start at opposite poles, each picks one of `m` paths at
//! random and must choose a direction along it without communicating. They
//! meet when their equator landing points are within the field of view.
//! Sharing a maximally entangled photon pair lets them win with probability
//! 5/6 in the three-path game, while every local strategy is capped at 7/9.
//!
//! - [`game`]: task matrix, joint choices, success functional
//! - [`quantum`]: two-qubit states and Born-rule tables
//! - [`classical`]: deterministic codes, mixtures, exhaustive optimum
//! - [`bell`]: correlations, Bell expressions and local bounds
//! - [`geometry`]: landing points and the meeting rule
//! - [`montecarlo`]: seeded simulation and exhaustive sweeps

pub mod bell;
pub mod classical;
pub mod error;
pub mod game;
pub mod geometry;
pub mod montecarlo;
pub mod quantum;
pub mod table;

pub use bell::{
    correlation_form_value, correlations, lhv_bound, probability_bound, signed_correlation_form_value, BellExpression,
    CorrelationMatrix,
};
pub use classical::{
    conditional_opposite_bound, deterministic_table, mixture_table, optimize_classical, ClassicalOptimum,
    DeterministicStrategy, SharedRandomnessStrategy, StrategyPair,
};
pub use error::{Error, Result};
pub use game::{
    joint_success, probability_form_value, success_probability, task_value, Direction, GameConfig, JointChoice,
    PathChoice, MAX_ENUMERATION_PATHS,
};
pub use geometry::{meets, separation, EquatorPoint, Party, SphereModel};
pub use montecarlo::{
    exhaustive_check, exhaustive_check_exact, run, RunOptions, Scoring, SimulationReport, StrategySpec,
};
pub use quantum::{born_table, full_table, AngleAssignment, MeasurementSetting, TwoQubitState};
pub use table::{Cell, Exact, Probability, ProbabilityTable};
