//! Report document shared by all subcommands, and its text/JSON/CSV forms.

use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use rendezvous_core::{Cell, Exact, GameConfig, PathChoice, ProbabilityTable, SimulationReport};

use crate::cli::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    pub game: GameDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<CellRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bell: Option<BellDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success: Option<ValueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Vec<GeometryRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
}

impl Document {
    pub fn new(command: &str, cfg: &GameConfig) -> Self {
        Document {
            command: command.to_string(),
            game: GameDoc::from(cfg),
            protocol: None,
            tables: None,
            bell: None,
            success: None,
            optimize: None,
            simulation: None,
            geometry: None,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameDoc {
    pub m: usize,
    pub fov_deg: f64,
    pub azimuth_step_deg: f64,
    pub coeff: Vec<Vec<i8>>,
}

impl From<&GameConfig> for GameDoc {
    fn from(cfg: &GameConfig) -> Self {
        GameDoc {
            m: cfg.m(),
            fov_deg: cfg.fov_deg(),
            azimuth_step_deg: cfg.azimuth_step_deg(),
            coeff: cfg.coeff().to_vec(),
        }
    }
}

/// A probability as a decimal, plus the exact fraction when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueDoc {
    pub rational: Option<String>,
    pub decimal: f64,
}

impl ValueDoc {
    pub fn exact(v: Exact) -> Self {
        ValueDoc {
            rational: Some(rational_string(v)),
            decimal: rendezvous_core::Probability::as_f64(&v),
        }
    }

    pub fn new(exact: Option<Exact>, decimal: f64) -> Self {
        match exact {
            Some(v) => ValueDoc::exact(v),
            None => ValueDoc {
                rational: None,
                decimal,
            },
        }
    }

    fn text(&self) -> String {
        match &self.rational {
            Some(r) => format!("{r} ({:.12})", self.decimal),
            None => format!("{:.12}", self.decimal),
        }
    }
}

/// `p/q`, always with the denominator.
pub fn rational_string(v: Exact) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub alice_path: usize,
    pub bob_path: usize,
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
    pub p_same: f64,
    pub p_opp: f64,
    pub correlation: f64,
}

pub fn cell_rows(table: &ProbabilityTable<f64>) -> Vec<CellRow> {
    table.iter().map(|(i, j, c)| cell_row(i, j, c)).collect()
}

fn cell_row(i: PathChoice, j: PathChoice, c: &Cell<f64>) -> CellRow {
    let [pp, pm, mp, mm] = *c.probs();
    CellRow {
        alice_path: i.index(),
        bob_path: j.index(),
        p_pp: pp,
        p_pm: pm,
        p_mp: mp,
        p_mm: mm,
        p_same: c.same(),
        p_opp: c.opp(),
        correlation: c.correlation(),
    }
}

/// Bell-type values. `eq2` is the probability form `Σ c·P(win)`, `corr` the
/// correlation form `Σ c·E`; values are absent when only bounds apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellDoc {
    pub eq2_value: Option<f64>,
    pub eq2_bound: f64,
    pub corr_value: Option<f64>,
    pub corr_value_signed: Option<f64>,
    pub corr_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeDoc {
    pub value: ValueDoc,
    pub wins: usize,
    pub optima: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDoc {
    /// `sampled` or `exhaustive`.
    pub mode: String,
    pub strategy: String,
    pub scoring: String,
    pub report: Option<SimulationReport>,
    /// Exact success probability, when one is computable.
    pub exact: Option<ValueDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryRow {
    pub alice_path: usize,
    pub alice_dir: String,
    pub bob_path: usize,
    pub bob_dir: String,
    pub alice_longitude_deg: f64,
    pub bob_longitude_deg: f64,
    pub separation_deg: f64,
    pub meets: bool,
    pub task_success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub quantum_success: f64,
    pub classical_best: f64,
    pub classical_best_rational: String,
}

/// Flat CSV form of a simulation.
#[derive(Serialize)]
struct SimulationRow<'a> {
    mode: &'a str,
    strategy: &'a str,
    scoring: &'a str,
    trials: Option<u64>,
    successes: Option<u64>,
    estimate: Option<f64>,
    std_error: Option<f64>,
    ci95_low: Option<f64>,
    ci95_high: Option<f64>,
    seed: Option<u64>,
    shards: Option<usize>,
    exact_reference: Option<f64>,
    z_score: Option<f64>,
    exact_rational: Option<&'a str>,
}

#[derive(Serialize)]
struct OptimumRow<'a> {
    alice: &'a str,
    bob: &'a str,
    wins: usize,
    value_rational: &'a str,
    value_decimal: f64,
}

pub fn render(doc: &Document, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(doc)? + "\n"),
        Format::Csv => render_csv(doc),
        Format::Text => Ok(render_text(doc)),
    }
}

fn render_csv(doc: &Document) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(rows) = &doc.geometry {
        rows.iter().try_for_each(|r| w.serialize(r))?;
    } else if let Some(rows) = &doc.sweep {
        rows.iter().try_for_each(|r| w.serialize(r))?;
    } else if let Some(sim) = &doc.simulation {
        let r = sim.report.as_ref();
        let exact = sim.exact.as_ref().and_then(|e| e.rational.as_deref());
        w.serialize(SimulationRow {
            mode: &sim.mode,
            strategy: &sim.strategy,
            scoring: &sim.scoring,
            trials: r.map(|r| r.trials),
            successes: r.map(|r| r.successes),
            estimate: r.map(|r| r.estimate).or(sim.exact.as_ref().map(|e| e.decimal)),
            std_error: r.map(|r| r.std_error),
            ci95_low: r.map(|r| r.ci95[0]),
            ci95_high: r.map(|r| r.ci95[1]),
            seed: r.map(|r| r.seed),
            shards: r.map(|r| r.shards),
            exact_reference: r.and_then(|r| r.exact_reference),
            z_score: r.and_then(|r| r.z_score),
            exact_rational: exact,
        })?;
    } else if let Some(opt) = &doc.optimize {
        let rational = opt.value.rational.as_deref().unwrap_or("");
        for pair in &opt.optima {
            let (alice, bob) = pair.split_once('/').unwrap_or((pair, pair));
            w.serialize(OptimumRow {
                alice,
                bob,
                wins: opt.wins,
                value_rational: rational,
                value_decimal: opt.value.decimal,
            })?;
        }
    } else if let Some(rows) = &doc.tables {
        rows.iter().try_for_each(|r| w.serialize(r))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn render_text(doc: &Document) -> String {
    let mut s = String::new();
    let g = &doc.game;
    let _ = writeln!(
        s,
        "game: m = {}, fov = {}°, path spacing = {}°",
        g.m, g.fov_deg, g.azimuth_step_deg
    );
    if let Some(p) = &doc.protocol {
        let _ = writeln!(s, "protocol: {p}");
    }
    if let Some(rows) = &doc.tables {
        let _ = writeln!(
            s,
            "\n  i  j     P(++)    P(+-)    P(-+)    P(--)   P(same)   P(opp)     E"
        );
        for r in rows {
            let _ = writeln!(
                s,
                "  {}  {}  {:8.5} {:8.5} {:8.5} {:8.5}  {:8.5} {:8.5} {:+8.5}",
                r.alice_path, r.bob_path, r.p_pp, r.p_pm, r.p_mp, r.p_mm, r.p_same, r.p_opp, r.correlation
            );
        }
        s.push('\n');
    }
    if let Some(opt) = &doc.optimize {
        let _ = writeln!(
            s,
            "best classical success: {}, winning {} path pairs",
            opt.value.text(),
            opt.wins
        );
        let _ = writeln!(s, "optimal pairs ({}): {}", opt.optima.len(), opt.optima.join(" "));
    }
    if let Some(v) = &doc.success {
        let _ = writeln!(s, "success probability: {}", v.text());
    }
    if let Some(b) = &doc.bell {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.12}"));
        let _ = writeln!(
            s,
            "probability form: {} (local bound {})",
            opt(b.eq2_value),
            b.eq2_bound
        );
        let _ = writeln!(
            s,
            "correlation form: {} (signed {}, local bound {})",
            opt(b.corr_value),
            opt(b.corr_value_signed),
            b.corr_bound
        );
    }
    if let Some(sim) = &doc.simulation {
        let _ = writeln!(s, "strategy: {} ({} scoring, {})", sim.strategy, sim.scoring, sim.mode);
        if let Some(r) = &sim.report {
            let _ = writeln!(
                s,
                "estimate: {:.6} ± {:.6} ({} / {} trials), 95% CI [{:.6}, {:.6}]",
                r.estimate, r.std_error, r.successes, r.trials, r.ci95[0], r.ci95[1]
            );
            let _ = writeln!(s, "seed: {}, shards: {}", r.seed, r.shards);
            if let Some(z) = r.z_score {
                let _ = writeln!(s, "z-score vs exact: {z:+.3}");
            }
        }
        if let Some(e) = &sim.exact {
            let _ = writeln!(s, "exact: {}", e.text());
        }
    }
    if let Some(rows) = &doc.geometry {
        let _ = writeln!(s, "\n  A      B      lon A    lon B    sep    meets  task");
        for r in rows {
            let _ = writeln!(
                s,
                "  {}{}     {}{}    {:7.2}  {:7.2}  {:6.2}  {:5}  {}",
                r.alice_path,
                r.alice_dir,
                r.bob_path,
                r.bob_dir,
                r.alice_longitude_deg,
                r.bob_longitude_deg,
                r.separation_deg,
                r.meets,
                r.task_success
            );
        }
        let meets = rows.iter().filter(|r| r.meets).count();
        let agree = rows.iter().filter(|r| r.meets == r.task_success).count();
        let _ = writeln!(
            s,
            "\n{meets}/{} joint choices meet; {agree} agree with the task matrix",
            rows.len()
        );
    }
    if let Some(rows) = &doc.sweep {
        let _ = writeln!(s, "\n  {:>10}  {:>10}  {:>16}", "value", "quantum", "classical best");
        for r in rows {
            let _ = writeln!(
                s,
                "  {:10.4}  {:10.6}  {:>8.6} {:>7}",
                r.value, r.quantum_success, r.classical_best, r.classical_best_rational
            );
        }
    }
    s
}
