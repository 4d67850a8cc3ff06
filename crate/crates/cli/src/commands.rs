use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use qiradar_core::bounds::{crossover_m, evaluate, fig3_table, BoundName, BoundRow};
use qiradar_core::export;
use qiradar_core::mc::{check_budget, empirical_roc, run_trials, with_workers, FadingModel, TrialBatch};
use qiradar_core::roc::{analytic_roc, RocCurve, RocMethod, SaddleVariant};
use qiradar_core::{Error, Hypothesis, RadarKind, RadarScenario, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::manifest::RunManifest;
use crate::ranges::{PfGrid, Range, Sweep};

pub const DEFAULT_BOUNDS: [BoundName; 3] = [BoundName::TanCs, BoundName::TanQi, BoundName::CsBhattacharyya];

/// `fig5` curves in file order, with the method each one uses.
pub const FIG5_CURVES: [(RadarKind, RocMethod); 5] = [
    (RadarKind::CsHet, RocMethod::Exact),
    (RadarKind::Ccn, RocMethod::Saddlepoint),
    (RadarKind::Qcn, RocMethod::Saddlepoint),
    (RadarKind::CsHom, RocMethod::Exact),
    (RadarKind::QiOpa, RocMethod::Saddlepoint),
];

pub const FIG5_ANALYTIC_GRID: PfGrid = PfGrid { lo_log10: -7.0, hi_log10: -0.301_029_995_663_981_2, n: 41 };
pub const MC_GRID: PfGrid = PfGrid { lo_log10: -3.0, hi_log10: -0.301_029_995_663_981_2, n: 15 };

/// Desk-scale stand-in for the full-scale `fig5` scenario.
pub fn desk_scenario(full: &RadarScenario) -> RadarScenario {
    RadarScenario { m_modes: 2_000, kappa: 0.1, n_s: 0.1, ..*full }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fig5Mode {
    Analytic,
    McDesk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RocChoice {
    Analytic(RocMethod),
    MonteCarlo,
}

impl std::str::FromStr for RocChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monte-carlo" | "mc" => Ok(RocChoice::MonteCarlo),
            _ => s.parse().map(RocChoice::Analytic).map_err(|_| {
                Error::Incompatible(format!(
                    "unknown method '{s}' (expected exact, saddlepoint, appendix_d, monte-carlo)"
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisChoice {
    H0,
    H1,
    Both,
}

impl HypothesisChoice {
    fn list(self) -> &'static [Hypothesis] {
        match self {
            HypothesisChoice::H0 => &[Hypothesis::H0],
            HypothesisChoice::H1 => &[Hypothesis::H1],
            HypothesisChoice::Both => &[Hypothesis::H0, Hypothesis::H1],
        }
    }
}

impl std::str::FromStr for HypothesisChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h0" => Ok(HypothesisChoice::H0),
            "h1" => Ok(HypothesisChoice::H1),
            "both" => Ok(HypothesisChoice::Both),
            _ => Err(Error::Incompatible(format!("unknown hypothesis '{s}' (expected h0, h1, both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    Bounds {
        sweep: Option<Sweep>,
        bounds: Vec<BoundName>,
    },
    Fig3 {
        m_range: Range,
    },
    Fig5 {
        mode: Fig5Mode,
        grid: PfGrid,
        trials: u64,
        full_scale: bool,
    },
    Roc {
        radar: RadarKind,
        method: RocChoice,
        grid: PfGrid,
        variant: SaddleVariant,
        trials: u64,
        trace: bool,
    },
    Mc {
        radar: RadarKind,
        trials: u64,
        hypotheses: HypothesisChoice,
        fading: FadingModel,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds { .. } => "bounds",
            Command::Fig3 { .. } => "fig3",
            Command::Fig5 { .. } => "fig5",
            Command::Roc { .. } => "roc",
            Command::Mc { .. } => "mc",
        }
    }
}

/// A fully resolved run: everything needed to regenerate its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub command: Command,
    pub scenario: RadarScenario,
    pub seed: u64,
    pub budget: u64,
    /// Thread count; does not affect any output.
    pub workers: usize,
    pub out: PathBuf,
}

/// `dir/stem_suffix.ext` beside `out`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    out.with_file_name(name)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

struct Outcome {
    outputs: Vec<PathBuf>,
    extra: serde_json::Value,
}

impl Invocation {
    /// Runs the command, writes its CSVs and the manifest, and returns the manifest.
    pub fn execute(&self) -> Result<RunManifest> {
        self.scenario.validate()?;
        let outcome = with_workers(self.workers, || self.run())??;
        let manifest = RunManifest::new(self.clone(), outcome.outputs, outcome.extra);
        manifest.write()?;
        Ok(manifest)
    }

    fn run(&self) -> Result<Outcome> {
        let out = &self.out;
        match &self.command {
            Command::Bounds { sweep, bounds } => {
                let scenarios = match sweep {
                    Some(sw) => sw.scenarios(&self.scenario),
                    None => vec![self.scenario],
                };
                let mut rows = Vec::with_capacity(scenarios.len() * bounds.len());
                for s in &scenarios {
                    for &b in bounds {
                        rows.push(BoundRow::new(s, evaluate(b, s)?));
                    }
                }
                export::write_bounds(create(out)?, &rows)?;
                Ok(Outcome { outputs: vec![out.clone()], extra: json!({ "rows": rows.len() }) })
            }
            Command::Fig3 { m_range } => {
                let s = &self.scenario;
                let rows = fig3_table(&m_range.values(), s.kappa, s.n_s, s.n_b)?;
                export::write_fig3(create(out)?, &rows)?;
                let crossover = crossover_m(s.kappa, s.n_s, s.n_b)?;
                Ok(Outcome { outputs: vec![out.clone()], extra: json!({ "crossover": crossover }) })
            }
            Command::Fig5 { mode: Fig5Mode::Analytic, grid, .. } => {
                let curves = fig5_curves(&self.scenario, &grid.values())?;
                export::write_roc_curves(create(out)?, &curves)?;
                Ok(Outcome { outputs: vec![out.clone()], extra: json!({ "curves": FIG5_CURVES.len() }) })
            }
            Command::Fig5 { mode: Fig5Mode::McDesk, grid, trials, full_scale } => {
                if grid.lo_log10 < -3.0 {
                    return Err(Error::Incompatible(format!(
                        "desk Monte Carlo covers P_F >= 1e-3 only; grid starts at 1e{}",
                        grid.lo_log10
                    )));
                }
                let scenario = if *full_scale { self.scenario } else { desk_scenario(&self.scenario) };
                check_budget(*trials, scenario.m_modes, self.budget)?;
                let pf = grid.values();
                let mut outputs = vec![out.clone()];
                export::write_roc_curves(create(out)?, &fig5_curves(&scenario, &pf)?)?;
                for (radar, _) in FIG5_CURVES {
                    let est = mc_roc(&scenario, radar, *trials, self.seed, self.budget, &pf)?;
                    let path = sibling(out, &format!("{radar}_mc"));
                    export::write_roc_estimate(create(&path)?, &est)?;
                    outputs.push(path);
                }
                let extra = json!({ "full_scenario": self.scenario, "simulated_scenario": scenario, "full_scale": full_scale });
                Ok(Outcome { outputs, extra })
            }
            Command::Roc { radar, method: RocChoice::MonteCarlo, grid, trials, .. } => {
                let est = mc_roc(&self.scenario, *radar, *trials, self.seed, self.budget, &grid.values())?;
                export::write_roc_estimate(create(out)?, &est)?;
                Ok(Outcome { outputs: vec![out.clone()], extra: json!({}) })
            }
            Command::Roc { radar, method: RocChoice::Analytic(method), grid, variant, trace, .. } => {
                let (curve, saddle) = analytic_roc(*radar, *method, &self.scenario, &grid.values(), *variant)?;
                export::write_roc_curves(create(out)?, &[curve])?;
                let mut outputs = vec![out.clone()];
                if let (true, Some(t)) = (*trace, saddle) {
                    let path = sibling(out, "trace");
                    export::write_saddle_trace(create(&path)?, &t)?;
                    outputs.push(path);
                }
                Ok(Outcome { outputs, extra: json!({}) })
            }
            Command::Mc { radar, trials, hypotheses, fading } => {
                let list = hypotheses.list();
                let mut outputs = Vec::new();
                let mut means = serde_json::Map::new();
                for &h in list {
                    let batch = run_trials(&self.scenario, *radar, h, *trials, self.seed, *fading, self.budget)?;
                    let tag = serde_json::to_value(h)?.as_str().unwrap_or_default().to_owned();
                    let path = if list.len() == 1 { out.clone() } else { sibling(out, &tag) };
                    export::write_trial_batch(create(&path)?, &batch)?;
                    means.insert(tag, json!({ "mean": batch.mean(), "std_error": batch.std_error() }));
                    outputs.push(path);
                }
                Ok(Outcome { outputs, extra: serde_json::Value::Object(means) })
            }
        }
    }
}

pub fn fig5_curves(scenario: &RadarScenario, pf: &[f64]) -> Result<Vec<RocCurve>> {
    FIG5_CURVES
        .iter()
        .map(|&(radar, method)| Ok(analytic_roc(radar, method, scenario, pf, SaddleVariant::Corrected)?.0))
        .collect()
}

fn mc_roc(
    scenario: &RadarScenario,
    radar: RadarKind,
    trials: u64,
    seed: u64,
    budget: u64,
    pf: &[f64],
) -> Result<qiradar_core::mc::RocEstimate> {
    let run = |h| -> Result<TrialBatch> { run_trials(scenario, radar, h, trials, seed, FadingModel::None, budget) };
    empirical_roc(&run(Hypothesis::H0)?, &run(Hypothesis::H1)?, pf)
}
