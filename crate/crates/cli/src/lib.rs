//! `qiradar` command-line front end. Every run writes its CSVs plus a
//! `<out>.manifest.json` that `qiradar replay` can regenerate them from.

pub mod commands;
pub mod manifest;
pub mod ranges;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qiradar_core::bounds::BoundName;
use qiradar_core::mc::{FadingModel, BUDGET_ENV, DEFAULT_BUDGET};
use qiradar_core::roc::SaddleVariant;
use qiradar_core::{Error, RadarKind, RadarScenario, Result};

use commands::{Command, Fig5Mode, HypothesisChoice, Invocation, RocChoice, DEFAULT_BOUNDS, FIG5_ANALYTIC_GRID, MC_GRID};
use manifest::RunManifest;
use ranges::{PfGrid, Range, Sweep};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        e if e.is_validation() => EXIT_VALIDATION,
        _ => EXIT_FAILURE,
    }
}

fn count(text: &str) -> std::result::Result<u64, String> {
    ranges::parse_count(text).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qiradar", version, about = "Quantum-illumination and noise-radar detection lab")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario JSON; keys are RadarScenario field names, unknown keys are rejected.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Main output CSV; the manifest goes to `<out>.manifest.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest trials x modes product a Monte Carlo run may use.
    #[arg(long, global = true, env = BUDGET_ENV, value_parser = count)]
    pub budget: Option<u64>,
    /// Worker threads (0 uses every core). Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(flatten)]
    pub overrides: ScenarioOverrides,
}

/// Per-field overrides applied on top of `--scenario` (or the defaults).
#[derive(Debug, Args, Default)]
pub struct ScenarioOverrides {
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true)]
    pub n_s: Option<f64>,
    #[arg(long, global = true)]
    pub n_b: Option<f64>,
    #[arg(long, global = true)]
    pub n_i: Option<f64>,
    #[arg(long, global = true)]
    pub n_f: Option<f64>,
    #[arg(long, global = true)]
    pub g_a: Option<f64>,
    /// Time-bandwidth product M.
    #[arg(long = "m", global = true, value_parser = count)]
    pub m_modes: Option<u64>,
    #[arg(long, global = true, value_parser = count)]
    pub n_pulses: Option<u64>,
    #[arg(long, global = true)]
    pub g_opa: Option<f64>,
    #[arg(long, global = true)]
    pub kappa_idler: Option<f64>,
    #[arg(long, global = true)]
    pub kappa_match: Option<f64>,
    #[arg(long, global = true, value_parser = count)]
    pub k_bins: Option<u64>,
}

impl ScenarioOverrides {
    pub fn apply(&self, base: RadarScenario) -> RadarScenario {
        let mut s = base;
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { s.$f = v; })* };
        }
        set!(kappa, theta, n_s, n_b, n_i, n_f, g_a, m_modes, n_pulses, kappa_idler, kappa_match, k_bins);
        if self.g_opa.is_some() {
            s.g_opa = self.g_opa;
        }
        s
    }
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Error-probability bounds, optionally swept over one parameter.
    Bounds {
        /// `param=lo:hi:N[log|lin]`, e.g. `M=1e4:1e8:25log`.
        #[arg(long)]
        sweep: Option<Sweep>,
        /// Bound to evaluate (repeatable); defaults to tan_cs, tan_qi, cs_bhattacharyya.
        #[arg(long = "bound")]
        bounds: Vec<BoundName>,
    },
    /// CS and QI error bounds against M, with the crossover in the manifest.
    Fig3 {
        #[arg(long, default_value = "1e4:1e8:41log")]
        m_range: Range,
    },
    /// Five-radar ROC comparison.
    Fig5 {
        #[arg(long, default_value = "analytic", value_parser = ["analytic", "mc-desk"])]
        mode: String,
        /// log10(P_F) grid `lo:hi:N`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<PfGrid>,
        /// Trials per hypothesis for mc-desk.
        #[arg(long, default_value = "2e4", value_parser = count)]
        trials: u64,
        /// Simulate the scenario as given instead of the desk-scale stand-in.
        #[arg(long)]
        full_scale: bool,
    },
    /// ROC for one radar by an analytic method or Monte Carlo.
    Roc {
        #[arg(long)]
        radar: RadarKind,
        /// exact, saddlepoint, appendix_d or monte-carlo.
        #[arg(long)]
        method: RocChoice,
        /// log10(P_F) grid `lo:hi:N`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<PfGrid>,
        #[arg(long, default_value = "corrected")]
        variant: SaddleVariant,
        #[arg(long, default_value = "2e4", value_parser = count)]
        trials: u64,
        /// Also write the saddle-point trace to `<out>_trace.csv`.
        #[arg(long)]
        trace: bool,
    },
    /// Raw per-trial decision statistics.
    Mc {
        #[arg(long)]
        radar: RadarKind,
        #[arg(long, default_value = "1e4", value_parser = count)]
        trials: u64,
        /// h0, h1 or both (both writes `<out>_h0` and `<out>_h1`).
        #[arg(long, default_value = "both")]
        hypothesis: HypothesisChoice,
        /// Mean transmissivity for Rayleigh fading with uniform phase.
        #[arg(long)]
        fading_mean: Option<f64>,
    },
    /// Regenerate the outputs recorded in a manifest.
    Replay {
        manifest: PathBuf,
    },
}

impl Cli {
    /// Resolves defaults, the scenario file and overrides into a runnable invocation.
    pub fn resolve(self) -> Result<Invocation> {
        let c = self.common;
        if let CommandArgs::Replay { manifest } = self.command {
            let mut inv = RunManifest::read(&manifest)?.invocation;
            if let Some(out) = c.out {
                inv.out = out;
            }
            inv.workers = c.workers;
            return Ok(inv);
        }
        let base = match &c.scenario {
            Some(path) => RadarScenario::from_json_file(path)?,
            None => RadarScenario::default(),
        };
        let scenario = c.overrides.apply(base).validate()?;
        let (command, default_out) = match self.command {
            CommandArgs::Bounds { sweep, bounds } => {
                let bounds = if bounds.is_empty() { DEFAULT_BOUNDS.to_vec() } else { bounds };
                (Command::Bounds { sweep, bounds }, "bounds.csv")
            }
            CommandArgs::Fig3 { m_range } => (Command::Fig3 { m_range }, "fig3.csv"),
            CommandArgs::Fig5 { mode, grid, trials, full_scale } => {
                let mode = if mode == "mc-desk" { Fig5Mode::McDesk } else { Fig5Mode::Analytic };
                let default_grid = if mode == Fig5Mode::McDesk { MC_GRID } else { FIG5_ANALYTIC_GRID };
                (Command::Fig5 { mode, grid: grid.unwrap_or(default_grid), trials, full_scale }, "fig5.csv")
            }
            CommandArgs::Roc { radar, method, grid, variant, trials, trace } => {
                if let RocChoice::Analytic(m) = method {
                    qiradar_core::roc::check_method(radar, m)?;
                }
                let default_grid = if method == RocChoice::MonteCarlo { MC_GRID } else { FIG5_ANALYTIC_GRID };
                let grid = grid.unwrap_or(default_grid);
                (Command::Roc { radar, method, grid, variant, trials, trace }, "roc.csv")
            }
            CommandArgs::Mc { radar, trials, hypothesis, fading_mean } => {
                let fading = match fading_mean {
                    Some(mean_kappa) => FadingModel::RayleighUniform { mean_kappa }.validate()?,
                    None => FadingModel::None,
                };
                (Command::Mc { radar, trials, hypotheses: hypothesis, fading }, "mc.csv")
            }
            CommandArgs::Replay { .. } => unreachable!(),
        };
        Ok(Invocation {
            command,
            scenario,
            seed: c.seed,
            budget: c.budget.unwrap_or(DEFAULT_BUDGET),
            workers: c.workers,
            out: c.out.unwrap_or_else(|| PathBuf::from(default_out)),
        })
    }
}

/// Parses, runs and reports; returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.resolve().and_then(|inv| inv.execute()) {
        Ok(m) => {
            for p in &m.outputs {
                println!("{}", p.display());
            }
            println!("{}", RunManifest::path_for(&m.invocation.out).display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
