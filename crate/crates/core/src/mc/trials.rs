//! Trial engine: per-trial decision statistics under one hypothesis.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Geometric, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::llr::{FusedKernel, Llr};
use super::rng::{run_key, trial_rng};
use super::sample::pivoted_cholesky;
use crate::error::{Error, Result};
use crate::gaussian::{noise_radar_covariance, opa_output_stats, Hypothesis, NoiseRadar};
use crate::radar::RadarKind;
use crate::scenario::RadarScenario;

/// Default cap on `trials × M` per run.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "QIRADAR_BUDGET";

pub fn check_budget(trials: u64, m_modes: u64, budget: u64) -> Result<()> {
    let requested = trials as u128 * m_modes as u128;
    if requested > budget as u128 {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FadingModel {
    /// `κ` and `θ` fixed at the scenario values.
    #[default]
    None,
    /// `√κ` Rayleigh with `⟨κ⟩ = mean_kappa`, `θ` uniform, redrawn every trial.
    RayleighUniform { mean_kappa: f64 },
}

impl FadingModel {
    pub fn validate(self) -> Result<Self> {
        if let FadingModel::RayleighUniform { mean_kappa } = self {
            if !(mean_kappa > 0.0 && mean_kappa < 1.0) {
                return Err(Error::OutOfRange { field: "mean_kappa", range: "(0,1)", value: mean_kappa });
            }
        }
        Ok(self)
    }

    /// One `(κ, θ)` draw. `κ` is exponential (so `√κ` is Rayleigh); draws above
    /// one are rejected because `κ` is a transmissivity.
    pub fn draw<R: Rng + ?Sized>(&self, scenario: &RadarScenario, rng: &mut R) -> (f64, f64) {
        match *self {
            FadingModel::None => (scenario.kappa, scenario.theta),
            FadingModel::RayleighUniform { mean_kappa } => {
                let exp = Exp::new(1.0 / mean_kappa).expect("validated mean");
                let kappa = loop {
                    let k: f64 = exp.sample(rng);
                    if k <= 1.0 {
                        break k;
                    }
                };
                let theta = rng.random::<f64>() * TAU;
                (kappa, theta)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBatch {
    pub radar: RadarKind,
    pub hypothesis: Hypothesis,
    pub statistics: Vec<f64>,
    pub m_modes: u64,
    pub trials: u64,
    pub seed: u64,
    pub fading: FadingModel,
    pub scenario: RadarScenario,
    /// How trial streams were generated.
    pub rng: String,
}

impl TrialBatch {
    pub fn mean(&self) -> f64 {
        self.statistics.iter().sum::<f64>() / self.statistics.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let n = self.statistics.len() as f64;
        self.statistics.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
    }

    /// Standard error of [`Self::mean`].
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.statistics.len() as f64).sqrt()
    }
}

const RNG_DESCRIPTION: &str = "chacha8; key=splitmix(seed,radar,hypothesis); stream=trial";

fn batch(
    scenario: &RadarScenario,
    radar: RadarKind,
    hypothesis: Hypothesis,
    trials: u64,
    seed: u64,
    fading: FadingModel,
    statistics: Vec<f64>,
) -> TrialBatch {
    TrialBatch {
        radar,
        hypothesis,
        statistics,
        m_modes: scenario.m_modes,
        trials,
        seed,
        fading,
        scenario: *scenario,
        rng: RNG_DESCRIPTION.into(),
    }
}

fn run_parallel<F>(key: &[u8; 32], trials: u64, per_trial: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| per_trial(&mut trial_rng(key, t)))
        .collect()
}

/// Kernel and factor for one `(κ, θ)`.
fn gaussian_kernel(radar: NoiseRadar, scenario: &RadarScenario, h: Hypothesis) -> Result<FusedKernel> {
    let h0 = noise_radar_covariance(radar, scenario, Hypothesis::H0)?;
    let h1 = noise_radar_covariance(radar, scenario, Hypothesis::H1)?;
    let llr = Llr::new(&h0, &h1)?;
    let draw = if h == Hypothesis::H0 { &h0 } else { &h1 };
    Ok(FusedKernel::new(&llr, &pivoted_cholesky(draw.matrix())?))
}

fn sum_modes(kernel: &FusedKernel, m: u64, rng: &mut ChaCha8Rng) -> f64 {
    let mut acc = 0.0;
    for _ in 0..m {
        let z = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        acc += kernel.quad(&z);
    }
    acc + m as f64 * kernel.offset
}

/// Summed per-mode LLR for the QCN or CCN radar.
///
/// With fading, each trial draws its own `(κ, θ)` under either hypothesis and
/// the statistic is the LLR at those values (a clairvoyant receiver).
pub fn run_trials_gaussian(
    scenario: &RadarScenario,
    radar: RadarKind,
    hypothesis: Hypothesis,
    trials: u64,
    seed: u64,
    fading: FadingModel,
    budget: u64,
) -> Result<TrialBatch> {
    let scenario = scenario.validate()?;
    let fading = fading.validate()?;
    let noise = radar.noise_radar().ok_or_else(|| {
        Error::Incompatible(format!("radar '{radar}' is not a correlated-noise radar (expected qcn or ccn)"))
    })?;
    check_budget(trials, scenario.m_modes, budget)?;
    let key = run_key(seed, radar, hypothesis);
    let m = scenario.m_modes;
    let stats = match fading {
        FadingModel::None => {
            let kernel = gaussian_kernel(noise, &scenario, hypothesis)?;
            run_parallel(&key, trials, |rng| Ok(sum_modes(&kernel, m, rng)))?
        }
        FadingModel::RayleighUniform { .. } => run_parallel(&key, trials, |rng| {
            let (kappa, theta) = fading.draw(&scenario, rng);
            let drawn = RadarScenario { kappa, theta, ..scenario };
            let kernel = gaussian_kernel(noise, &drawn, hypothesis)?;
            Ok(sum_modes(&kernel, m, rng))
        })?,
    };
    Ok(batch(&scenario, radar, hypothesis, trials, seed, fading, stats))
}

/// Coherent-state radars with known `κ` and `θ`.
///
/// CS-Hom: normalised homodyne sum `Σx/√(M(2N_B+1)/4)`, phase-tracked local
/// oscillator. CS-Het: `|Σy|²/(M(N_B+1)/2)` over complex heterodyne outputs,
/// i.e. an envelope detector.
pub fn run_trials_cs(
    scenario: &RadarScenario,
    radar: RadarKind,
    hypothesis: Hypothesis,
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<TrialBatch> {
    let scenario = scenario.validate()?;
    check_budget(trials, scenario.m_modes, budget)?;
    let key = run_key(seed, radar, hypothesis);
    let m = scenario.m_modes;
    let amp = match hypothesis {
        Hypothesis::H0 => 0.0,
        Hypothesis::H1 => (scenario.kappa * scenario.n_s).sqrt(),
    };
    let stats = match radar {
        RadarKind::CsHom => {
            let sigma = ((2.0 * scenario.n_b + 1.0) / 4.0).sqrt();
            let norm = (m as f64).sqrt() * sigma;
            run_parallel(&key, trials, |rng| {
                let mut acc = 0.0;
                for _ in 0..m {
                    let z: f64 = rng.sample(StandardNormal);
                    acc += amp + sigma * z;
                }
                Ok(acc / norm)
            })?
        }
        RadarKind::CsHet => {
            let sigma = ((scenario.n_b + 1.0) / 2.0).sqrt();
            let (s, c) = scenario.theta.sin_cos();
            let norm = m as f64 * sigma * sigma;
            run_parallel(&key, trials, |rng| {
                let (mut re, mut im) = (0.0, 0.0);
                for _ in 0..m {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    re += amp * c + sigma * z1;
                    im += amp * s + sigma * z2;
                }
                Ok((re * re + im * im) / norm)
            })?
        }
        _ => {
            return Err(Error::Incompatible(format!(
                "radar '{radar}' is not a coherent-state radar (expected cs-het or cs-hom)"
            )))
        }
    };
    Ok(batch(&scenario, radar, hypothesis, trials, seed, FadingModel::None, stats))
}

/// Total OPA idler-output photon count over `M` modes, each Bose-Einstein
/// distributed with the conditional mean.
pub fn run_trials_opa(
    scenario: &RadarScenario,
    hypothesis: Hypothesis,
    trials: u64,
    seed: u64,
    budget: u64,
) -> Result<TrialBatch> {
    let scenario = scenario.validate()?;
    check_budget(trials, scenario.m_modes, budget)?;
    let st = opa_output_stats(&scenario)?;
    let n = match hypothesis {
        Hypothesis::H0 => st.n0,
        Hypothesis::H1 => st.n1,
    };
    let geo = Geometric::new(1.0 / (1.0 + n))
        .map_err(|_| Error::Domain { what: "OPA mean count", domain: "[0,inf)", value: n })?;
    let key = run_key(seed, RadarKind::QiOpa, hypothesis);
    let m = scenario.m_modes;
    let stats = run_parallel(&key, trials, |rng| {
        let mut total = 0u64;
        for _ in 0..m {
            total += geo.sample(rng);
        }
        Ok(total as f64)
    })?;
    Ok(batch(&scenario, RadarKind::QiOpa, hypothesis, trials, seed, FadingModel::None, stats))
}

/// Dispatches on radar type.
pub fn run_trials(
    scenario: &RadarScenario,
    radar: RadarKind,
    hypothesis: Hypothesis,
    trials: u64,
    seed: u64,
    fading: FadingModel,
    budget: u64,
) -> Result<TrialBatch> {
    match radar {
        RadarKind::Qcn | RadarKind::Ccn => run_trials_gaussian(scenario, radar, hypothesis, trials, seed, fading, budget),
        _ if fading != FadingModel::None => Err(Error::Incompatible(format!(
            "fading is only simulated for qcn and ccn, not '{radar}'"
        ))),
        RadarKind::CsHet | RadarKind::CsHom => run_trials_cs(scenario, radar, hypothesis, trials, seed, budget),
        RadarKind::QiOpa => run_trials_opa(scenario, hypothesis, trials, seed, budget),
    }
}

/// Runs `f` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Incompatible(format!("cannot build a {workers}-thread pool: {e}")))?;
    Ok(pool.install(f))
}
