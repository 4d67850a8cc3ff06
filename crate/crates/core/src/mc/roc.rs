//! Empirical ROC from paired H0/H1 trial batches.

use serde::{Deserialize, Serialize};

use super::trials::TrialBatch;
use crate::error::{Error, Result};
use crate::gaussian::Hypothesis;
use crate::radar::RadarKind;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes/n` at normal quantile `z`.
pub fn wilson_interval(p_hat: f64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / den;
    let half = z / den * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocEstimatePoint {
    pub pf: f64,
    pub pd: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// False when `pf < 1/trials`, where the H0 quantile is not resolved.
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocEstimate {
    pub radar: RadarKind,
    pub points: Vec<RocEstimatePoint>,
    /// Trials per hypothesis (the H1 count used for the intervals).
    pub trials: u64,
    pub method: String,
}

impl RocEstimate {
    pub fn at(&self, pf: f64) -> Option<&RocEstimatePoint> {
        self.points.iter().find(|p| (p.pf / pf - 1.0).abs() < 1e-12)
    }
}

/// Exceedance count `#{x > t}` and tie count `#{x = t}` in a descending slice.
fn counts(desc: &[f64], t: f64) -> (usize, usize) {
    let gt = desc.partition_point(|&x| x > t);
    let ge = desc.partition_point(|&x| x >= t);
    (gt, ge - gt)
}

/// Thresholds at empirical H0 quantiles, randomising at ties so the realised
/// false-alarm fraction equals the target exactly; `P_D` is the matching H1
/// exceedance fraction with a 95% Wilson interval.
pub fn empirical_roc(h0: &TrialBatch, h1: &TrialBatch, pf_grid: &[f64]) -> Result<RocEstimate> {
    if h0.hypothesis != Hypothesis::H0 || h1.hypothesis != Hypothesis::H1 {
        return Err(Error::LabelMismatch("expected an H0 batch and an H1 batch".into()));
    }
    if h0.radar != h1.radar || h0.scenario != h1.scenario || h0.fading != h1.fading {
        return Err(Error::Incompatible("H0 and H1 batches come from different radars or scenarios".into()));
    }
    if h0.statistics.is_empty() || h1.statistics.is_empty() {
        return Err(Error::Incompatible("empty trial batch".into()));
    }
    let mut d0 = h0.statistics.clone();
    let mut d1 = h1.statistics.clone();
    d0.sort_by(|a, b| b.total_cmp(a));
    d1.sort_by(|a, b| b.total_cmp(a));
    let (n0, n1) = (d0.len(), d1.len());
    let mut grid = pf_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let points = grid
        .into_iter()
        .map(|pf| {
            crate::roc::analytic::check_pf(pf)?;
            let target = pf * n0 as f64;
            let j = (target.ceil() as usize).clamp(1, n0);
            let t = d0[j - 1];
            let (gt0, eq0) = counts(&d0, t);
            let q = ((target - gt0 as f64) / eq0 as f64).clamp(0.0, 1.0);
            let (gt1, eq1) = counts(&d1, t);
            let pd = (gt1 as f64 + q * eq1 as f64) / n1 as f64;
            let (ci_low, ci_high) = wilson_interval(pd, n1 as u64, Z95);
            Ok(RocEstimatePoint { pf, pd, ci_low, ci_high, reliable: pf >= 1.0 / n0 as f64 })
        })
        .collect::<Result<_>>()?;
    Ok(RocEstimate { radar: h0.radar, points, trials: n1 as u64, method: "monte-carlo".into() })
}
