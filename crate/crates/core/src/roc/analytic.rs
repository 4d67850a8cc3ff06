//! Closed-form ROCs: coherent-state heterodyne and homodyne, and the
//! large-`M`, large-`N_I` maximal-ratio-combiner form for the CCN radar.

use serde::{Deserialize, Serialize};

use super::special::{gaussian_q, gaussian_q_inv, marcum_q};
use crate::error::{Error, Result};
use crate::radar::RadarKind;
use crate::scenario::RadarScenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RocMethod {
    Exact,
    Saddlepoint,
    /// Large-`M` maximal-ratio-combiner approximation.
    #[serde(rename = "appendix_d")]
    Combiner,
}

impl RocMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RocMethod::Exact => "exact",
            RocMethod::Saddlepoint => "saddlepoint",
            RocMethod::Combiner => "appendix_d",
        }
    }
}

impl std::fmt::Display for RocMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RocMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RocMethod::Exact),
            "saddlepoint" => Ok(RocMethod::Saddlepoint),
            "appendix_d" | "appendix-d" => Ok(RocMethod::Combiner),
            _ => Err(Error::Incompatible(format!(
                "unknown method '{s}' (expected exact, saddlepoint, appendix_d)"
            ))),
        }
    }
}

/// Methods that can produce an ROC for `radar`.
pub fn valid_methods(radar: RadarKind) -> &'static [RocMethod] {
    match radar {
        RadarKind::CsHet | RadarKind::CsHom => &[RocMethod::Exact],
        RadarKind::Ccn => &[RocMethod::Saddlepoint, RocMethod::Combiner],
        RadarKind::Qcn | RadarKind::QiOpa => &[RocMethod::Saddlepoint],
    }
}

pub fn check_method(radar: RadarKind, method: RocMethod) -> Result<()> {
    let valid = valid_methods(radar);
    if valid.contains(&method) {
        return Ok(());
    }
    let names: Vec<_> = valid.iter().map(|m| m.as_str()).collect();
    Err(Error::Incompatible(format!(
        "method '{method}' is not available for radar '{radar}'; valid methods: {}",
        names.join(", ")
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub pf: f64,
    pub pd: f64,
}

impl RocPoint {
    pub fn pm(&self) -> f64 {
        1.0 - self.pd
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub radar: RadarKind,
    pub method: RocMethod,
    pub points: Vec<RocPoint>,
    pub parameters: RadarScenario,
}

/// `n` log-spaced false-alarm probabilities from `10^lo` to `10^hi` inclusive.
pub fn log_pf_grid(lo_log10: f64, hi_log10: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![10f64.powf(lo_log10)],
        _ => (0..n)
            .map(|i| 10f64.powf(lo_log10 + (hi_log10 - lo_log10) * i as f64 / (n - 1) as f64))
            .collect(),
    }
}

pub(crate) fn check_pf(pf: f64) -> Result<()> {
    if pf > 0.0 && pf < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "false-alarm probability",
            domain: "(0,1)",
            value: pf,
        })
    }
}

/// Heterodyne coherent-state deflection `√(2MκN_S/(N_B+1))`.
pub fn cs_het_deflection(s: &RadarScenario) -> f64 {
    (2.0 * s.m() * s.kappa * s.n_s / (s.n_b + 1.0)).sqrt()
}

/// Homodyne coherent-state deflection `√(4MκN_S/(2N_B+1))`.
pub fn cs_hom_deflection(s: &RadarScenario) -> f64 {
    (4.0 * s.m() * s.kappa * s.n_s / (2.0 * s.n_b + 1.0)).sqrt()
}

/// Maximal-ratio-combiner CCN deflection `√(2MκN_S/(N_B+N_F))`.
pub fn ccn_asymptotic_deflection(s: &RadarScenario) -> f64 {
    (2.0 * s.m() * s.kappa * s.n_s / (s.n_b + s.n_f)).sqrt()
}

fn curve(
    scenario: &RadarScenario,
    radar: RadarKind,
    method: RocMethod,
    pf_grid: &[f64],
    pd: impl Fn(f64) -> Result<f64>,
) -> Result<RocCurve> {
    let scenario = scenario.validate()?;
    let points = pf_grid
        .iter()
        .map(|&pf| {
            check_pf(pf)?;
            Ok(RocPoint { pf, pd: pd(pf)? })
        })
        .collect::<Result<_>>()?;
    Ok(RocCurve { radar, method, points, parameters: scenario })
}

/// `P_D = Q₁(√(2MκN_S/(N_B+1)), √(-2 ln P_F))`.
pub fn cs_het_roc(scenario: &RadarScenario, pf_grid: &[f64]) -> Result<RocCurve> {
    let a = cs_het_deflection(scenario);
    curve(scenario, RadarKind::CsHet, RocMethod::Exact, pf_grid, |pf| {
        marcum_q(a, (-2.0 * pf.ln()).sqrt())
    })
}

/// `P_D = Q(Q⁻¹(P_F) - √(4MκN_S/(2N_B+1)))`.
pub fn cs_hom_roc(scenario: &RadarScenario, pf_grid: &[f64]) -> Result<RocCurve> {
    let d = cs_hom_deflection(scenario);
    curve(scenario, RadarKind::CsHom, RocMethod::Exact, pf_grid, |pf| {
        Ok(gaussian_q(gaussian_q_inv(pf)? - d))
    })
}

/// `P_D ≈ Q(Q⁻¹(P_F) - √(2MκN_S/(N_B+N_F)))`.
pub fn ccn_asymptotic_roc(scenario: &RadarScenario, pf_grid: &[f64]) -> Result<RocCurve> {
    let d = ccn_asymptotic_deflection(scenario);
    curve(scenario, RadarKind::Ccn, RocMethod::Combiner, pf_grid, |pf| {
        Ok(gaussian_q(gaussian_q_inv(pf)? - d))
    })
}
