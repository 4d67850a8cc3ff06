//! Special functions, closed-form ROCs, and the saddle-point ROC approximation.

pub mod analytic;
pub mod saddle;
pub mod special;

pub use analytic::{
    ccn_asymptotic_roc, check_method, cs_het_roc, cs_hom_roc, log_pf_grid, valid_methods, RocCurve, RocMethod,
    RocPoint,
};
pub use saddle::{
    chernoff, default_s_grid, pm_at_pf, provider_for, saddlepoint_roc, saddlepoint_roc_at, GaussianLogMgf,
    GaussianShift, GeometricLogMgf, LogMgf, MuPoint, SaddlePointTrace, SaddleVariant,
};
pub use special::{bessel_i0, gaussian_q, gaussian_q_inv, marcum_q};

use crate::error::Result;
use crate::radar::RadarKind;
use crate::scenario::RadarScenario;

/// Analytic ROC for any compatible radar/method pair. The saddle-point trace
/// comes back too when that method is used.
pub fn analytic_roc(
    radar: RadarKind,
    method: RocMethod,
    scenario: &RadarScenario,
    pf_grid: &[f64],
    variant: SaddleVariant,
) -> Result<(RocCurve, Option<SaddlePointTrace>)> {
    check_method(radar, method)?;
    let scenario = scenario.validate()?;
    match (method, radar) {
        (RocMethod::Exact, RadarKind::CsHet) => Ok((cs_het_roc(&scenario, pf_grid)?, None)),
        (RocMethod::Exact, _) => Ok((cs_hom_roc(&scenario, pf_grid)?, None)),
        (RocMethod::Combiner, _) => Ok((ccn_asymptotic_roc(&scenario, pf_grid)?, None)),
        (RocMethod::Saddlepoint, _) => {
            let provider = provider_for(radar, &scenario)?;
            let trace = saddlepoint_roc_at(provider.as_ref(), pf_grid, variant)?;
            Ok((trace.curve(radar, scenario), Some(trace)))
        }
    }
}
