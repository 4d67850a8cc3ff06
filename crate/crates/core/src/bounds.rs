//! Closed-form error-probability bounds for equally likely target absence
//! and presence, and the exponent penalties that erode them.
//!
//! Every upper bound has the form `Pr(e) ≤ exp(-E)/2`. Bounds are evaluated
//! even when their parameters fall outside the regime in which they were
//! derived; `regime_valid` records whether the regime check passed so that
//! parameter sweeps stay dense.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{classify_regime, RadarScenario, Regime, RegimeReport, SystemKind, DEFAULT_STRICTNESS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    LloydSp,
    LloydQi,
    PulsedCs,
    TanCs,
    TanQi,
    Opa,
    IdlerLossSfg,
    IdlerLossOpa,
    CsBhattacharyya,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::LloydSp => "lloyd_sp",
            BoundName::LloydQi => "lloyd_qi",
            BoundName::PulsedCs => "pulsed_cs",
            BoundName::TanCs => "tan_cs",
            BoundName::TanQi => "tan_qi",
            BoundName::Opa => "opa",
            BoundName::IdlerLossSfg => "idler_loss_sfg",
            BoundName::IdlerLossOpa => "idler_loss_opa",
            BoundName::CsBhattacharyya => "cs_bhattacharyya",
        }
    }

    pub const ALL: [BoundName; 9] = [
        BoundName::LloydSp,
        BoundName::LloydQi,
        BoundName::PulsedCs,
        BoundName::TanCs,
        BoundName::TanQi,
        BoundName::Opa,
        BoundName::IdlerLossSfg,
        BoundName::IdlerLossOpa,
        BoundName::CsBhattacharyya,
    ];
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = BoundName::ALL.iter().map(|b| b.as_str()).collect();
            Error::Incompatible(format!("unknown bound '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Which of Lloyd's two formulas to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LloydBranch {
    Good,
    Bad,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub name: BoundName,
    pub kind: BoundKind,
    /// Exponent per mode (Tan family) or per pulse (Lloyd family).
    pub exponent_per_mode: f64,
    pub total_exponent: f64,
    /// Natural log of `bound_value`; finite even where `bound_value` underflows.
    pub ln_value: f64,
    pub bound_value: f64,
    pub regime_valid: bool,
    pub regime: Option<RegimeReport>,
    pub note: Option<String>,
}

impl BoundResult {
    fn upper(name: BoundName, per_unit: f64, units: f64) -> Self {
        let total = if per_unit == 0.0 || units == 0.0 {
            0.0
        } else {
            per_unit * units
        };
        let ln_value = -total - std::f64::consts::LN_2;
        Self {
            name,
            kind: BoundKind::Upper,
            exponent_per_mode: per_unit,
            total_exponent: total,
            ln_value,
            bound_value: ln_value.exp(),
            regime_valid: true,
            regime: None,
            note: None,
        }
    }

    fn with_regime(mut self, report: RegimeReport, valid: bool) -> Self {
        self.regime_valid = valid;
        self.regime = Some(report);
        self
    }
}

fn in_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { what, domain: "[0,1]", value: x })
    }
}

fn nonneg(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain { what, domain: "[0,inf)", value: x })
    }
}

fn positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, domain: "(0,inf)", value: x })
    }
}

/// `a / b` with `0/0 = 0` (no signal) and `x/0 = inf`.
fn safe_div(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / b
    }
}

fn lloyd_regime(
    system: SystemKind,
    kappa: f64,
    n_b: f64,
    m: u64,
    branch: LloydBranch,
) -> Result<(RegimeReport, bool)> {
    let scen = RadarScenario {
        kappa,
        n_b,
        m_modes: m,
        ..Default::default()
    };
    let report = classify_regime(&scen, system, DEFAULT_STRICTNESS)?;
    let valid = matches!(
        (branch, report.regime),
        (LloydBranch::Good, Regime::Good) | (LloydBranch::Bad, Regime::Bad)
    );
    Ok((report, valid))
}

fn lloyd_inputs(n_pulses: u64, kappa: f64, n_b: f64, m: u64) -> Result<()> {
    in_unit("lloyd kappa", kappa)?;
    nonneg("lloyd n_b", n_b)?;
    if n_pulses == 0 || m == 0 {
        return Err(Error::Domain {
            what: "lloyd pulse/mode count",
            domain: "[1,inf)",
            value: n_pulses.min(m) as f64,
        });
    }
    Ok(())
}

/// Lloyd's single-photon radar: `exp(-Nκ)/2` (good) or `exp(-Nκ²/8N_B)/2` (bad).
pub fn lloyd_sp_bound(n_pulses: u64, kappa: f64, n_b: f64, m: u64, branch: LloydBranch) -> Result<BoundResult> {
    lloyd_inputs(n_pulses, kappa, n_b, m)?;
    let per_pulse = match branch {
        LloydBranch::Good => kappa,
        LloydBranch::Bad => safe_div(kappa * kappa, 8.0 * n_b),
    };
    let (report, valid) = lloyd_regime(SystemKind::Sp, kappa, n_b, m, branch)?;
    Ok(BoundResult::upper(BoundName::LloydSp, per_pulse, n_pulses as f64).with_regime(report, valid))
}

/// Lloyd's entangled radar: `exp(-Nκ)/2` (good) or `exp(-Nκ²M/8N_B)/2` (bad).
pub fn lloyd_qi_bound(n_pulses: u64, kappa: f64, n_b: f64, m: u64, branch: LloydBranch) -> Result<BoundResult> {
    lloyd_inputs(n_pulses, kappa, n_b, m)?;
    let per_pulse = match branch {
        LloydBranch::Good => kappa,
        LloydBranch::Bad => safe_div(kappa * kappa * m as f64, 8.0 * n_b),
    };
    let (report, valid) = lloyd_regime(SystemKind::QiLloyd, kappa, n_b, m, branch)?;
    Ok(BoundResult::upper(BoundName::LloydQi, per_pulse, n_pulses as f64).with_regime(report, valid))
}

/// `(√(1+N_B) - √N_B)²`, evaluated without cancellation.
pub fn coherent_overlap_factor(n_b: f64) -> f64 {
    let d = (1.0 + n_b).sqrt() + n_b.sqrt();
    1.0 / (d * d)
}

/// Coherent-state radar with unit mean photon number per pulse:
/// `exp(-Nκ(√(1+N_B)-√N_B)²)/2`, valid for every κ and N_B.
pub fn pulsed_cs_bound(n_pulses: u64, kappa: f64, n_b: f64) -> Result<BoundResult> {
    in_unit("pulsed_cs kappa", kappa)?;
    nonneg("pulsed_cs n_b", n_b)?;
    Ok(BoundResult::upper(
        BoundName::PulsedCs,
        kappa * coherent_overlap_factor(n_b),
        n_pulses as f64,
    ))
}

fn tan_inputs(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<()> {
    nonneg("modes", m)?;
    if !m.is_finite() {
        return Err(Error::Domain { what: "modes", domain: "[0,inf)", value: m });
    }
    in_unit("kappa", kappa)?;
    positive("n_s", n_s)?;
    nonneg("n_b", n_b)
}

fn tan_regime(system: SystemKind, kappa: f64, n_s: f64, n_b: f64) -> Result<(RegimeReport, bool)> {
    let scen = RadarScenario {
        kappa,
        n_s,
        n_b,
        m_modes: 1,
        ..Default::default()
    };
    let report = classify_regime(&scen, system, DEFAULT_STRICTNESS)?;
    let valid = report.regime == Regime::Bad;
    Ok((report, valid))
}

fn tan_family(name: BoundName, system: SystemKind, per_mode: f64, m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<BoundResult> {
    let (report, valid) = tan_regime(system, kappa, n_s, n_b)?;
    Ok(BoundResult::upper(name, per_mode, m).with_regime(report, valid))
}

/// Coherent-state radar Chernoff bound, exponent `MκN_S/4N_B`.
pub fn tan_cs_bound(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<BoundResult> {
    tan_inputs(m, kappa, n_s, n_b)?;
    let e = safe_div(kappa * n_s, 4.0 * n_b);
    tan_family(BoundName::TanCs, SystemKind::CsTan, e, m, kappa, n_s, n_b)
}

/// TMSV quantum-illumination Chernoff bound, exponent `MκN_S/N_B`.
pub fn tan_qi_bound(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<BoundResult> {
    tan_inputs(m, kappa, n_s, n_b)?;
    let e = safe_div(kappa * n_s, n_b);
    tan_family(BoundName::TanQi, SystemKind::QiTan, e, m, kappa, n_s, n_b)
}

/// OPA receiver Chernoff bound, exponent `MκN_S/2N_B`.
pub fn opa_bound(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<BoundResult> {
    tan_inputs(m, kappa, n_s, n_b)?;
    let e = safe_div(kappa * n_s, 2.0 * n_b);
    tan_family(BoundName::Opa, SystemKind::QiTan, e, m, kappa, n_s, n_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QiReceiver {
    /// Sum-frequency-generation receivers (with or without feed-forward).
    Sfg,
    /// Optical-parametric-amplifier or phase-conjugate receivers.
    Opa,
}

/// QI bound with idler-storage transmissivity `κ_I`; the note reports the
/// remaining advantage over [`tan_cs_bound`] in dB.
pub fn idler_loss_bound(m: f64, kappa: f64, n_s: f64, n_b: f64, kappa_idler: f64, receiver: QiReceiver) -> Result<BoundResult> {
    tan_inputs(m, kappa, n_s, n_b)?;
    if !(kappa_idler > 0.0 && kappa_idler <= 1.0) {
        return Err(Error::Domain { what: "kappa_idler", domain: "(0,1]", value: kappa_idler });
    }
    let (name, denom) = match receiver {
        QiReceiver::Sfg => (BoundName::IdlerLossSfg, n_b),
        QiReceiver::Opa => (BoundName::IdlerLossOpa, 2.0 * n_b),
    };
    let e = safe_div(kappa * kappa_idler * n_s, denom);
    let mut r = tan_family(name, SystemKind::QiTan, e, m, kappa, n_s, n_b)?;
    let cs = safe_div(kappa * n_s, 4.0 * n_b);
    if cs > 0.0 && cs.is_finite() {
        let adv = 10.0 * (e / cs).log10();
        r.note = Some(format!("advantage over coherent-state radar: {adv:.4} dB"));
    }
    Ok(r)
}

/// Per-bin exponent loss, in dB, when `k_bins` bins share one idler.
pub fn multibin_penalty(k_bins: u64) -> Result<f64> {
    if k_bins == 0 {
        return Err(Error::Domain { what: "k_bins", domain: "[1,inf)", value: 0.0 });
    }
    Ok(10.0 * (k_bins as f64).log10())
}

/// Scales an error exponent by the temporal overlap factor `κ_m`.
pub fn mismatch_penalty(exponent: f64, kappa_match: f64) -> Result<f64> {
    if !(kappa_match > 0.0 && kappa_match <= 1.0) {
        return Err(Error::Domain { what: "kappa_match", domain: "(0,1]", value: kappa_match });
    }
    Ok(exponent * kappa_match)
}

/// Bhattacharyya lower bound for the coherent-state radar,
/// `[1 - √(1 - e^{-2B})]/2` with `B = MκN_S(√(N_B+1)-√N_B)²`.
pub fn cs_bhattacharyya_lower(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<BoundResult> {
    tan_inputs(m, kappa, n_s, n_b)?;
    let per_mode = kappa * n_s * coherent_overlap_factor(n_b);
    let b = if per_mode == 0.0 || m == 0.0 { 0.0 } else { per_mode * m };
    // 1 - √(1-x) = x / (1 + √(1-x)), x = e^{-2B}
    let root = (-(-2.0 * b).exp_m1()).sqrt();
    let ln_value = -2.0 * b - std::f64::consts::LN_2 - (1.0 + root).ln();
    let (report, valid) = tan_regime(SystemKind::CsTan, kappa, n_s, n_b)?;
    Ok(BoundResult {
        name: BoundName::CsBhattacharyya,
        kind: BoundKind::Lower,
        exponent_per_mode: per_mode,
        total_exponent: b,
        ln_value,
        bound_value: ln_value.exp(),
        regime_valid: valid,
        regime: Some(report),
        note: None,
    })
}

/// Evaluates one bound from a scenario's fields. Lloyd bounds use the branch
/// picked by [`classify_regime`], falling back to the bad branch (flagged
/// invalid) when the scenario is in neither regime.
pub fn evaluate(name: BoundName, scenario: &RadarScenario) -> Result<BoundResult> {
    let s = scenario.validate()?;
    let lloyd_branch = |system| -> Result<LloydBranch> {
        Ok(match classify_regime(&s, system, DEFAULT_STRICTNESS)?.regime {
            Regime::Good => LloydBranch::Good,
            _ => LloydBranch::Bad,
        })
    };
    match name {
        BoundName::LloydSp => lloyd_sp_bound(s.n_pulses, s.kappa, s.n_b, s.m_modes, lloyd_branch(SystemKind::Sp)?),
        BoundName::LloydQi => lloyd_qi_bound(s.n_pulses, s.kappa, s.n_b, s.m_modes, lloyd_branch(SystemKind::QiLloyd)?),
        BoundName::PulsedCs => pulsed_cs_bound(s.n_pulses, s.kappa, s.n_b),
        BoundName::TanCs => tan_cs_bound(s.m(), s.kappa, s.n_s, s.n_b),
        BoundName::TanQi => tan_qi_bound(s.m(), s.kappa, s.n_s, s.n_b),
        BoundName::Opa => opa_bound(s.m(), s.kappa, s.n_s, s.n_b),
        BoundName::IdlerLossSfg => idler_loss_bound(s.m(), s.kappa, s.n_s, s.n_b, s.kappa_idler, QiReceiver::Sfg),
        BoundName::IdlerLossOpa => idler_loss_bound(s.m(), s.kappa, s.n_s, s.n_b, s.kappa_idler, QiReceiver::Opa),
        BoundName::CsBhattacharyya => cs_bhattacharyya_lower(s.m(), s.kappa, s.n_s, s.n_b),
    }
}

/// `ln Pr(e)_QI^UB - ln Pr(e)_CS^LB` at `m` modes.
pub fn qi_cs_gap(m: f64, kappa: f64, n_s: f64, n_b: f64) -> Result<f64> {
    Ok(tan_qi_bound(m, kappa, n_s, n_b)?.ln_value - cs_bhattacharyya_lower(m, kappa, n_s, n_b)?.ln_value)
}

pub const CROSSOVER_M_MAX: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossover {
    /// Smallest integer M at which the QI upper bound is below the CS lower bound.
    pub m_star: u64,
    pub gap_before: f64,
    pub gap_at: f64,
}

/// Smallest `M` with `tan_qi_bound < cs_bhattacharyya_lower`, by bisection on
/// `log M` over `[1, 10¹²]`.
pub fn crossover_m(kappa: f64, n_s: f64, n_b: f64) -> Result<Crossover> {
    let gap = |m: u64| qi_cs_gap(m as f64, kappa, n_s, n_b);
    let (mut lo, mut hi) = (1u64, CROSSOVER_M_MAX);
    if gap(lo)? < 0.0 {
        return Ok(Crossover { m_star: 1, gap_before: f64::NAN, gap_at: gap(1)? });
    }
    if !(gap(hi)? < 0.0) {
        return Err(Error::NotFound(format!(
            "QI upper bound stays above CS lower bound for M <= {CROSSOVER_M_MAX}"
        )));
    }
    while hi - lo > 1 {
        let mid = ((lo as f64 * hi as f64).sqrt().round() as u64).clamp(lo + 1, hi - 1);
        if gap(mid)? < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (before, at) = (gap(lo)?, gap(hi)?);
    // local monotonicity: the gap keeps falling just past the crossing
    let after = gap(hi.saturating_mul(2))?;
    if !(before >= 0.0 && at < 0.0 && after < at) {
        return Err(Error::NotFound(format!(
            "bound gap is not monotone near M = {hi} ({before:e}, {at:e}, {after:e})"
        )));
    }
    Ok(Crossover { m_star: hi, gap_before: before, gap_at: at })
}

/// One row of a bound sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub m: f64,
    pub kappa: f64,
    pub n_s: f64,
    pub n_b: f64,
    pub bound: BoundResult,
}

impl BoundRow {
    pub fn new(scenario: &RadarScenario, bound: BoundResult) -> Self {
        BoundRow { m: scenario.m(), kappa: scenario.kappa, n_s: scenario.n_s, n_b: scenario.n_b, bound }
    }
}

/// CS upper, QI upper and CS lower error bounds at one `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row {
    pub m: f64,
    pub pr_e_cs_ub: f64,
    pub pr_e_qi_ub: f64,
    pub pr_e_cs_lb: f64,
}

pub fn fig3_table(m_grid: &[f64], kappa: f64, n_s: f64, n_b: f64) -> Result<Vec<Fig3Row>> {
    m_grid
        .iter()
        .map(|&m| {
            Ok(Fig3Row {
                m,
                pr_e_cs_ub: tan_cs_bound(m, kappa, n_s, n_b)?.bound_value,
                pr_e_qi_ub: tan_qi_bound(m, kappa, n_s, n_b)?.bound_value,
                pr_e_cs_lb: cs_bhattacharyya_lower(m, kappa, n_s, n_b)?.bound_value,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn lloyd_examples() {
        let g = lloyd_sp_bound(10_000, 1e-3, 1e-6, 10, LloydBranch::Good).unwrap();
        assert!(close(g.bound_value, (-10f64).exp() / 2.0, 1e-14));
        assert!(close(g.bound_value, 2.27e-5, 1e-3));

        let b = lloyd_sp_bound(10_000, 1e-4, 1e-2, 10, LloydBranch::Bad).unwrap();
        assert!(close(b.total_exponent, 1.25e-3, 1e-12));
        assert!((b.bound_value - 0.499_375_2).abs() < 1e-6);
        assert!(b.regime_valid);

        let q = lloyd_qi_bound(10_000, 1e-4, 1e-2, 10, LloydBranch::Bad).unwrap();
        assert!(close(q.total_exponent, 0.0125, 1e-12));
        assert!((q.bound_value - 0.493_789).abs() < 1e-6);
        assert!(close(q.total_exponent / b.total_exponent, 10.0, 1e-12));

        let zero = lloyd_sp_bound(10_000, 0.0, 1e-2, 10, LloydBranch::Bad).unwrap();
        assert_eq!(zero.bound_value, 0.5);
        let one = lloyd_qi_bound(100, 1e-4, 1e-2, 1, LloydBranch::Bad).unwrap();
        let sp = lloyd_sp_bound(100, 1e-4, 1e-2, 1, LloydBranch::Bad).unwrap();
        assert_eq!(one.total_exponent, sp.total_exponent);
    }

    #[test]
    fn lloyd_flags_wrong_branch() {
        // bad-regime parameters evaluated with the good formula
        let r = lloyd_sp_bound(10, 1e-4, 1e-2, 10, LloydBranch::Good).unwrap();
        assert!(!r.regime_valid);
        assert!(r.bound_value <= 0.5);
    }

    #[test]
    fn pulsed_cs_examples() {
        let r = pulsed_cs_bound(10_000, 1e-3, 0.0).unwrap();
        assert!(close(r.total_exponent, 10.0, 1e-14));
        let r = pulsed_cs_bound(10_000, 1e-4, 20.0).unwrap();
        // oracle: direct (√21 - √20)²
        let direct = (21f64.sqrt() - 20f64.sqrt()).powi(2);
        assert!(close(r.total_exponent, direct, 1e-12));
        assert!((r.total_exponent - 0.012_196_9).abs() < 1e-6);
        assert!((r.bound_value - 0.493_940).abs() < 1e-5);
        assert_eq!(pulsed_cs_bound(10, 0.0, 20.0).unwrap().bound_value, 0.5);
    }

    #[test]
    fn tan_examples() {
        let qi = tan_qi_bound(2e6, 0.01, 0.01, 20.0).unwrap();
        let cs = tan_cs_bound(2e6, 0.01, 0.01, 20.0).unwrap();
        let opa = opa_bound(2e6, 0.01, 0.01, 20.0).unwrap();
        assert!(close(qi.total_exponent, 10.0, 1e-12));
        assert!(close(qi.bound_value, 2.27e-5, 1e-3));
        assert!(close(cs.total_exponent, 2.5, 1e-12));
        assert!(close(cs.bound_value, 4.104e-2, 1e-3));
        assert!(close(opa.total_exponent, 5.0, 1e-12));
        assert!(close(opa.bound_value, 3.369e-3, 1e-3));
        assert_eq!(qi.total_exponent / cs.total_exponent, 4.0);
        assert_eq!(opa.total_exponent / cs.total_exponent, 2.0);
        assert_eq!(tan_qi_bound(0.0, 0.01, 0.01, 20.0).unwrap().bound_value, 0.5);
        assert_eq!(tan_cs_bound(0.0, 0.01, 0.01, 20.0).unwrap().bound_value, 0.5);
        assert_eq!(opa_bound(2e6, 0.0, 0.01, 20.0).unwrap().bound_value, 0.5);
        // N_B = 20 is outside the N_B >> 1 regime at ratio 100
        assert!(!qi.regime_valid);
        assert!(tan_qi_bound(1e6, 1e-3, 1e-3, 500.0).unwrap().regime_valid);
    }

    #[test]
    fn idler_loss_examples() {
        let cs = tan_cs_bound(1e6, 0.01, 0.01, 20.0).unwrap();
        let sfg = idler_loss_bound(1e6, 0.01, 0.01, 20.0, 0.25, QiReceiver::Sfg).unwrap();
        assert!(close(sfg.total_exponent, cs.total_exponent, 1e-14));
        assert!(sfg.note.as_deref().unwrap().contains("0.0000 dB"));
        let opa = idler_loss_bound(1e6, 0.01, 0.01, 20.0, 0.5, QiReceiver::Opa).unwrap();
        assert!(close(opa.total_exponent, cs.total_exponent, 1e-14));
        let full = idler_loss_bound(1e6, 0.01, 0.01, 20.0, 1.0, QiReceiver::Sfg).unwrap();
        assert_eq!(full.total_exponent, tan_qi_bound(1e6, 0.01, 0.01, 20.0).unwrap().total_exponent);
        let full = idler_loss_bound(1e6, 0.01, 0.01, 20.0, 1.0, QiReceiver::Opa).unwrap();
        assert_eq!(full.total_exponent, opa_bound(1e6, 0.01, 0.01, 20.0).unwrap().total_exponent);
        assert!(idler_loss_bound(1e6, 0.01, 0.01, 20.0, 0.0, QiReceiver::Opa).is_err());
    }

    #[test]
    fn penalties() {
        assert!((multibin_penalty(2).unwrap() - 3.0103).abs() < 1e-4);
        assert!((multibin_penalty(4).unwrap() - 6.0206).abs() < 1e-4);
        assert_eq!(multibin_penalty(1).unwrap(), 0.0);
        assert!(multibin_penalty(0).is_err());
        assert_eq!(mismatch_penalty(3.5, 1.0).unwrap(), 3.5);
        assert_eq!(mismatch_penalty(4.0, 0.25).unwrap(), 1.0);
        assert!(mismatch_penalty(1.0, 0.0).is_err());
        // K_B = 2 erases the 3 dB OPA margin; K_B = 4 erases the 6 dB SFG margin
        let opa_margin = 10.0 * 2f64.log10();
        let sfg_margin = 10.0 * 4f64.log10();
        assert!((multibin_penalty(2).unwrap() - opa_margin).abs() < 1e-12);
        assert!((multibin_penalty(4).unwrap() - sfg_margin).abs() < 1e-12);
    }

    #[test]
    fn bhattacharyya_examples() {
        let lb = cs_bhattacharyya_lower(0.0, 0.01, 0.01, 20.0).unwrap();
        assert_eq!(lb.bound_value, 0.5);
        assert_eq!(lb.kind, BoundKind::Lower);
        let tiny = cs_bhattacharyya_lower(1.0, 1e-6, 1e-6, 20.0).unwrap();
        assert!((tiny.bound_value - 0.5).abs() < 1e-5);
        // deep tail stays finite in log space
        let deep = cs_bhattacharyya_lower(1e12, 0.01, 0.01, 20.0).unwrap();
        assert!(deep.ln_value.is_finite() && deep.ln_value < -1e6);
        for m in [1e2, 1e4, 1e5, 1e6, 1e7] {
            let lb = cs_bhattacharyya_lower(m, 0.01, 0.01, 20.0).unwrap();
            let ub = tan_cs_bound(m, 0.01, 0.01, 20.0).unwrap();
            assert!(lb.ln_value <= ub.ln_value);
        }
        let qi_small = tan_qi_bound(1e4, 0.01, 0.01, 20.0).unwrap();
        let lb_small = cs_bhattacharyya_lower(1e4, 0.01, 0.01, 20.0).unwrap();
        assert!(qi_small.bound_value > lb_small.bound_value);
        let qi_big = tan_qi_bound(1e6, 0.01, 0.01, 20.0).unwrap();
        let lb_big = cs_bhattacharyya_lower(1e6, 0.01, 0.01, 20.0).unwrap();
        assert!(qi_big.bound_value < lb_big.bound_value);
    }

    /// Dense-grid scan of the gap's sign change, independent of the bisection.
    fn grid_crossover(kappa: f64, n_s: f64, n_b: f64) -> u64 {
        let mut m = 1u64;
        while qi_cs_gap(m as f64, kappa, n_s, n_b).unwrap() >= 0.0 {
            m += (m / 1000).max(1);
        }
        // walk back to the first negative integer
        let step = (m / 1000).max(1);
        let mut lo = m.saturating_sub(step);
        while qi_cs_gap(lo as f64, kappa, n_s, n_b).unwrap() >= 0.0 {
            lo += 1;
        }
        lo
    }

    #[test]
    fn reference_crossover() {
        let c = crossover_m(0.01, 0.01, 20.0).unwrap();
        assert_eq!(c.m_star, 183_830);
        assert_eq!(c.m_star, grid_crossover(0.01, 0.01, 20.0));
        assert!(qi_cs_gap(c.m_star as f64 - 1.0, 0.01, 0.01, 20.0).unwrap() >= 0.0);
        assert!(qi_cs_gap(c.m_star as f64, 0.01, 0.01, 20.0).unwrap() < 0.0);
        assert!(matches!(crossover_m(0.0, 0.01, 20.0), Err(Error::NotFound(_))));
    }

    #[test]
    fn evaluate_dispatches_by_name() {
        let s = RadarScenario::default();
        for name in BoundName::ALL {
            let r = evaluate(name, &s).unwrap();
            assert_eq!(r.name, name);
            assert_eq!(name.as_str().parse::<BoundName>().unwrap(), name);
        }
        assert_eq!(evaluate(BoundName::TanQi, &s).unwrap(), tan_qi_bound(2e6, 0.01, 0.01, 20.0).unwrap());
        // Lloyd good regime picked from the classification
        let g = RadarScenario { kappa: 1.0, n_b: 1e-8, m_modes: 10, n_pulses: 3, ..s };
        let r = evaluate(BoundName::LloydQi, &g).unwrap();
        assert!(r.regime_valid && (r.total_exponent - 3.0).abs() < 1e-15);
        assert!("nope".parse::<BoundName>().is_err());
    }

    #[test]
    fn small_overlap_asymptote_crosses_later() {
        // Replacing the lower bound by its e^{-2B}/4 tail form moves the
        // crossing to ln2 / (κN_S/N_B - 2κN_S·overlap), about 2.7e5.
        let per_mode = 0.01 * 0.01 * coherent_overlap_factor(20.0);
        let m_tail = std::f64::consts::LN_2 / (0.01 * 0.01 / 20.0 - 2.0 * per_mode);
        assert!((m_tail / 2.707e5 - 1.0).abs() < 1e-3, "{m_tail}");
        let exact = crossover_m(0.01, 0.01, 20.0).unwrap().m_star as f64;
        assert!(exact < m_tail);
    }

    #[test]
    fn cs_exponent_approaches_tan_form() {
        // (√(1+N_B)-√N_B)² · 4N_B → 1
        let r20 = coherent_overlap_factor(20.0) * 80.0;
        assert!((r20 - 1.0).abs() < 0.025, "{r20}");
        let r4 = coherent_overlap_factor(1e4) * 4e4;
        assert!((r4 - 1.0).abs() < 5e-5, "{r4}");
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn exponent_ratios(lm in 0.0..9.0f64, lk in -6.0..0.0f64, ls in -6.0..0.0f64, lb in -2.0..4.0f64) {
            let (m, k, s, b) = (10f64.powf(lm), 10f64.powf(lk), 10f64.powf(ls), 10f64.powf(lb));
            let cs = tan_cs_bound(m, k, s, b).unwrap().total_exponent;
            let qi = tan_qi_bound(m, k, s, b).unwrap().total_exponent;
            let opa = opa_bound(m, k, s, b).unwrap().total_exponent;
            prop_assert!(close(qi / cs, 4.0, 1e-12));
            prop_assert!(close(opa / cs, 2.0, 1e-12));
        }

        #[test]
        fn values_bounded_and_monotone(lm in 0.0..8.0f64, lk in -6.0..0.0f64, ls in -6.0..0.0f64, lb in -2.0..4.0f64, f in 1.0..10.0f64) {
            let (m, k, s, b) = (10f64.powf(lm), 10f64.powf(lk), 10f64.powf(ls), 10f64.powf(lb));
            type BoundFn = fn(f64, f64, f64, f64) -> Result<BoundResult>;
            let fns: [BoundFn; 4] = [tan_cs_bound, tan_qi_bound, opa_bound, cs_bhattacharyya_lower];
            for bound in fns {
                let base = bound(m, k, s, b).unwrap();
                prop_assert!(base.bound_value <= 0.5 && base.ln_value <= -std::f64::consts::LN_2 + 1e-15);
                prop_assert!(base.total_exponent >= 0.0);
                prop_assert!(bound(m * f, k, s, b).unwrap().total_exponent >= base.total_exponent);
                prop_assert!(bound(m, (k * f).min(1.0), s, b).unwrap().total_exponent >= base.total_exponent);
                prop_assert!(bound(m, k, s * f, b).unwrap().total_exponent >= base.total_exponent);
            }
        }

        #[test]
        fn lloyd_bad_ratio_is_m(n in 1u64..1_000_000, lk in -8.0..0.0f64, lb in -6.0..0.0f64, m in 1u64..10_000_000) {
            let (k, b) = (10f64.powf(lk), 10f64.powf(lb));
            let sp = lloyd_sp_bound(n, k, b, m, LloydBranch::Bad).unwrap().total_exponent;
            let qi = lloyd_qi_bound(n, k, b, m, LloydBranch::Bad).unwrap().total_exponent;
            prop_assert!(close(qi / sp, m as f64, 1e-12));
        }
    }
}
