//! Saddle-point (exponentially tilted) ROC approximation.
//!
//! `μ(s) = ln E₀[e^{sℓ}]` is the log moment-generating function of the total
//! log-likelihood ratio `ℓ` under H0. Sweeping the tilt `s` traces the ROC:
//!
//! ```text
//! P_F ≈ exp[μ - sμ̇ + s²μ̈/2]         · Q(s√μ̈)
//! P_M ≈ exp[μ + (1-s)μ̇ + (1-s)²μ̈/2] · Q((1-s)√μ̈)
//! ```
//!
//! The simple variant drops the Gaussian correction and uses
//! `exp[μ - sμ̇] / √(2πs²μ̈)` (and likewise for `P_M`).

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::analytic::{check_pf, RocCurve, RocMethod, RocPoint};
use super::special::ln_gaussian_q;
use crate::error::{Error, Result};
use crate::gaussian::{
    opa_output_stats, transformed_covariance, CovarianceForm, Hypothesis, ModePairCovariance, NoiseRadar,
};
use crate::radar::RadarKind;
use crate::scenario::RadarScenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuPoint {
    pub s: f64,
    pub mu: f64,
    pub mu_dot: f64,
    pub mu_ddot: f64,
}

/// Provider of `μ(s)` and its first two derivatives.
pub trait LogMgf: Sync {
    fn eval(&self, s: f64) -> Result<MuPoint>;

    /// Open interval of `s` on which `μ` is finite.
    fn domain(&self) -> (f64, f64);

    /// Number of independent modes summed into the statistic.
    fn modes(&self) -> f64;
}

fn outside(s: f64) -> Error {
    Error::Domain {
        what: "tilt s",
        domain: "log-MGF domain",
        value: s,
    }
}

/// Zero-mean Gaussian hypotheses, `M` i.i.d. mode pairs.
///
/// Stores the eigenvalues `1 + δᵢ` of `L⁻¹Σ₁L⁻ᵀ` (`Σ₀ = LLᵀ`), after which each
/// mode contributes `-½ Σᵢ [ln(1+(1-s)δᵢ) - (1-s) ln(1+δᵢ)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLogMgf {
    deltas: [f64; 4],
    m: f64,
}

impl GaussianLogMgf {
    pub fn new(h0: &Matrix4<f64>, h1: &Matrix4<f64>, m: f64) -> Result<Self> {
        let chol = h0.cholesky().ok_or(Error::Singular { det: h0.determinant() })?;
        let l = chol.l();
        let a = l
            .solve_lower_triangular(h1)
            .ok_or(Error::Singular { det: h0.determinant() })?;
        let w = l
            .solve_lower_triangular(&a.transpose())
            .ok_or(Error::Singular { det: h0.determinant() })?;
        let w = (w + w.transpose()) * 0.5;
        let eig = SymmetricEigen::new(w);
        let mut deltas = [0.0; 4];
        for (d, &lam) in deltas.iter_mut().zip(eig.eigenvalues.iter()) {
            if !(lam > 0.0) {
                return Err(Error::Singular { det: h1.determinant() });
            }
            *d = lam - 1.0;
        }
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Domain { what: "mode count", domain: "[0,inf)", value: m });
        }
        Ok(Self { deltas, m })
    }

    /// Builds from a labelled H0/H1 pair of the same radar and form.
    pub fn from_pair(h0: &ModePairCovariance, h1: &ModePairCovariance, m: f64) -> Result<Self> {
        let (l0, l1) = (h0.label(), h1.label());
        if l0.hypothesis != Hypothesis::H0
            || l1.hypothesis != Hypothesis::H1
            || l0.radar != l1.radar
            || l0.form != l1.form
        {
            return Err(Error::LabelMismatch(format!("expected an H0/H1 pair, got {l0:?} and {l1:?}")));
        }
        Self::new(h0.matrix(), h1.matrix(), m)
    }

    pub fn for_radar(radar: NoiseRadar, scenario: &RadarScenario) -> Result<Self> {
        let h0 = transformed_covariance(radar, scenario, Hypothesis::H0)?;
        let h1 = transformed_covariance(radar, scenario, Hypothesis::H1)?;
        debug_assert_eq!(h0.label().form, CovarianceForm::Transformed);
        Self::from_pair(&h0, &h1, scenario.m())
    }

    pub fn deltas(&self) -> [f64; 4] {
        self.deltas
    }
}

impl LogMgf for GaussianLogMgf {
    fn eval(&self, s: f64) -> Result<MuPoint> {
        let (lo, hi) = self.domain();
        if !(s > lo && s < hi) {
            return Err(outside(s));
        }
        let t = 1.0 - s;
        let (mut mu, mut mu_dot, mut mu_ddot) = (0.0, 0.0, 0.0);
        for &d in &self.deltas {
            let den = 1.0 + t * d;
            mu -= 0.5 * ((t * d).ln_1p() - t * d.ln_1p());
            mu_dot -= 0.5 * (d.ln_1p() - d / den);
            mu_ddot += 0.5 * (d / den) * (d / den);
        }
        Ok(MuPoint { s, mu: self.m * mu, mu_dot: self.m * mu_dot, mu_ddot: self.m * mu_ddot })
    }

    fn domain(&self) -> (f64, f64) {
        // need 1 + (1-s)δ > 0 for every δ
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for &d in &self.deltas {
            if d < 0.0 {
                lo = lo.max(1.0 + 1.0 / d);
            } else if d > 0.0 {
                hi = hi.min(1.0 + 1.0 / d);
            }
        }
        (lo, hi)
    }

    fn modes(&self) -> f64 {
        self.m
    }
}

/// Bose-Einstein photon counts with means `n0` (H0) and `n1` (H1) in each of `M` modes:
/// `μ(s) = -M ln[(1+n0)^{1-s}(1+n1)^s - n0^{1-s}n1^s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricLogMgf {
    n0: f64,
    u: f64,
    w: f64,
    m: f64,
}

impl GeometricLogMgf {
    pub fn new(n0: f64, n1: f64, m: f64) -> Result<Self> {
        for (what, v) in [("n0", n0), ("n1", n1)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain { what, domain: "(0,inf)", value: v });
            }
        }
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Domain { what: "mode count", domain: "[0,inf)", value: m });
        }
        let u = ((n1 - n0) / (1.0 + n0)).ln_1p();
        let v = ((n1 - n0) / n0).ln_1p();
        Ok(Self { n0, u, w: v - u, m })
    }

    pub fn for_opa(scenario: &RadarScenario) -> Result<Self> {
        let st = opa_output_stats(scenario)?;
        Self::new(st.n0, st.n1, scenario.m())
    }
}

impl LogMgf for GeometricLogMgf {
    fn eval(&self, s: f64) -> Result<MuPoint> {
        let (lo, hi) = self.domain();
        if !(s > lo && s < hi) {
            return Err(outside(s));
        }
        // (1+n0)^{1-s}(1+n1)^s - n0^{1-s}n1^s = e^{su}·[1 - n0·expm1(s·w)]
        let e = (s * self.w).exp_m1();
        let den = 1.0 - self.n0 * e;
        let r = self.n0 * (1.0 + e) / den;
        let f = -(s * self.u + (-self.n0 * e).ln_1p());
        let f1 = -self.u + self.w * r;
        let f2 = self.w * self.w * r * (1.0 + r);
        Ok(MuPoint { s, mu: self.m * f, mu_dot: self.m * f1, mu_ddot: self.m * f2 })
    }

    fn domain(&self) -> (f64, f64) {
        let edge = (1.0 / self.n0).ln_1p() / self.w;
        if self.w > 0.0 {
            (f64::NEG_INFINITY, edge)
        } else if self.w < 0.0 {
            (edge, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    fn modes(&self) -> f64 {
        self.m
    }
}

/// Unit-variance Gaussian mean shift of the LLR, `μ(s) = s(s-1)d²/2`, for which the
/// corrected saddle-point pair is exact: `P_F = Q(sd)`, `P_M = Q((1-s)d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianShift {
    pub d: f64,
}

impl LogMgf for GaussianShift {
    fn eval(&self, s: f64) -> Result<MuPoint> {
        let d2 = self.d * self.d;
        Ok(MuPoint { s, mu: 0.5 * s * (s - 1.0) * d2, mu_dot: (s - 0.5) * d2, mu_ddot: d2 })
    }

    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn modes(&self) -> f64 {
        1.0
    }
}

/// `μ` provider for a radar that has no closed-form ROC.
pub fn provider_for(radar: RadarKind, scenario: &RadarScenario) -> Result<Box<dyn LogMgf>> {
    let scenario = scenario.validate()?;
    match radar {
        RadarKind::Qcn => Ok(Box::new(GaussianLogMgf::for_radar(NoiseRadar::Qcn, &scenario)?)),
        RadarKind::Ccn => Ok(Box::new(GaussianLogMgf::for_radar(NoiseRadar::Ccn, &scenario)?)),
        RadarKind::QiOpa => Ok(Box::new(GeometricLogMgf::for_opa(&scenario)?)),
        RadarKind::CsHet | RadarKind::CsHom => Err(Error::Incompatible(format!(
            "radar '{radar}' has an exact ROC; use method 'exact'"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SaddleVariant {
    /// Includes the `exp(x²/2)·Q(x)` Gaussian correction.
    #[default]
    Corrected,
    /// Leading-order `1/√(2π x²)` form.
    Simple,
}

impl SaddleVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            SaddleVariant::Corrected => "corrected",
            SaddleVariant::Simple => "simple",
        }
    }
}

impl std::str::FromStr for SaddleVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(SaddleVariant::Corrected),
            "simple" => Ok(SaddleVariant::Simple),
            _ => Err(Error::Incompatible(format!("unknown saddle-point variant '{s}' (expected corrected, simple)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub s: f64,
    pub mu: f64,
    pub mu_dot: f64,
    pub mu_ddot: f64,
    pub pf: f64,
    pub pm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddlePointTrace {
    pub variant: SaddleVariant,
    pub points: Vec<TracePoint>,
}

impl SaddlePointTrace {
    /// ROC ordered by increasing `P_F`.
    pub fn curve(&self, radar: RadarKind, parameters: RadarScenario) -> RocCurve {
        let mut points: Vec<_> = self.points.iter().map(|p| RocPoint { pf: p.pf, pd: 1.0 - p.pm }).collect();
        points.sort_by(|a, b| a.pf.total_cmp(&b.pf));
        RocCurve { radar, method: RocMethod::Saddlepoint, points, parameters }
    }
}

/// `(ln P_F, ln P_M)` at one tilt.
///
/// Outside `[0, 1]` the tilted expansion describes the opposite tail: for
/// `s < 0` it gives `1 - P_F`, for `s > 1` it gives `P_D`.
pub fn ln_tail_probs(p: &MuPoint, variant: SaddleVariant) -> (f64, f64) {
    let sd = p.mu_ddot.max(0.0).sqrt();
    // ln of the tail on the small side of the threshold, for signed tilt `u` and exponent `e`
    let tail = |e: f64, u: f64| match variant {
        SaddleVariant::Corrected => e + 0.5 * (u * sd).powi(2) + ln_gaussian_q(u.abs() * sd),
        SaddleVariant::Simple => e - 0.5 * (2.0 * std::f64::consts::PI * u * u * p.mu_ddot).ln(),
    };
    let side = |e: f64, u: f64| {
        let l = tail(e, u).min(0.0);
        if u >= 0.0 { l } else { (-l.exp()).ln_1p() }
    };
    let t = 1.0 - p.s;
    (side(p.mu - p.s * p.mu_dot, p.s), side(p.mu + t * p.mu_dot, t))
}

fn trace_point(provider: &dyn LogMgf, s: f64, variant: SaddleVariant) -> Result<TracePoint> {
    let p = provider.eval(s)?;
    if !(p.mu_ddot >= -1e-12 * (1.0 + p.mu_dot.abs())) {
        return Err(Error::NonConvex { s, mu_ddot: p.mu_ddot });
    }
    let (lpf, lpm) = ln_tail_probs(&p, variant);
    Ok(TracePoint { s, mu: p.mu, mu_dot: p.mu_dot, mu_ddot: p.mu_ddot, pf: lpf.exp(), pm: lpm.exp() })
}

/// 101 uniform tilts on `[0.005, 0.995]`.
pub fn default_s_grid() -> Vec<f64> {
    (0..101).map(|i| 0.005 + 0.0099 * i as f64).collect()
}

/// Sweeps `s_grid`; fails on the first tilt where `μ` is not convex.
pub fn saddlepoint_roc(provider: &dyn LogMgf, s_grid: &[f64], variant: SaddleVariant) -> Result<SaddlePointTrace> {
    let points = s_grid
        .iter()
        .map(|&s| trace_point(provider, s, variant))
        .collect::<Result<_>>()?;
    Ok(SaddlePointTrace { variant, points })
}

/// Largest |s| tried when bracketing a target `P_F`.
const S_SEARCH: f64 = 1e6;

/// Tilt at which the approximate `P_F` equals `target`, by bisection.
///
/// The corrected form gives `P_F(0) = 1/2`, so targets below one half are
/// bracketed on `s > 0` (deep tails can need `s > 1`) and targets above it on
/// `s < 0`. The simple variant has a pole at `s = 0` and is searched on `s > 0`.
pub fn tilt_for_pf(provider: &dyn LogMgf, target: f64, variant: SaddleVariant) -> Result<f64> {
    check_pf(target)?;
    let unreachable = || Error::Domain {
        what: "target false-alarm probability",
        domain: "range reachable by the saddle-point sweep",
        value: target,
    };
    let (dlo, dhi) = provider.domain();
    let lt = target.ln();
    let g = |s: f64| -> Result<f64> { Ok(ln_tail_probs(&provider.eval(s)?, variant).0 - lt) };
    let upward = variant == SaddleVariant::Simple || target <= 0.5;
    let anchor = if variant == SaddleVariant::Simple { 1e-12 } else { 0.0 };
    let edge = if upward {
        dhi.min(S_SEARCH) - 1e-9 * (1.0 + dhi.abs().min(S_SEARCH))
    } else {
        dlo.max(-S_SEARCH) + 1e-9 * (1.0 + dlo.abs().min(S_SEARCH))
    };
    if g(anchor)? == 0.0 {
        return Ok(anchor);
    }
    // expand geometrically from the anchor until the sign flips
    let mut near = anchor;
    let mut step = 0.25;
    let mut far = loop {
        let next = if upward { (anchor + step).min(edge) } else { (anchor - step).max(edge) };
        let v = g(next)?;
        if (upward && v <= 0.0) || (!upward && v >= 0.0) {
            break next;
        }
        near = next;
        if next == edge {
            return Err(unreachable());
        }
        step *= 2.0;
    };
    if (upward && g(near)? < 0.0) || (!upward && g(near)? > 0.0) {
        return Err(unreachable());
    }
    // keep g(near) on the high-P_F side
    for _ in 0..200 {
        let mid = 0.5 * (near + far);
        if mid == near || mid == far {
            break;
        }
        if (g(mid)? >= 0.0) == upward {
            near = mid;
        } else {
            far = mid;
        }
    }
    Ok(0.5 * (near + far))
}

/// LLR variance below which the hypotheses are treated as identical
/// (deflection under 1e-12).
const INDISTINGUISHABLE_VAR: f64 = 1e-24;

/// Saddle-point ROC evaluated at the requested false-alarm rates.
pub fn saddlepoint_roc_at(provider: &dyn LogMgf, pf_grid: &[f64], variant: SaddleVariant) -> Result<SaddlePointTrace> {
    let mid = provider.eval(0.5)?;
    if mid.mu_ddot <= INDISTINGUISHABLE_VAR {
        // no tilt moves P_F when the hypotheses coincide: chance line
        let points = pf_grid
            .iter()
            .map(|&pf| {
                check_pf(pf)?;
                Ok(TracePoint { s: 0.5, mu: mid.mu, mu_dot: mid.mu_dot, mu_ddot: mid.mu_ddot, pf, pm: 1.0 - pf })
            })
            .collect::<Result<_>>()?;
        return Ok(SaddlePointTrace { variant, points });
    }
    let points = pf_grid
        .iter()
        .map(|&pf| {
            let s = tilt_for_pf(provider, pf, variant)?;
            let mut p = trace_point(provider, s, variant)?;
            p.pf = pf;
            Ok(p)
        })
        .collect::<Result<_>>()?;
    Ok(SaddlePointTrace { variant, points })
}

/// Missed-detection probability at one false-alarm rate.
pub fn pm_at_pf(provider: &dyn LogMgf, pf: f64, variant: SaddleVariant) -> Result<f64> {
    Ok(saddlepoint_roc_at(provider, &[pf], variant)?.points[0].pm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chernoff {
    pub s: f64,
    pub mu: f64,
    /// `-μ(s*)/M`.
    pub exponent_per_mode: f64,
}

/// Minimiser of `μ` on `[0,1]`, i.e. the Chernoff exponent.
pub fn chernoff(provider: &dyn LogMgf) -> Result<Chernoff> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let d = |s: f64| provider.eval(s).map(|p| p.mu_dot);
    if d(lo)? >= 0.0 {
        hi = lo;
    } else if d(hi)? <= 0.0 {
        lo = hi;
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if d(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let mu = provider.eval(s)?.mu;
    let m = provider.modes();
    Ok(Chernoff { s, mu, exponent_per_mode: if m > 0.0 { -mu / m } else { 0.0 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roc::special::gaussian_q;

    /// μ/M from determinants: -(1-s)/2·ln|Σ₀| - s/2·ln|Σ₁| - ½·ln|(1-s)Σ₀⁻¹ + sΣ₁⁻¹|.
    fn mu_det(h0: &Matrix4<f64>, h1: &Matrix4<f64>, s: f64) -> f64 {
        let a = h0.try_inverse().unwrap() * (1.0 - s) + h1.try_inverse().unwrap() * s;
        -0.5 * (1.0 - s) * h0.determinant().ln() - 0.5 * s * h1.determinant().ln() - 0.5 * a.determinant().ln()
    }

    /// μ/M by direct summation of p0^{1-s} p1^s over counts.
    fn mu_sum(n0: f64, n1: f64, s: f64) -> f64 {
        let lp = |n: f64, k: f64| k * (n / (1.0 + n)).ln() - n.ln_1p();
        let total: f64 = (0..4000)
            .map(|k| ((1.0 - s) * lp(n0, k as f64) + s * lp(n1, k as f64)).exp())
            .sum();
        total.ln()
    }

    fn desk() -> RadarScenario {
        RadarScenario { m_modes: 2000, kappa: 0.1, n_s: 0.1, ..RadarScenario::default() }
    }

    #[test]
    fn gaussian_mu_matches_determinant_form() {
        for radar in [NoiseRadar::Qcn, NoiseRadar::Ccn] {
            let s = RadarScenario { theta: 0.7, n_f: 1.6, ..desk() };
            let h0 = transformed_covariance(radar, &s, Hypothesis::H0).unwrap();
            let h1 = transformed_covariance(radar, &s, Hypothesis::H1).unwrap();
            let g = GaussianLogMgf::new(h0.matrix(), h1.matrix(), 1.0).unwrap();
            for t in [-0.4, 0.1, 0.5, 0.93, 1.3] {
                let p = g.eval(t).unwrap();
                let want = mu_det(h0.matrix(), h1.matrix(), t);
                assert!((p.mu - want).abs() < 1e-13, "{radar:?} {t} {} {want}", p.mu);
                let f = |x: f64| mu_det(h0.matrix(), h1.matrix(), x);
                let h = 1e-4;
                let fd1 = (f(t + h) - f(t - h)) / (2.0 * h);
                let h = 1e-3;
                let fd2 = (f(t + h) - 2.0 * want + f(t - h)) / (h * h);
                assert!((p.mu_dot - fd1).abs() < 1e-8 * (1.0 + fd1.abs()), "{t} {} {fd1}", p.mu_dot);
                assert!((p.mu_ddot - fd2).abs() < 1e-4 * fd2.abs() + 1e-9, "{t} {} {fd2}", p.mu_ddot);
            }
        }
    }

    #[test]
    fn raw_and_transformed_give_same_mu() {
        // the LLR is invariant under the normalising congruence
        let s = RadarScenario { g_a: 3.0, n_f: 1.4, ..desk() };
        let raw = GaussianLogMgf::from_pair(
            &crate::gaussian::qcn_covariance(&s, Hypothesis::H0).unwrap(),
            &crate::gaussian::qcn_covariance(&s, Hypothesis::H1).unwrap(),
            s.m(),
        )
        .unwrap();
        let tr = GaussianLogMgf::for_radar(NoiseRadar::Qcn, &s).unwrap();
        for t in [0.2, 0.5, 0.8] {
            let (a, b) = (raw.eval(t).unwrap().mu, tr.eval(t).unwrap().mu);
            assert!((a - b).abs() < 1e-10 * b.abs(), "{a} {b}");
        }
    }

    #[test]
    fn pair_labels_checked() {
        let s = desk();
        let h0 = transformed_covariance(NoiseRadar::Qcn, &s, Hypothesis::H0).unwrap();
        let c1 = transformed_covariance(NoiseRadar::Ccn, &s, Hypothesis::H1).unwrap();
        assert!(matches!(GaussianLogMgf::from_pair(&h0, &c1, 1.0), Err(Error::LabelMismatch(_))));
        assert!(matches!(GaussianLogMgf::from_pair(&h0, &h0, 1.0), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn identical_hypotheses_give_zero() {
        let s = RadarScenario { kappa: 0.0, ..desk() };
        let g = GaussianLogMgf::for_radar(NoiseRadar::Ccn, &s).unwrap();
        for t in default_s_grid() {
            let p = g.eval(t).unwrap();
            assert_eq!((p.mu, p.mu_dot, p.mu_ddot), (0.0, 0.0, 0.0));
        }
        let o = GeometricLogMgf::new(0.3, 0.3, 100.0).unwrap();
        assert_eq!(o.eval(0.4).unwrap().mu, 0.0);
        let grid = [1e-7, 1e-3, 0.4];
        for provider in [&g as &dyn LogMgf, &o] {
            let t = saddlepoint_roc_at(provider, &grid, SaddleVariant::Corrected).unwrap();
            assert!(t.points.iter().zip(grid).all(|(p, pf)| p.pf == pf && p.pm == 1.0 - pf));
        }
    }

    #[test]
    fn geometric_mu_matches_series() {
        for (n0, n1) in [(0.05698, 0.0579318), (1.0, 2.5), (0.7, 0.2)] {
            let g = GeometricLogMgf::new(n0, n1, 1.0).unwrap();
            for t in [-0.3, 0.25, 0.5, 0.9, 1.2] {
                let p = g.eval(t).unwrap();
                let want = mu_sum(n0, n1, t);
                assert!((p.mu - want).abs() < 1e-13, "{n0} {n1} {t} {} {want}", p.mu);
                let h = 1e-3;
                let fd2 = (mu_sum(n0, n1, t + h) - 2.0 * want + mu_sum(n0, n1, t - h)) / (h * h);
                assert!((p.mu_ddot - fd2).abs() < 1e-4 * fd2.abs() + 1e-8, "{} {fd2}", p.mu_ddot);
            }
        }
    }

    #[test]
    fn endpoints_vanish_and_convex() {
        let s = RadarScenario::default();
        let providers: Vec<Box<dyn LogMgf>> = vec![
            provider_for(RadarKind::Qcn, &s).unwrap(),
            provider_for(RadarKind::Ccn, &s).unwrap(),
            provider_for(RadarKind::QiOpa, &s).unwrap(),
        ];
        for p in &providers {
            assert!(p.eval(0.0).unwrap().mu.abs() < 1e-9);
            assert!(p.eval(1.0).unwrap().mu.abs() < 1e-9);
            let tr = saddlepoint_roc(p.as_ref(), &default_s_grid(), SaddleVariant::Corrected).unwrap();
            assert!(tr.points.iter().all(|q| q.mu_ddot >= 0.0 && q.mu <= 0.0));
        }
    }

    #[test]
    fn gaussian_shift_is_exact() {
        let g = GaussianShift { d: 3.1 };
        for s in [-0.5, 0.1, 0.5, 0.9, 1.6] {
            let p = g.eval(s).unwrap();
            let (lpf, lpm) = ln_tail_probs(&p, SaddleVariant::Corrected);
            assert!((lpf.exp() / gaussian_q(s * 3.1) - 1.0).abs() < 1e-12, "{s}");
            assert!((lpm.exp() / gaussian_q((1.0 - s) * 3.1) - 1.0).abs() < 1e-12, "{s}");
        }
        // symmetric tilt: P_F = P_M
        let t = saddlepoint_roc(&g, &[0.5], SaddleVariant::Simple).unwrap();
        assert!((t.points[0].pf - t.points[0].pm).abs() < 1e-15);
    }

    #[test]
    fn tilt_solver_hits_targets() {
        let g = GaussianShift { d: 4.0 };
        for pf in [1e-7, 1e-3, 0.2, 0.5, 0.8] {
            let s = tilt_for_pf(&g, pf, SaddleVariant::Corrected).unwrap();
            assert!((gaussian_q(4.0 * s) / pf - 1.0).abs() < 1e-9, "{pf} {s}");
        }
        let tr = saddlepoint_roc_at(&g, &[1e-2], SaddleVariant::Corrected).unwrap();
        let want = gaussian_q(4.0 - crate::roc::special::gaussian_q_inv(1e-2).unwrap());
        assert!((tr.points[0].pm - want).abs() < 1e-10);
    }

    #[test]
    fn reference_radars_reach_deep_tail() {
        let s = RadarScenario::default();
        for radar in [RadarKind::Qcn, RadarKind::Ccn, RadarKind::QiOpa] {
            let p = provider_for(radar, &s).unwrap();
            for pf in [1e-7, 1e-2, 0.5] {
                for v in [SaddleVariant::Corrected, SaddleVariant::Simple] {
                    let pm = pm_at_pf(p.as_ref(), pf, v);
                    assert!(pm.is_ok(), "{radar} {pf} {v:?} {pm:?}");
                }
            }
        }
    }

    #[test]
    fn chernoff_of_shift_is_quarter_d2() {
        let c = chernoff(&GaussianShift { d: 2.0 }).unwrap();
        assert!((c.s - 0.5).abs() < 1e-12 && (c.exponent_per_mode - 0.5).abs() < 1e-12);
    }

    #[test]
    fn opa_exponent_reference_value() {
        // frozen from the geometric series oracle above at the reference scenario
        let st = opa_output_stats(&RadarScenario::default()).unwrap();
        let c = chernoff(&GeometricLogMgf::for_opa(&RadarScenario::default()).unwrap()).unwrap();
        let oracle = (1..2000)
            .map(|i| i as f64 / 2000.0)
            .map(|t| -mu_sum(st.n0, st.n1, t))
            .fold(0.0, f64::max);
        assert!((c.exponent_per_mode / oracle - 1.0).abs() < 1e-6, "{} {oracle}", c.exponent_per_mode);
        assert!((c.exponent_per_mode / 1.8636e-6 - 1.0).abs() < 1e-3, "{}", c.exponent_per_mode);
    }

    #[test]
    fn qcn_ccn_coincide_for_bright_idler() {
        let s = RadarScenario { n_i: 1e6, ..RadarScenario::default() };
        let grid = crate::roc::analytic::log_pf_grid(-7.0, -0.30103, 30);
        let q = saddlepoint_roc_at(provider_for(RadarKind::Qcn, &s).unwrap().as_ref(), &grid, SaddleVariant::Corrected)
            .unwrap();
        let c = saddlepoint_roc_at(provider_for(RadarKind::Ccn, &s).unwrap().as_ref(), &grid, SaddleVariant::Corrected)
            .unwrap();
        for (a, b) in q.points.iter().zip(&c.points) {
            assert!((a.pm - b.pm).abs() < 1e-3, "{a:?} {b:?}");
        }
    }

    #[test]
    fn nonconvex_provider_rejected() {
        struct Bad;
        impl LogMgf for Bad {
            fn eval(&self, s: f64) -> Result<MuPoint> {
                Ok(MuPoint { s, mu: -s * (s - 1.0), mu_dot: 1.0 - 2.0 * s, mu_ddot: -2.0 })
            }
            fn domain(&self) -> (f64, f64) {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            fn modes(&self) -> f64 {
                1.0
            }
        }
        assert!(matches!(saddlepoint_roc(&Bad, &[0.5], SaddleVariant::Corrected), Err(Error::NonConvex { .. })));
    }
}
