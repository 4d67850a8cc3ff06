//! Detection-scenario parameters, validation, and regime classification.
//!
//! A [`RadarScenario`] carries every scalar that any radar model in this crate
//! needs. Construct one with [`RadarScenario::default`] (the reference
//! operating point: weak target, bright background, low-brightness signal) and
//! override fields, or load it from JSON with [`RadarScenario::from_json`].
//! Validation never clamps; an out-of-range field is always an error.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (5 significant figures).
pub const SPEED_OF_LIGHT: f64 = 2.9979e8;
/// Reduced Planck constant, J·s (5 significant figures).
pub const HBAR: f64 = 1.0546e-34;

/// Default "much greater than" ratio used when classifying regimes.
pub const DEFAULT_STRICTNESS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadarScenario {
    /// Roundtrip target transmissivity.
    pub kappa: f64,
    /// Target-return phase in radians.
    pub theta: f64,
    /// Signal brightness, photons per mode.
    pub n_s: f64,
    /// Background brightness, photons per mode.
    pub n_b: f64,
    /// Classical-noise idler brightness, photons per mode.
    pub n_i: f64,
    /// Heterodyne noise figure (1 is quantum limited).
    pub n_f: f64,
    /// Heterodyne pre-amplifier gain.
    pub g_a: f64,
    /// Time-bandwidth product, i.e. mode pairs per decision.
    pub m_modes: u64,
    /// Pulse count for the single-photon scenarios.
    pub n_pulses: u64,
    /// OPA receiver gain; `None` selects `1 + n_s / sqrt(n_b)`.
    pub g_opa: Option<f64>,
    /// Idler-storage transmissivity.
    pub kappa_idler: f64,
    /// Temporal overlap between stored idler and return.
    pub kappa_match: f64,
    /// Number of simultaneously interrogated resolution bins.
    pub k_bins: u64,
}

impl Default for RadarScenario {
    fn default() -> Self {
        Self {
            kappa: 0.01,
            theta: 0.0,
            n_s: 0.01,
            n_b: 20.0,
            n_i: 1.0e3,
            n_f: 1.0,
            g_a: 1.0,
            m_modes: 2_000_000,
            n_pulses: 1,
            g_opa: None,
            kappa_idler: 1.0,
            kappa_match: 1.0,
            k_bins: 1,
        }
    }
}

fn check(ok: bool, field: &'static str, range: &'static str, value: f64) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { field, range, value })
    }
}

impl RadarScenario {
    /// Returns `self` unchanged when every field is in range.
    pub fn validate(self) -> Result<Self> {
        check((0.0..=1.0).contains(&self.kappa), "kappa", "[0,1]", self.kappa)?;
        check((0.0..2.0 * PI).contains(&self.theta), "theta", "[0,2pi)", self.theta)?;
        check(self.n_s > 0.0, "n_s", "(0,inf)", self.n_s)?;
        check(self.n_b >= 0.0, "n_b", "[0,inf)", self.n_b)?;
        check(self.n_i > 0.0, "n_i", "(0,inf)", self.n_i)?;
        check(self.n_f >= 1.0, "n_f", "[1,inf)", self.n_f)?;
        check(self.g_a >= 1.0, "g_a", "[1,inf)", self.g_a)?;
        check(self.m_modes >= 1, "m_modes", "[1,inf)", self.m_modes as f64)?;
        check(self.n_pulses >= 1, "n_pulses", "[1,inf)", self.n_pulses as f64)?;
        if let Some(g) = self.g_opa {
            check(g > 1.0, "g_opa", "(1,inf)", g)?;
        }
        check(
            self.kappa_idler > 0.0 && self.kappa_idler <= 1.0,
            "kappa_idler",
            "(0,1]",
            self.kappa_idler,
        )?;
        check(
            self.kappa_match > 0.0 && self.kappa_match <= 1.0,
            "kappa_match",
            "(0,1]",
            self.kappa_match,
        )?;
        check(self.k_bins >= 1, "k_bins", "[1,inf)", self.k_bins as f64)?;
        Ok(self)
    }

    /// Parses a JSON scenario. Missing keys take their defaults; unknown keys fail.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RadarScenario = serde_json::from_str(text)?;
        raw.validate()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Returned-light brightness under target presence, `κN_S + N_B`.
    pub fn n_r(&self) -> f64 {
        self.kappa * self.n_s + self.n_b
    }

    /// OPA gain, falling back to `1 + N_S/√N_B`.
    pub fn opa_gain(&self) -> Result<f64> {
        match self.g_opa {
            Some(g) => Ok(g),
            None if self.n_b > 0.0 => Ok(1.0 + self.n_s / self.n_b.sqrt()),
            None => Err(Error::OutOfRange {
                field: "n_b",
                range: "(0,inf) when g_opa is defaulted",
                value: self.n_b,
            }),
        }
    }

    pub fn m(&self) -> f64 {
        self.m_modes as f64
    }
}

/// `10·log10(x)`.
pub fn db(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::Domain {
            what: "db",
            domain: "(0,inf)",
            value: x,
        })
    }
}

/// Background brightness (photons/mode) implied by a spectral radiance.
///
/// `wavelength` in meters, `spectral_radiance` in W/(m²·sr·µm). Evaluates
/// `π·10⁶·λ³·N_λ / (ħω²)` with `ω = 2πc/λ`.
pub fn brightness_from_radiance(wavelength: f64, spectral_radiance: f64) -> Result<f64> {
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::Domain {
            what: "brightness_from_radiance wavelength",
            domain: "(0,inf)",
            value: wavelength,
        });
    }
    if !(spectral_radiance >= 0.0 && spectral_radiance.is_finite()) {
        return Err(Error::Domain {
            what: "brightness_from_radiance spectral_radiance",
            domain: "[0,inf)",
            value: spectral_radiance,
        });
    }
    let omega = 2.0 * PI * SPEED_OF_LIGHT / wavelength;
    Ok(PI * 1.0e6 * wavelength.powi(3) * spectral_radiance / (HBAR * omega * omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// Lloyd's single-photon radar.
    Sp,
    /// Lloyd's entangled single-photon radar.
    QiLloyd,
    /// Gaussian-state coherent-state radar.
    CsTan,
    /// Gaussian-state (TMSV) quantum-illumination radar.
    QiTan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Good,
    Bad,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    /// Ratio whose size expresses the asymptotic inequality, e.g. `κ/N_B` for `κ ≫ N_B`.
    pub ratio: f64,
    pub threshold: f64,
    pub satisfied: bool,
    /// Whether this condition decides the regime. Background assumptions
    /// (such as `M·N_B ≪ 1`) are reported but do not gate it.
    pub defining: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub system: SystemKind,
    pub regime: Regime,
    pub conditions_checked: Vec<ConditionCheck>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Classifies `scenario` into the good/bad regime of `system`.
///
/// A `≫` condition holds when its ratio is at least `strictness`.
pub fn classify_regime(
    scenario: &RadarScenario,
    system: SystemKind,
    strictness: f64,
) -> Result<RegimeReport> {
    if !(strictness > 1.0) {
        return Err(Error::Domain {
            what: "classify_regime strictness",
            domain: "(1,inf)",
            value: strictness,
        });
    }
    let s = scenario.validate()?;
    let cond = |name, ratio: f64, defining| ConditionCheck {
        name,
        ratio,
        threshold: strictness,
        satisfied: ratio >= strictness,
        defining,
    };
    let m = s.m();
    let mut checks = Vec::new();
    let regime = match system {
        SystemKind::Sp | SystemKind::QiLloyd => {
            let (good, bad) = if system == SystemKind::Sp {
                (
                    cond("kappa >> n_b", ratio(s.kappa, s.n_b), true),
                    cond("kappa << n_b", ratio(s.n_b, s.kappa), true),
                )
            } else {
                (
                    cond("kappa >> n_b/m", ratio(s.kappa * m, s.n_b), true),
                    cond("kappa << n_b/m", ratio(s.n_b, s.kappa * m), true),
                )
            };
            let regime = if good.satisfied {
                Regime::Good
            } else if bad.satisfied {
                Regime::Bad
            } else {
                Regime::Outside
            };
            checks.push(good);
            checks.push(bad);
            checks.push(cond("n_b << 1", ratio(1.0, s.n_b), false));
            checks.push(cond("m*n_b << 1", ratio(1.0, m * s.n_b), false));
            regime
        }
        SystemKind::CsTan | SystemKind::QiTan => {
            checks.push(cond("kappa << 1", ratio(1.0, s.kappa), true));
            checks.push(cond("n_s << 1", ratio(1.0, s.n_s), true));
            checks.push(cond("n_b >> 1", s.n_b, true));
            if s.kappa > 0.0 && checks.iter().all(|c| c.satisfied) {
                Regime::Bad
            } else {
                Regime::Outside
            }
        }
    };
    Ok(RegimeReport {
        system,
        regime,
        conditions_checked: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scen(kappa: f64, n_b: f64, m: u64) -> RadarScenario {
        RadarScenario {
            kappa,
            n_b,
            m_modes: m,
            ..Default::default()
        }
    }

    #[test]
    fn fig5_point_is_valid() {
        let s = RadarScenario {
            kappa: 0.01,
            n_s: 0.01,
            n_b: 20.0,
            m_modes: 2_000_000,
            ..Default::default()
        };
        assert_eq!(s.validate().unwrap(), s);
    }

    #[test]
    fn zero_kappa_is_valid() {
        assert!(scen(0.0, 1.0, 1).validate().is_ok());
    }

    #[test]
    fn kappa_above_one_rejected() {
        let err = scen(1.5, 1.0, 1).validate().unwrap_err();
        assert_eq!(err.to_string(), "kappa out of [0,1]: got 1.5");
        assert!(err.is_validation());
    }

    #[test]
    fn other_ranges_rejected() {
        let base = RadarScenario::default();
        let bad = [
            RadarScenario { theta: 2.0 * PI, ..base },
            RadarScenario { n_s: 0.0, ..base },
            RadarScenario { n_b: -1.0, ..base },
            RadarScenario { n_f: 0.5, ..base },
            RadarScenario { g_a: 0.9, ..base },
            RadarScenario { m_modes: 0, ..base },
            RadarScenario { g_opa: Some(1.0), ..base },
            RadarScenario { kappa_idler: 0.0, ..base },
            RadarScenario { kappa_match: 1.1, ..base },
            RadarScenario { k_bins: 0, ..base },
            RadarScenario { kappa: f64::NAN, ..base },
        ];
        for s in bad {
            assert!(s.validate().is_err(), "{s:?}");
        }
    }

    #[test]
    fn json_unknown_key_fails_closed() {
        assert!(RadarScenario::from_json(r#"{"kappa": 0.1, "bogus": 1}"#).is_err());
        let s = RadarScenario::from_json(r#"{"kappa": 0.1, "n_s": 0.2}"#).unwrap();
        assert_eq!(s.kappa, 0.1);
        assert_eq!(s.n_b, 20.0);
    }

    #[test]
    fn default_opa_gain() {
        let g = RadarScenario::default().opa_gain().unwrap();
        assert!((g - (1.0 + 0.01 / 20f64.sqrt())).abs() < 1e-15);
        let dark = RadarScenario { n_b: 0.0, ..Default::default() };
        assert!(dark.opa_gain().is_err());
    }

    #[test]
    fn db_values() {
        assert!((db(4.0).unwrap() - 6.020_599_913_279_624).abs() < 1e-12);
        assert_eq!(db(1.0).unwrap(), 0.0);
        assert!((db(1.0e6).unwrap() - 60.0).abs() < 1e-12);
        assert!(db(0.0).is_err());
        assert!(db(-3.0).is_err());
    }

    #[test]
    fn radiance_conversion() {
        let nb = brightness_from_radiance(1.55e-6, 10.0).unwrap();
        // order of magnitude ~1e-6
        assert!(nb > 1e-7 && nb < 1e-5);
        // direct arithmetic: 7.5e-7 within 5%
        assert!((nb / 7.5e-7 - 1.0).abs() < 0.05, "{nb}");
        assert_eq!(brightness_from_radiance(1.55e-6, 0.0).unwrap(), 0.0);
        assert!(brightness_from_radiance(0.0, 1.0).is_err());
        assert!(brightness_from_radiance(-1.0, 1.0).is_err());
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(&scen(1e-4, 1e-2, 10), SystemKind::Sp, 100.0).unwrap();
        assert_eq!(r.regime, Regime::Bad);
        let r = classify_regime(&scen(1.0, 1e-8, 10), SystemKind::QiLloyd, 100.0).unwrap();
        assert_eq!(r.regime, Regime::Good);
        for strict in [1.0001, 2.0, 100.0] {
            let r = classify_regime(&scen(0.3, 0.3, 10), SystemKind::Sp, strict).unwrap();
            assert_eq!(r.regime, Regime::Outside);
        }
        assert!(classify_regime(&scen(0.3, 0.3, 10), SystemKind::Sp, 1.0).is_err());
    }

    #[test]
    fn tan_regime() {
        let s = RadarScenario {
            kappa: 1e-3,
            n_s: 1e-3,
            n_b: 200.0,
            ..Default::default()
        };
        let r = classify_regime(&s, SystemKind::QiTan, 100.0).unwrap();
        assert_eq!(r.regime, Regime::Bad);
        let r = classify_regime(&RadarScenario::default(), SystemKind::CsTan, 100.0).unwrap();
        // n_b = 20 is not >> 1 at ratio 100
        assert_eq!(r.regime, Regime::Outside);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn validate_is_idempotent(kappa in 0.0..=1.0f64, n_s in 1e-6..1e3f64, n_b in 0.0..1e4f64) {
            let s = RadarScenario { kappa, n_s, n_b, ..Default::default() };
            let once = s.validate().unwrap();
            prop_assert_eq!(once.validate().unwrap(), once);
        }

        #[test]
        fn regime_monotone_in_strictness(
            lk in -8.0..0.0f64, lnb in -8.0..2.0f64, m in 1u64..1_000_000,
            r in 1.5..1e4f64, frac in 0.01..1.0f64, qi in any::<bool>(),
        ) {
            let s = scen(10f64.powf(lk), 10f64.powf(lnb), m);
            let sys = if qi { SystemKind::QiLloyd } else { SystemKind::Sp };
            let hi = classify_regime(&s, sys, r).unwrap();
            let lo = classify_regime(&s, sys, 1.0 + (r - 1.0) * frac).unwrap();
            if hi.regime != Regime::Outside {
                prop_assert_eq!(lo.regime, hi.regime);
            }
        }

        #[test]
        fn radiance_is_linear(lambda in 1e-7..1e-1f64, n in 0.0..1e3f64, c in 0.0..1e3f64) {
            let a = brightness_from_radiance(lambda, n).unwrap();
            let b = brightness_from_radiance(lambda, c * n).unwrap();
            prop_assert!((b - c * a).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }
}
