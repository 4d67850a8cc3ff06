//! Parsers for the compact argument grammars: counts like `2e5`, sweeps like
//! `M=1e4:1e8:25log`, and log10 false-alarm grids like `-7:-0.30103:41`.

use qiradar_core::{Error, RadarScenario, Result};
use serde::{Deserialize, Serialize};

fn invalid(msg: String) -> Error {
    Error::Incompatible(msg)
}

/// Non-negative integer written in plain or scientific notation.
pub fn parse_count(text: &str) -> Result<u64> {
    let text = text.trim();
    if let Ok(n) = text.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = text.parse().map_err(|_| invalid(format!("'{text}' is not a count")))?;
    if !(x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53)) {
        return Err(invalid(format!("'{text}' is not a whole number in [0, 2^53)")));
    }
    Ok(x as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let at = |t: f64| match self.spacing {
            Spacing::Lin => self.lo + (self.hi - self.lo) * t,
            Spacing::Log => 10f64.powf(self.lo.log10() + (self.hi.log10() - self.lo.log10()) * t),
        };
        match self.n {
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| match i {
                    0 => self.lo,
                    _ if i + 1 == n => self.hi,
                    _ => at(i as f64 / (n - 1) as f64),
                })
                .collect(),
        }
    }
}

impl std::str::FromStr for Range {
    type Err = Error;

    /// `lo:hi:N[log|lin]`, log spacing by default.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<_> = text.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(invalid(format!("range '{text}' should look like lo:hi:25log")));
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("'{s}' in range '{text}' is not a number")));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let (count, spacing) = if let Some(c) = n.strip_suffix("log") {
            (c, Spacing::Log)
        } else if let Some(c) = n.strip_suffix("lin") {
            (c, Spacing::Lin)
        } else {
            (n, Spacing::Log)
        };
        let n = parse_count(count)? as usize;
        if n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(invalid(format!("range '{text}' needs finite endpoints and at least one point")));
        }
        if spacing == Spacing::Log && !(lo > 0.0 && hi > 0.0) {
            return Err(invalid(format!("log range '{text}' needs positive endpoints")));
        }
        Ok(Range { lo, hi, n, spacing })
    }
}

/// Scenario fields a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "n_s")]
    NS,
    #[serde(rename = "n_b")]
    NB,
    #[serde(rename = "n_i")]
    NI,
    #[serde(rename = "n_f")]
    NF,
    #[serde(rename = "n_pulses")]
    NPulses,
    #[serde(rename = "kappa_idler")]
    KappaIdler,
}

impl SweepParam {
    const NAMES: [(&'static str, SweepParam); 8] = [
        ("M", SweepParam::M),
        ("kappa", SweepParam::Kappa),
        ("n_s", SweepParam::NS),
        ("n_b", SweepParam::NB),
        ("n_i", SweepParam::NI),
        ("n_f", SweepParam::NF),
        ("n_pulses", SweepParam::NPulses),
        ("kappa_idler", SweepParam::KappaIdler),
    ];

    fn parse(name: &str) -> Result<Self> {
        Self::NAMES.iter().find(|(n, _)| *n == name).map(|(_, p)| *p).ok_or_else(|| {
            let names: Vec<_> = Self::NAMES.iter().map(|(n, _)| *n).collect();
            invalid(format!("cannot sweep '{name}' (expected one of {})", names.join(", ")))
        })
    }

    /// Copy of `base` with this parameter set to `value`; integer fields are
    /// rounded to the nearest whole number.
    pub fn apply(self, base: &RadarScenario, value: f64) -> RadarScenario {
        let mut s = *base;
        match self {
            SweepParam::M => s.m_modes = value.round() as u64,
            SweepParam::Kappa => s.kappa = value,
            SweepParam::NS => s.n_s = value,
            SweepParam::NB => s.n_b = value,
            SweepParam::NI => s.n_i = value,
            SweepParam::NF => s.n_f = value,
            SweepParam::NPulses => s.n_pulses = value.round() as u64,
            SweepParam::KappaIdler => s.kappa_idler = value,
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: SweepParam,
    pub range: Range,
}

impl Sweep {
    pub fn scenarios(&self, base: &RadarScenario) -> Vec<RadarScenario> {
        self.range.values().into_iter().map(|v| self.param.apply(base, v)).collect()
    }
}

impl std::str::FromStr for Sweep {
    type Err = Error;

    /// `param=lo:hi:Nlog`. Exactly one parameter per sweep.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains(',') || text.matches('=').count() > 1 {
            return Err(invalid(format!("sweep '{text}' names more than one parameter; sweeps vary exactly one")));
        }
        let (name, range) = text
            .split_once('=')
            .ok_or_else(|| invalid(format!("sweep '{text}' should look like M=1e4:1e8:25log")))?;
        Ok(Sweep { param: SweepParam::parse(name.trim())?, range: range.parse()? })
    }
}

/// False-alarm grid given as `log10(lo):log10(hi):N`, evenly spaced in log10.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PfGrid {
    pub lo_log10: f64,
    pub hi_log10: f64,
    pub n: usize,
}

impl PfGrid {
    pub fn values(&self) -> Vec<f64> {
        qiradar_core::roc::log_pf_grid(self.lo_log10, self.hi_log10, self.n)
    }
}

impl std::str::FromStr for PfGrid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<_> = text.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(invalid(format!("false-alarm grid '{text}' should look like -7:-1:41")));
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("'{s}' in grid '{text}' is not a number")));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let n = parse_count(n)? as usize;
        if n == 0 || !(lo < 0.0 && hi < 0.0) {
            return Err(invalid(format!("false-alarm grid '{text}' takes negative log10 endpoints and at least one point")));
        }
        Ok(PfGrid { lo_log10: lo, hi_log10: hi, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e4").unwrap(), 10_000);
        assert_eq!(parse_count("200000").unwrap(), 200_000);
        assert_eq!(parse_count("2.5e5").unwrap(), 250_000);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn reference_sweep() {
        let s: Sweep = "M=1e4:1e8:25log".parse().unwrap();
        let v = s.range.values();
        assert_eq!(v.len(), 25);
        assert_eq!((v[0], v[24]), (1e4, 1e8));
        assert!((v[6] / 1e5 - 1.0).abs() < 1e-12);
        let sc = s.scenarios(&RadarScenario::default());
        assert_eq!(sc[6].m_modes, 100_000);
    }

    #[test]
    fn sweep_errors() {
        assert!("M=1e4:1e8:25log,kappa=0.1:0.2:3".parse::<Sweep>().is_err());
        assert!("M=1:2:3log=4".parse::<Sweep>().is_err());
        assert!("theta=0:1:3lin".parse::<Sweep>().is_err());
        assert!("M=1e4:1e8".parse::<Sweep>().is_err());
        assert!("M=0:1e8:5log".parse::<Sweep>().is_err());
        let lin: Sweep = "n_b=1:3:3lin".parse().unwrap();
        assert_eq!(lin.range.values(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pf_grid() {
        let g: PfGrid = "-7:-0.30103:41".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 41);
        assert!((v[0] - 1e-7).abs() < 1e-20 && (v[40] - 0.5).abs() < 1e-5);
        assert!("-3:1:4".parse::<PfGrid>().is_err());
    }
}
