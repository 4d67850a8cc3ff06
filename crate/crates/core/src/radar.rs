use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gaussian::NoiseRadar;

/// The five radars compared in the ROC study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadarKind {
    /// Quantum-correlated-noise radar (SPDC source, heterodyne reception).
    Qcn,
    /// Classically-correlated-noise radar (split thermal source).
    Ccn,
    /// Coherent-state transmitter, heterodyne (envelope) reception.
    CsHet,
    /// Coherent-state transmitter, homodyne reception.
    CsHom,
    /// TMSV transmitter with OPA receiver and photon counting.
    QiOpa,
}

impl RadarKind {
    pub const ALL: [RadarKind; 5] = [
        RadarKind::CsHet,
        RadarKind::Ccn,
        RadarKind::Qcn,
        RadarKind::CsHom,
        RadarKind::QiOpa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RadarKind::Qcn => "qcn",
            RadarKind::Ccn => "ccn",
            RadarKind::CsHet => "cs-het",
            RadarKind::CsHom => "cs-hom",
            RadarKind::QiOpa => "qi-opa",
        }
    }

    pub fn noise_radar(self) -> Option<NoiseRadar> {
        match self {
            RadarKind::Qcn => Some(NoiseRadar::Qcn),
            RadarKind::Ccn => Some(NoiseRadar::Ccn),
            _ => None,
        }
    }
}

impl From<NoiseRadar> for RadarKind {
    fn from(r: NoiseRadar) -> Self {
        match r {
            NoiseRadar::Qcn => RadarKind::Qcn,
            NoiseRadar::Ccn => RadarKind::Ccn,
        }
    }
}

impl fmt::Display for RadarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RadarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadarKind::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Incompatible(format!("unknown radar '{s}' (expected qcn, ccn, cs-het, cs-hom, qi-opa)")))
    }
}
