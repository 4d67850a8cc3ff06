//! Detection-theory models for quantum-illumination and correlated-noise radars.
//!
//! Quadrature convention: vacuum variance is 1/4 per quadrature, so a thermal mode with
//! mean photon number `N` seen through a quantum-limited heterodyne has variance `(N + 1)/2`.

pub mod bounds;
pub mod error;
pub mod export;
pub mod gaussian;
pub mod mc;
pub mod radar;
pub mod roc;
pub mod scenario;

pub use error::{Error, Result};
pub use gaussian::{CovarianceForm, CovarianceLabel, Hypothesis, ModePairCovariance, NoiseRadar};
pub use radar::RadarKind;
pub use scenario::RadarScenario;
