//! Moment-level Gaussian-state models.
//!
//! Quadrature convention: a mode operator `a` is split as `a = x + j·y` with
//! vacuum variance 1/4 per quadrature. Pre-amplified heterodyne detection with
//! gain `G_A` and noise figure `N_F` then reports quadratures with variance
//! `G_A·(N + N_F)/2` for a thermal mode of brightness `N`; `N_F = 1` is the
//! quantum limit.
//!
//! All 4×4 covariances use the ordering `(Re a_R, Im a_R, Re a_I, Im a_I)`
//! for the (return, idler) mode pair.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::RadarScenario;

/// Relative symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Minimum eigenvalue allowed, as a multiple of `-trace`.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseRadar {
    #[serde(rename = "qcn")]
    Qcn,
    #[serde(rename = "ccn")]
    Ccn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Target absent.
    #[serde(rename = "h0")]
    H0,
    /// Target present.
    #[serde(rename = "h1")]
    H1,
}

impl Hypothesis {
    pub fn index(self) -> usize {
        match self {
            Hypothesis::H0 => 0,
            Hypothesis::H1 => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceForm {
    Raw,
    Transformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CovarianceLabel {
    pub radar: NoiseRadar,
    pub hypothesis: Hypothesis,
    pub form: CovarianceForm,
}

/// Quadrature covariance of one (return, idler) mode pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePairCovariance {
    matrix: Matrix4<f64>,
    label: CovarianceLabel,
}

#[derive(Serialize)]
struct CovarianceExport {
    label: CovarianceLabel,
    matrix: [[f64; 4]; 4],
}

impl ModePairCovariance {
    /// Wraps `matrix` after checking symmetry and positive semidefiniteness.
    pub fn new(matrix: Matrix4<f64>, label: CovarianceLabel) -> Result<Self> {
        check_psd(&matrix)?;
        Ok(Self { matrix, label })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn label(&self) -> CovarianceLabel {
        self.label
    }

    /// Row-major copy of the matrix.
    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.matrix[(r, c)];
            }
        }
        out
    }

    /// JSON object `{"label": {...}, "matrix": [[..4..] x4]}`, row-major.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CovarianceExport {
            label: self.label,
            matrix: self.rows(),
        })?)
    }

    pub fn return_block(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn idler_block(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn cross_block(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 2).into_owned()
    }
}

/// Checks symmetry (relative) and PSD (`λ_min ≥ -PSD_TOL·trace`).
pub fn check_psd(matrix: &Matrix4<f64>) -> Result<()> {
    let scale = matrix.amax();
    let asym = (matrix - matrix.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Incompatible(format!(
            "matrix is not symmetric (max asymmetry {asym:e})"
        )));
    }
    let trace = matrix.trace();
    let eig = SymmetricEigen::new(*matrix);
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL * trace.abs() {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            trace,
        });
    }
    Ok(())
}

/// `[[cos θ, sin θ], [sin θ, -cos θ]]`, the SPDC cross-block shape.
pub fn reflection(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, s, -c)
}

/// Rotation by `theta`.
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn assemble(ret: f64, idl: f64, cross: Matrix2<f64>, scale: f64) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&(Matrix2::identity() * ret));
    m.fixed_view_mut::<2, 2>(2, 2)
        .copy_from(&(Matrix2::identity() * idl));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&cross);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&cross.transpose());
    m * scale
}

/// Signal/idler second moments and their classicality limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCorrReport {
    /// `⟨a_S† a_I⟩`
    pub phase_insensitive: Complex64,
    /// `⟨a_S a_I⟩`
    pub phase_sensitive: Complex64,
    pub auto_s: f64,
    pub auto_i: f64,
    pub classical_ps_limit: f64,
    pub quantum_ps_limit: f64,
    pub is_classical: bool,
    pub saturates_quantum: bool,
}

impl CrossCorrReport {
    pub fn new(
        phase_insensitive: Complex64,
        phase_sensitive: Complex64,
        auto_s: f64,
        auto_i: f64,
    ) -> Result<Self> {
        let classical = classical_ps_limit(auto_s, auto_i)?;
        let quantum = quantum_ps_limit(auto_s, auto_i)?;
        // absorb last-ulp rounding in the comparisons
        let slack = 1e-12;
        let ps = phase_sensitive.norm();
        Ok(Self {
            phase_insensitive,
            phase_sensitive,
            auto_s,
            auto_i,
            classical_ps_limit: classical,
            quantum_ps_limit: quantum,
            is_classical: ps <= classical * (1.0 + slack)
                && phase_insensitive.norm() <= classical * (1.0 + slack),
            saturates_quantum: (ps - quantum).abs() <= slack * quantum.max(f64::MIN_POSITIVE),
        })
    }
}

fn nonneg(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            domain: "[0,inf)",
            value: x,
        })
    }
}

fn positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            domain: "(0,inf)",
            value: x,
        })
    }
}

/// Largest `|⟨a_S a_I⟩|` allowed for a classical state: `√(⟨N_S⟩⟨N_I⟩)`.
pub fn classical_ps_limit(auto_s: f64, auto_i: f64) -> Result<f64> {
    nonneg("classical_ps_limit auto_s", auto_s)?;
    nonneg("classical_ps_limit auto_i", auto_i)?;
    Ok((auto_s * auto_i).sqrt())
}

/// Largest `|⟨a_S a_I⟩|` allowed for any state: `√(max·(min + 1))`.
pub fn quantum_ps_limit(auto_s: f64, auto_i: f64) -> Result<f64> {
    nonneg("quantum_ps_limit auto_s", auto_s)?;
    nonneg("quantum_ps_limit auto_i", auto_i)?;
    let (hi, lo) = if auto_s >= auto_i {
        (auto_s, auto_i)
    } else {
        (auto_i, auto_s)
    };
    Ok((hi * (lo + 1.0)).sqrt())
}

/// Moments of a two-mode squeezed vacuum with brightness `n_s` per arm.
pub fn tmsv_moments(n_s: f64) -> Result<CrossCorrReport> {
    positive("tmsv_moments n_s", n_s)?;
    CrossCorrReport::new(
        Complex64::new(0.0, 0.0),
        Complex64::new((n_s * (n_s + 1.0)).sqrt(), 0.0),
        n_s,
        n_s,
    )
}

/// Return/idler moments under one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalMoments {
    /// `⟨a_R† a_R⟩`
    pub return_energy: f64,
    /// `⟨a_I† a_I⟩`
    pub idler_energy: f64,
    /// `⟨a_R a_I⟩`
    pub phase_sensitive: Complex64,
    /// `⟨a_R† a_I⟩`
    pub phase_insensitive: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnMoments {
    pub h0: ConditionalMoments,
    pub h1: ConditionalMoments,
}

impl ReturnMoments {
    pub fn get(&self, h: Hypothesis) -> &ConditionalMoments {
        match h {
            Hypothesis::H0 => &self.h0,
            Hypothesis::H1 => &self.h1,
        }
    }
}

/// Conditional moments of the returned mode `a_R = √κ e^{jθ} a_S + √(1-κ) a_B`
/// paired with a TMSV idler.
pub fn return_mode_moments(scenario: &RadarScenario) -> Result<ReturnMoments> {
    let s = scenario.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let h0 = ConditionalMoments {
        return_energy: s.n_b,
        idler_energy: s.n_s,
        phase_sensitive: zero,
        phase_insensitive: zero,
    };
    let h1 = ConditionalMoments {
        return_energy: s.n_r(),
        idler_energy: s.n_s,
        phase_sensitive: Complex64::from_polar((s.kappa * s.n_s * (s.n_s + 1.0)).sqrt(), s.theta),
        phase_insensitive: zero,
    };
    Ok(ReturnMoments { h0, h1 })
}

/// Raw heterodyne covariance of a QCN (SPDC-source) mode pair.
pub fn qcn_covariance(scenario: &RadarScenario, h: Hypothesis) -> Result<ModePairCovariance> {
    let s = scenario.validate()?;
    let (ret, cross) = match h {
        Hypothesis::H0 => (s.n_b, Matrix2::zeros()),
        Hypothesis::H1 => (
            s.n_r(),
            reflection(s.theta) * (s.kappa * s.n_s * (s.n_s + 1.0)).sqrt(),
        ),
    };
    let m = assemble(ret + s.n_f, s.n_s + s.n_f, cross, s.g_a / 2.0);
    ModePairCovariance::new(
        m,
        CovarianceLabel {
            radar: NoiseRadar::Qcn,
            hypothesis: h,
            form: CovarianceForm::Raw,
        },
    )
}

/// Raw heterodyne covariance of a CCN (classical-noise-source) mode pair.
pub fn ccn_covariance(scenario: &RadarScenario, h: Hypothesis) -> Result<ModePairCovariance> {
    let s = scenario.validate()?;
    let (ret, cross) = match h {
        Hypothesis::H0 => (s.n_b, Matrix2::zeros()),
        Hypothesis::H1 => (
            s.n_r(),
            rotation(s.theta) * (s.kappa * s.n_s * s.n_i).sqrt(),
        ),
    };
    let m = assemble(ret + s.n_f, s.n_i + s.n_f, cross, s.g_a / 2.0);
    ModePairCovariance::new(
        m,
        CovarianceLabel {
            radar: NoiseRadar::Ccn,
            hypothesis: h,
            form: CovarianceForm::Raw,
        },
    )
}

pub fn noise_radar_covariance(
    radar: NoiseRadar,
    scenario: &RadarScenario,
    h: Hypothesis,
) -> Result<ModePairCovariance> {
    match radar {
        NoiseRadar::Qcn => qcn_covariance(scenario, h),
        NoiseRadar::Ccn => ccn_covariance(scenario, h),
    }
}

/// Linear map taking raw mode-pair quadratures to the normalized coordinates
/// in which QCN and CCN statistics are directly comparable.
///
/// QCN: `(a_R, a_I*/√(N_S+1)) / √G_A`; CCN: `(a_R, a_I/√N_I) / √G_A`.
pub fn normalizing_map(radar: NoiseRadar, scenario: &RadarScenario) -> Matrix4<f64> {
    let g = scenario.g_a.sqrt();
    let (idler_scale, conj) = match radar {
        NoiseRadar::Qcn => ((scenario.n_s + 1.0).sqrt(), -1.0),
        NoiseRadar::Ccn => (scenario.n_i.sqrt(), 1.0),
    };
    Matrix4::from_diagonal(&nalgebra::Vector4::new(
        1.0 / g,
        1.0 / g,
        1.0 / (g * idler_scale),
        conj / (g * idler_scale),
    ))
}

/// Applies [`normalizing_map`] as a congruence `T Λ Tᵀ`.
pub fn transform_covariance(
    cov: &ModePairCovariance,
    scenario: &RadarScenario,
) -> Result<ModePairCovariance> {
    let label = cov.label();
    if label.form != CovarianceForm::Raw {
        return Err(Error::LabelMismatch(format!(
            "expected a raw covariance, got {:?}",
            label.form
        )));
    }
    let s = scenario.validate()?;
    let expected = noise_radar_covariance(label.radar, &s, label.hypothesis)?;
    let diff = (expected.matrix() - cov.matrix()).amax();
    if diff > 1e-12 * cov.matrix().amax() {
        return Err(Error::LabelMismatch(
            "covariance does not belong to the given scenario".into(),
        ));
    }
    let t = normalizing_map(label.radar, &s);
    let mut m = t * cov.matrix() * t.transpose();
    // restore exact symmetry lost to rounding
    m = (m + m.transpose()) * 0.5;
    ModePairCovariance::new(
        m,
        CovarianceLabel {
            form: CovarianceForm::Transformed,
            ..label
        },
    )
}

/// Transformed covariance straight from the scenario.
pub fn transformed_covariance(
    radar: NoiseRadar,
    scenario: &RadarScenario,
    h: Hypothesis,
) -> Result<ModePairCovariance> {
    transform_covariance(&noise_radar_covariance(radar, scenario, h)?, scenario)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverVerdict {
    pub ccn_beats_qcn: bool,
    /// `N_F(N_S+1)/(N_F-1)`; `None` when `N_F = 1`.
    pub threshold: Option<f64>,
    pub note: &'static str,
}

/// Whether the CCN radar's transformed idler is quieter than the QCN radar's.
pub fn ccn_beats_qcn(scenario: &RadarScenario) -> CrossoverVerdict {
    let s = scenario;
    if s.n_f <= 1.0 {
        return CrossoverVerdict {
            ccn_beats_qcn: false,
            threshold: None,
            note: "equal in N_I->inf limit",
        };
    }
    let threshold = s.n_f * (s.n_s + 1.0) / (s.n_f - 1.0);
    let beats = s.n_i > threshold;
    CrossoverVerdict {
        ccn_beats_qcn: beats,
        threshold: Some(threshold),
        note: if beats {
            "CCN idler noise below QCN idler noise"
        } else {
            "CCN idler noise not below QCN idler noise"
        },
    }
}

/// Mean photon counts at the OPA receiver's idler output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpaStats {
    pub gain: f64,
    /// Mean count per mode given target absence.
    pub n0: f64,
    /// Mean count per mode given target presence.
    pub n1: f64,
    pub total_mean_h0: f64,
    pub total_mean_h1: f64,
}

fn opa_mean(gain: f64, m: &ConditionalMoments) -> f64 {
    gain * m.idler_energy
        + (gain - 1.0) * (m.return_energy + 1.0)
        + 2.0 * (gain * (gain - 1.0)).sqrt() * m.phase_sensitive.re
}

/// Per-mode and total mean counts of `a_out = √G a_I + √(G-1) a_R†`.
pub fn opa_output_stats(scenario: &RadarScenario) -> Result<OpaStats> {
    let gain = scenario.opa_gain()?;
    if !(gain > 1.0) {
        return Err(Error::OutOfRange {
            field: "g_opa",
            range: "(1,inf)",
            value: gain,
        });
    }
    let moments = return_mode_moments(scenario)?;
    let n0 = opa_mean(gain, &moments.h0);
    let n1 = opa_mean(gain, &moments.h1);
    let m = scenario.m();
    Ok(OpaStats {
        gain,
        n0,
        n1,
        total_mean_h0: m * n0,
        total_mean_h1: m * n1,
    })
}

/// Mean counts at the two outputs of a 50–50 beam splitter combining the
/// return and idler modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortMeans {
    pub plus: f64,
    pub minus: f64,
}

impl PortMeans {
    pub fn asymmetry(&self) -> f64 {
        self.plus - self.minus
    }
}

/// `⟨|a_±|²⟩ = (⟨|a_R|²⟩ ± 2 Re⟨a_R* a_I⟩ + ⟨|a_I|²⟩) / 2`.
pub fn beam_splitter_ports(
    return_energy: f64,
    idler_energy: f64,
    phase_insensitive: Complex64,
) -> PortMeans {
    let cross = 2.0 * phase_insensitive.re;
    PortMeans {
        plus: (return_energy + cross + idler_energy) / 2.0,
        minus: (return_energy - cross + idler_energy) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferometerMeans {
    pub h0: PortMeans,
    pub h1: PortMeans,
}

/// Photon-counting interferometer means for the QI return/idler pair.
pub fn interferometer_means(scenario: &RadarScenario) -> Result<InterferometerMeans> {
    let m = return_mode_moments(scenario)?;
    let ports = |c: &ConditionalMoments| {
        beam_splitter_ports(c.return_energy, c.idler_energy, c.phase_insensitive)
    };
    Ok(InterferometerMeans {
        h0: ports(&m.h0),
        h1: ports(&m.h1),
    })
}

/// Truncated photon-number distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberDistribution {
    /// `probs[n]` for `n = 0..=n_max`.
    pub probs: Vec<f64>,
    /// Probability mass above `n_max`.
    pub tail_mass: f64,
}

impl NumberDistribution {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - mean).powi(2) * p)
            .sum()
    }
}

pub const DEFAULT_N_MAX: usize = 64;

/// Diagonal joint distribution `p(n, n) = N_S^n / (N_S+1)^{n+1}` of a TMSV;
/// off-diagonal entries are zero.
pub fn tmsv_number_dist(n_s: f64, n_max: usize) -> Result<NumberDistribution> {
    positive("tmsv_number_dist n_s", n_s)?;
    let ratio = n_s / (n_s + 1.0);
    let mut p = 1.0 / (n_s + 1.0);
    let mut probs = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        probs.push(p);
        p *= ratio;
    }
    Ok(NumberDistribution {
        probs,
        tail_mass: ratio.powi(n_max as i32 + 1),
    })
}

/// Poisson photon-number distribution of a coherent state with mean `n_s`.
pub fn coherent_number_dist(n_s: f64, n_max: usize) -> Result<NumberDistribution> {
    nonneg("coherent_number_dist n_s", n_s)?;
    let mut p = (-n_s).exp();
    let mut probs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            p *= n_s / n as f64;
        }
        probs.push(p);
    }
    let tail_mass = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(NumberDistribution { probs, tail_mass })
}
