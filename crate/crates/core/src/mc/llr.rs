//! Log-likelihood ratio between two zero-mean Gaussian mode-pair hypotheses.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::gaussian::ModePairCovariance;

fn inverse_and_ln_det(m: &Matrix4<f64>) -> Result<(Matrix4<f64>, f64)> {
    let chol = m.cholesky().ok_or(Error::Singular { det: m.determinant() })?;
    let ln_det = 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    Ok((chol.inverse(), ln_det))
}

/// `½xᵀ(Σ₀⁻¹ - Σ₁⁻¹)x + ½ln(detΣ₀/detΣ₁)`.
pub fn llr_gaussian(x: &Vector4<f64>, h0: &ModePairCovariance, h1: &ModePairCovariance) -> Result<f64> {
    Ok(Llr::new(h0, h1)?.eval(x))
}

/// Precomputed quadratic form of [`llr_gaussian`].
#[derive(Debug, Clone, PartialEq)]
pub struct Llr {
    /// `½(Σ₀⁻¹ - Σ₁⁻¹)`
    pub half_diff: Matrix4<f64>,
    /// `½ln(detΣ₀/detΣ₁)`
    pub offset: f64,
}

impl Llr {
    pub fn new(h0: &ModePairCovariance, h1: &ModePairCovariance) -> Result<Self> {
        Self::from_matrices(h0.matrix(), h1.matrix())
    }

    pub fn from_matrices(h0: &Matrix4<f64>, h1: &Matrix4<f64>) -> Result<Self> {
        let (i0, l0) = inverse_and_ln_det(h0)?;
        let (i1, l1) = inverse_and_ln_det(h1)?;
        let d = (i0 - i1) * 0.5;
        Ok(Self { half_diff: (d + d.transpose()) * 0.5, offset: 0.5 * (l0 - l1) })
    }

    pub fn eval(&self, x: &Vector4<f64>) -> f64 {
        (x.transpose() * self.half_diff * x)[(0, 0)] + self.offset
    }
}

/// Per-mode LLR of `x = F z`, written directly in the standard-normal draw
/// `z`: `zᵀ(Fᵀ·½(Σ₀⁻¹-Σ₁⁻¹)·F)z + offset`. Only the upper triangle is kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct FusedKernel {
    diag: [f64; 4],
    off: [f64; 6],
    pub offset: f64,
}

impl FusedKernel {
    pub fn new(llr: &Llr, factor: &Matrix4<f64>) -> Self {
        let b = factor.transpose() * llr.half_diff * factor;
        Self {
            diag: [b[(0, 0)], b[(1, 1)], b[(2, 2)], b[(3, 3)]],
            off: [
                2.0 * b[(0, 1)],
                2.0 * b[(0, 2)],
                2.0 * b[(0, 3)],
                2.0 * b[(1, 2)],
                2.0 * b[(1, 3)],
                2.0 * b[(2, 3)],
            ],
            offset: llr.offset,
        }
    }

    /// Quadratic part only.
    #[inline]
    pub fn quad(&self, z: &[f64; 4]) -> f64 {
        let [a, b, c, d] = *z;
        self.diag[0] * a * a
            + self.diag[1] * b * b
            + self.diag[2] * c * c
            + self.diag[3] * d * d
            + self.off[0] * a * b
            + self.off[1] * a * c
            + self.off[2] * a * d
            + self.off[3] * b * c
            + self.off[4] * b * d
            + self.off[5] * c * d
    }
}
