//! Zero-mean Gaussian mode-pair draws.

use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::{ModePairCovariance, PSD_TOL};

/// `F` with `F Fᵀ = Σ`, by Cholesky with diagonal pivoting.
///
/// Stops at the numerical rank, so semidefinite (even zero) matrices factor;
/// columns past the rank are zero. A residual diagonal below `-PSD_TOL·trace`
/// is reported as not PSD.
pub fn pivoted_cholesky(sigma: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let trace = sigma.trace();
    let tol = PSD_TOL * trace.abs();
    let mut a = *sigma;
    let mut f = Matrix4::<f64>::zeros();
    let mut done = [false; 4];
    for col in 0..4 {
        let (piv, dmax) = (0..4)
            .filter(|&i| !done[i])
            .map(|i| (i, a[(i, i)]))
            .fold((usize::MAX, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b });
        if dmax < -tol {
            return Err(Error::NotPsd { min_eigenvalue: dmax, trace });
        }
        if dmax <= tol {
            break;
        }
        let root = dmax.sqrt();
        done[piv] = true;
        for i in 0..4 {
            f[(i, col)] = if done[i] && i != piv { 0.0 } else { a[(i, piv)] / root };
        }
        for i in 0..4 {
            for j in 0..4 {
                a[(i, j)] -= f[(i, col)] * f[(j, col)];
            }
        }
    }
    Ok(f)
}

/// Draws from one mode-pair covariance.
#[derive(Debug, Clone)]
pub struct ModeSampler {
    factor: Matrix4<f64>,
}

impl ModeSampler {
    pub fn new(cov: &ModePairCovariance) -> Result<Self> {
        Ok(Self { factor: pivoted_cholesky(cov.matrix())? })
    }

    pub fn factor(&self) -> &Matrix4<f64> {
        &self.factor
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector4<f64> {
        self.factor * standard_normal4(rng)
    }
}

pub(crate) fn standard_normal4<R: Rng + ?Sized>(rng: &mut R) -> Vector4<f64> {
    Vector4::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// One zero-mean draw `(Re a_R, Im a_R, Re a_I, Im a_I)` with covariance `cov`.
pub fn sample_mode_pair<R: Rng + ?Sized>(cov: &ModePairCovariance, rng: &mut R) -> Result<Vector4<f64>> {
    Ok(ModeSampler::new(cov)?.sample(rng))
}
