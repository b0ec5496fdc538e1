//! Symmetric anti-norms of positive semidefinite matrices.
//!
//! Anti-norms are homogeneous, unitarily symmetric and superadditive,
//! `‖Q + R‖ >= ‖Q‖ + ‖R‖`. They may vanish on nonzero inputs: the Ky Fan
//! `k`-anti-norm of a rank-one matrix is zero for every `k >= 2`.

use crate::error::{Error, Result};
use crate::linalg::{self, pd_floor, psd_eigenvalues, ComplexMatrix};
use crate::norms::check_k;

/// Sum of the `k` smallest eigenvalues of a PSD matrix.
pub fn kyfan_antinorm(q: &ComplexMatrix, k: usize, tol: f64) -> Result<f64> {
    let values = psd_eigenvalues(q, tol)?;
    check_k(k, values.len())?;
    Ok(values[..k].iter().sum())
}

/// Schatten `p`-anti-norm `(Σ λ_j^p)^{1/p}`.
///
/// Admits `p ∈ (0, 1]` on PSD input and `p < 0` on strictly positive input
/// (smallest eigenvalue above [`pd_floor`]). `p = 1` is the trace.
pub fn schatten_antinorm(q: &ComplexMatrix, p: f64, tol: f64) -> Result<f64> {
    if !(p < 0.0 || (p > 0.0 && p <= 1.0)) || !p.is_finite() {
        return Err(Error::BadP {
            p,
            reason: "anti-norm exponents must lie in (0, 1] or be negative",
        });
    }
    let values = psd_eigenvalues(q, tol)?;
    schatten_antinorm_of_spectrum(&values, p)
}

/// [`schatten_antinorm`] on an ascending, already clamped spectrum.
pub fn schatten_antinorm_of_spectrum(ascending: &[f64], p: f64) -> Result<f64> {
    if p < 0.0 {
        let spectral = ascending.last().copied().unwrap_or(0.0);
        let floor = pd_floor(spectral);
        if ascending[0] <= floor {
            return Err(Error::SingularForNegativePower {
                min_eigenvalue: ascending[0],
                floor,
            });
        }
    }
    Ok(power_sum_root(ascending, p))
}

/// `(Σ x_j^p)^{1/p}` for nonnegative `x` and `p ∈ (0, 1]`, or positive `x`
/// and `p < 0`.
pub(crate) fn power_sum_root(values: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return values.iter().sum();
    }
    let sum: f64 = values
        .iter()
        .map(|&x| if x == 0.0 { 0.0 } else { x.powf(p) })
        .sum();
    if sum == 0.0 {
        0.0
    } else {
        sum.powf(1.0 / p)
    }
}

fn check_anti_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadP {
            p,
            reason: "the (k, p) anti-norm family needs p in (0, 1]",
        })
    }
}

/// `‖Q‖_{k}^(p) = (Σ_{j<=k} (λ_j↑)^p)^{1/p}`.
///
/// When `ambient_dim` exceeds the matrix dimension the spectrum is first
/// extended by zeros, which then occupy the smallest slots.
pub fn kp_antinorm(
    q: &ComplexMatrix,
    k: usize,
    p: f64,
    tol: f64,
    ambient_dim: Option<usize>,
) -> Result<f64> {
    check_anti_p(p)?;
    let values = psd_eigenvalues(q, tol)?;
    let m = values.len();
    let ambient = ambient_dim.unwrap_or(m);
    if ambient < m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: ambient,
        });
    }
    check_k(k, ambient)?;
    Ok(kp_antinorm_of_spectrum(&values, k, p, ambient))
}

/// [`kp_antinorm`] on an ascending nonnegative spectrum padded with zeros
/// to `ambient` entries. Parameters are not validated.
pub fn kp_antinorm_of_spectrum(ascending: &[f64], k: usize, p: f64, ambient: usize) -> f64 {
    let zeros = ambient.saturating_sub(ascending.len());
    if k <= zeros {
        return 0.0;
    }
    power_sum_root(&ascending[..k - zeros], p)
}

/// Uhlmann's `k`-th partial fidelity: the Ky Fan `{m-k}`-anti-norm of
/// `|√ρ √σ|`. For `k = m` the anti-norm is empty and the result is `0`.
pub fn partial_fidelity(
    rho: &ComplexMatrix,
    sigma: &ComplexMatrix,
    k: usize,
    tol: f64,
) -> Result<f64> {
    let m = rho.ensure_square()?;
    let ms = sigma.ensure_square()?;
    if m != ms {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: ms,
        });
    }
    check_k(k, m)?;
    let sqrt_rho = linalg::psd_power(rho, 0.5, tol)?;
    let sqrt_sigma = linalg::psd_power(sigma, 0.5, tol)?;
    if k == m {
        return Ok(0.0);
    }
    let product = sqrt_rho.matmul(&sqrt_sigma);
    let modulus = linalg::abs(&product);
    kyfan_antinorm(&modulus, m - k, tol.max(linalg::HERMITIAN_TOL))
}
