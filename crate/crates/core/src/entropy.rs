//! Rényi, Tsallis and unified `(α, s)` entropies of density matrices.
//!
//! All quantities are functions of `Tr ρ^α`. The unified entropy
//! `E_α^s(ρ) = ((Tr ρ^α)^s − 1) / ((1 − α) s)` is evaluated as
//! `expm1(s·ln Tr ρ^α) / ((1 − α) s)`, which stays accurate near the
//! removable singularities at `s = 0` (Rényi) and `α = 1` (von Neumann).

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, HERMITIAN_TOL};

/// `|α − 1|` below this routes to the von Neumann branch.
pub const ALPHA_ONE_TOL: f64 = 1e-9;
/// `|s|` below this routes to the Rényi branch.
pub const S_ZERO_TOL: f64 = 1e-12;
/// Eigenvalues below this are dropped from entropy sums.
pub const EIGEN_DROP: f64 = 1e-14;
/// Default allowed `|Tr ρ − 1|`.
pub const DENSITY_TRACE_TOL: f64 = 1e-9;
/// Smallest admitted eigenvalue of a density matrix.
pub const DENSITY_EIGEN_FLOOR: f64 = -1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyParams {
    pub alpha: f64,
    pub s: f64,
}

impl EntropyParams {
    pub fn new(alpha: f64, s: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || !s.is_finite() {
            return Err(Error::BadParams(format!(
                "entropy parameters need alpha > 0 and finite s (alpha = {alpha}, s = {s})"
            )));
        }
        Ok(Self { alpha, s })
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0)
    }

    pub fn tsallis(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn is_von_neumann(&self) -> bool {
        (self.alpha - 1.0).abs() < ALPHA_ONE_TOL
    }

    pub fn is_renyi(&self) -> bool {
        self.s.abs() < S_ZERO_TOL
    }

    /// `(1 − α) s` with the limit branches collapsed to the Rényi form:
    /// the factor `n^{(1−α)s}` multiplying subsystem entropies.
    pub fn dimension_weight(&self, dim: f64) -> f64 {
        if self.is_von_neumann() || self.is_renyi() {
            1.0
        } else {
            ((1.0 - self.alpha) * self.s * dim.ln()).exp()
        }
    }
}

/// `ln_α(x) = (x^{1−α} − 1)/(1 − α)`, `ln x` for `α` near one.
pub fn alpha_log(x: f64, alpha: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::DomainError {
            x,
            what: "the alpha-logarithm",
        });
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::BadParams(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return Ok(x.ln());
    }
    let w = 1.0 - alpha;
    Ok((w * x.ln()).exp_m1() / w)
}

/// Eigenvalues of a validated density matrix, with those below
/// [`EIGEN_DROP`] removed. No renormalization is performed.
pub fn density_spectrum(rho: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    let not_density = |reason: String| Error::NotDensity { reason };
    rho.ensure_square()
        .map_err(|e| not_density(e.to_string()))?;
    let values =
        hermitian_eigenvalues(rho, HERMITIAN_TOL).map_err(|e| not_density(e.to_string()))?;
    let trace: f64 = rho.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(not_density(format!("trace {trace} differs from 1")));
    }
    if let Some(&min) = values.first() {
        if min < DENSITY_EIGEN_FLOOR {
            return Err(not_density(format!("eigenvalue {min:e} is negative")));
        }
    }
    Ok(values.into_iter().filter(|&l| l >= EIGEN_DROP).collect())
}

fn power_trace(spectrum: &[f64], alpha: f64) -> f64 {
    spectrum.iter().map(|&l| l.powf(alpha)).sum()
}

fn von_neumann_of(spectrum: &[f64]) -> f64 {
    -spectrum.iter().map(|&l| l * l.ln()).sum::<f64>()
}

fn renyi_of(spectrum: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        von_neumann_of(spectrum)
    } else {
        power_trace(spectrum, alpha).ln() / (1.0 - alpha)
    }
}

/// `E_α^s` of a spectrum as returned by [`density_spectrum`].
pub fn unified_entropy_of_spectrum(spectrum: &[f64], params: EntropyParams) -> f64 {
    if params.is_von_neumann() {
        von_neumann_of(spectrum)
    } else if params.is_renyi() {
        renyi_of(spectrum, params.alpha)
    } else {
        let w = (1.0 - params.alpha) * params.s;
        (params.s * power_trace(spectrum, params.alpha).ln()).exp_m1() / w
    }
}

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(von_neumann_of(&density_spectrum(rho, tol)?))
}

/// `R_α(ρ) = ln(Tr ρ^α)/(1 − α)`.
pub fn renyi_entropy(rho: &ComplexMatrix, alpha: f64, tol: f64) -> Result<f64> {
    let params = EntropyParams::renyi(alpha)?;
    Ok(renyi_of(&density_spectrum(rho, tol)?, params.alpha))
}

/// `T_α(ρ) = (Tr ρ^α − 1)/(1 − α)`.
pub fn tsallis_entropy(rho: &ComplexMatrix, alpha: f64, tol: f64) -> Result<f64> {
    let params = EntropyParams::tsallis(alpha)?;
    let spectrum = density_spectrum(rho, tol)?;
    if params.is_von_neumann() {
        return Ok(von_neumann_of(&spectrum));
    }
    Ok((power_trace(&spectrum, alpha) - 1.0) / (1.0 - alpha))
}

/// `E_α^s(ρ)`, including the `s → 0` and `α → 1` limits.
pub fn unified_entropy(rho: &ComplexMatrix, params: EntropyParams, tol: f64) -> Result<f64> {
    let params = EntropyParams::new(params.alpha, params.s)?;
    Ok(unified_entropy_of_spectrum(
        &density_spectrum(rho, tol)?,
        params,
    ))
}

/// `E_α^s(I/m) = (m^{(1−α)s} − 1)/((1 − α) s)`, the largest value on
/// `m`-dimensional densities.
pub fn max_entropy_value(m: usize, params: EntropyParams) -> f64 {
    let ln_m = (m as f64).ln();
    if params.is_von_neumann() || params.is_renyi() {
        return ln_m;
    }
    let w = (1.0 - params.alpha) * params.s;
    (w * ln_m).exp_m1() / w
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = DENSITY_TRACE_TOL;

    fn mixed(m: usize) -> ComplexMatrix {
        ComplexMatrix::identity(m).scale_real(1.0 / m as f64)
    }

    #[test]
    fn alpha_log_examples() {
        for a in [0.3, 1.0, 2.0, 5.0] {
            assert_eq!(alpha_log(1.0, a).unwrap(), 0.0);
        }
        assert!((alpha_log(4.0, 0.5).unwrap() - 2.0).abs() < 1e-14);
        let e = std::f64::consts::E;
        assert!((alpha_log(e, 1.0 + 1e-6).unwrap() - 1.0).abs() < 1e-5);
        assert!((alpha_log(e, 1.0 - 1e-6).unwrap() - 1.0).abs() < 1e-5);
        assert!(matches!(
            alpha_log(0.0, 2.0),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            alpha_log(-1.0, 2.0),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn renyi_examples() {
        for m in [2usize, 3, 5] {
            for a in [0.3, 1.0, 2.0, 4.0] {
                let r = renyi_entropy(&mixed(m), a, TOL).unwrap();
                assert!((r - (m as f64).ln()).abs() < 1e-13);
            }
        }
        let pure = ComplexMatrix::from_diag(&[1.0, 0.0]);
        assert!(renyi_entropy(&pure, 2.0, TOL).unwrap().abs() < 1e-15);
        assert!(renyi_entropy(&pure, 1.0, TOL).unwrap().abs() < 1e-15);
        let r = renyi_entropy(&ComplexMatrix::from_diag(&[0.5, 0.5]), 2.0, TOL).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tsallis_examples() {
        assert!((tsallis_entropy(&mixed(2), 2.0, TOL).unwrap() - 0.5).abs() < 1e-15);
        assert!((alpha_log(2.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let pure = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert!(tsallis_entropy(&pure, 3.0, TOL).unwrap().abs() < 1e-15);
        let t = tsallis_entropy(&ComplexMatrix::from_diag(&[0.7, 0.3]), 2.0, TOL).unwrap();
        assert!((t - 0.42).abs() < 1e-14);
    }

    #[test]
    fn unified_examples() {
        let p = EntropyParams::new(2.0, 1.0).unwrap();
        assert!((unified_entropy(&mixed(2), p, TOL).unwrap() - 0.5).abs() < 1e-15);
        let rho = ComplexMatrix::from_diag(&[0.6, 0.3, 0.1]);
        let near = unified_entropy(&rho, EntropyParams::new(2.0, 1e-8).unwrap(), TOL).unwrap();
        let renyi = renyi_entropy(&rho, 2.0, TOL).unwrap();
        assert!((near - renyi).abs() <= 1e-6);
        for m in [2usize, 4, 7] {
            for (a, s) in [(0.5, 2.0), (3.0, -1.0), (1.5, 0.5)] {
                let p = EntropyParams::new(a, s).unwrap();
                let expected = ((m as f64).powf((1.0 - a) * s) - 1.0) / ((1.0 - a) * s);
                assert!((unified_entropy(&mixed(m), p, TOL).unwrap() - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn max_entropy_examples() {
        assert!((max_entropy_value(2, EntropyParams::new(2.0, 1.0).unwrap()) - 0.5).abs() < 1e-15);
        assert!(
            (max_entropy_value(4, EntropyParams::new(3.0, 0.0).unwrap()) - 4f64.ln()).abs() < 1e-15
        );
        assert!(
            (max_entropy_value(4, EntropyParams::new(1.0, 2.0).unwrap()) - 4f64.ln()).abs() < 1e-15
        );
        let p = EntropyParams::new(0.5, 1.0).unwrap();
        assert!((max_entropy_value(9, p) - alpha_log(9.0, 0.5).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_densities() {
        let unnormalized = ComplexMatrix::from_diag(&[0.5, 0.6]);
        assert!(matches!(
            renyi_entropy(&unnormalized, 2.0, TOL),
            Err(Error::NotDensity { .. })
        ));
        let indefinite = ComplexMatrix::from_diag(&[1.2, -0.2]);
        assert!(matches!(
            tsallis_entropy(&indefinite, 2.0, TOL),
            Err(Error::NotDensity { .. })
        ));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            von_neumann_entropy(&rect, TOL),
            Err(Error::NotDensity { .. })
        ));
        assert!(EntropyParams::new(0.0, 1.0).is_err());
        assert!(EntropyParams::new(-1.0, 1.0).is_err());
    }
}
