//! Dense complex matrix kernels.
//!
//! Everything here works on [`ComplexMatrix`] at desk-scale dimensions
//! (a few dozen rows). Hermitian spectra come from cyclic Jacobi sweeps;
//! singular values are read off the Hermitian dilation `[[0, Q], [Q†, 0]]`,
//! whose eigenvalues are `±σ_j(Q)` padded with zeros, which keeps small
//! singular values accurate to `ε·‖Q‖` instead of `sqrt(ε)·‖Q‖`.

mod eigen;
mod matrix;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use eigen::HermitianEigen;
pub use matrix::{kron, ComplexMatrix};

use crate::error::{Error, Result};

/// Relative Hermiticity tolerance used when callers have no better choice.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative floor below which a matrix is not treated as strictly positive.
pub const PD_FLOOR_REL: f64 = 1e-8;

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    m.ensure_square()?;
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian {
            asymmetry: m.hermitian_asymmetry(),
        });
    }
    Ok(eigen::jacobi_hermitian(m))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigen(m, tol).map(|e| e.values)
}

/// Singular values in descending order, `min(rows, cols)` of them.
pub fn singular_values(q: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = q.shape();
    let n = r + c;
    let dilation = ComplexMatrix::from_fn(n, n, |i, j| {
        if i < r && j >= r {
            q[(i, j - r)]
        } else if i >= r && j < r {
            q[(j, i - r)].conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let values = eigen::jacobi_hermitian(&dilation).values;
    values
        .iter()
        .rev()
        .take(r.min(c))
        .map(|&s| s.max(0.0))
        .collect()
}

/// Singular values extended by zeros to `len` entries (never truncated).
pub fn singular_values_padded(q: &ComplexMatrix, len: usize) -> Vec<f64> {
    let mut sv = singular_values(q);
    if sv.len() < len {
        sv.resize(len, 0.0);
    }
    sv
}

/// Spectral floor used for negative powers: `1e-8 * (1 + spectral norm)`.
pub fn pd_floor(spectral_norm: f64) -> f64 {
    PD_FLOOR_REL * (1.0 + spectral_norm)
}

/// Eigenvalues of a PSD matrix, ascending.
///
/// Fails with `NotPsd` when the smallest eigenvalue is below
/// `-tol * (1 + spectral norm)`. Eigenvalues of magnitude at most that
/// clamp threshold are set to exactly zero, so round-off on rank-deficient
/// input cannot leak into fractional powers.
pub fn psd_eigenvalues(q: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    psd_eigen(q, tol).map(|e| e.values)
}

fn psd_eigen(q: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let mut eig = hermitian_eigen(q, tol)?;
    let spectral = spectral_of(&eig.values);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -tol * (1.0 + spectral) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let clamp = tol * (1.0 + spectral);
    for v in &mut eig.values {
        if *v <= clamp {
            *v = 0.0;
        }
    }
    Ok(eig)
}

fn spectral_of(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `Q^t` for PSD `Q` by spectral calculus.
///
/// Negative `t` requires the smallest eigenvalue to exceed [`pd_floor`];
/// for `t > 0` clamped zero eigenvalues map to zero, and `t == 0` gives the
/// identity.
pub fn psd_power(q: &ComplexMatrix, t: f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = psd_eigen(q, tol)?;
    if t < 0.0 {
        let floor = pd_floor(spectral_of(&eig.values));
        let min = eig.values[0];
        if min <= floor {
            return Err(Error::SingularForNegativePower {
                min_eigenvalue: min,
                floor,
            });
        }
    }
    Ok(eig.map_spectrum(|l| {
        if t == 0.0 {
            1.0
        } else if l == 0.0 {
            0.0
        } else {
            l.powf(t)
        }
    }))
}

/// `|Q| = (Q†Q)^{1/2}`.
pub fn abs(q: &ComplexMatrix) -> ComplexMatrix {
    let gram = q.adjoint().matmul(q);
    psd_power(&gram, 0.5, HERMITIAN_TOL).expect("Q†Q is PSD")
}

/// Cyclic shift on `C^n`: column `j` maps to row `(j + 1) mod n`.
pub fn pauli_x(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "pauli_x needs n >= 1");
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == (j + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Clock operator `diag(exp(2πij/n))`.
pub fn pauli_z(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "pauli_z needs n >= 1");
    let phases: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect();
    ComplexMatrix::from_complex_diag(&phases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn eigenvalues_of_diagonal_are_sorted() {
        let v = hermitian_eigenvalues(&ComplexMatrix::from_diag(&[3.0, 1.0, 2.0]), 1e-10).unwrap();
        assert!(close(&v, &[1.0, 2.0, 3.0], 1e-15));
    }

    #[test]
    fn eigenvalues_of_identity() {
        let v = hermitian_eigenvalues(&ComplexMatrix::identity(3), 1e-10).unwrap();
        assert!(close(&v, &[1.0, 1.0, 1.0], 1e-15));
    }

    #[test]
    fn eigenvalues_of_swap() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = hermitian_eigenvalues(&x, 1e-10).unwrap();
        assert!(close(&v, &[-1.0, 1.0], 1e-15));
    }

    #[test]
    fn eigen_errors() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&rect, 1e-10),
            Err(Error::NotSquare { .. })
        ));
        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&skew, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let sv = singular_values(&ComplexMatrix::from_diag(&[1.0, -2.0]));
        assert!(close(&sv, &[2.0, 1.0], 1e-15));
    }

    #[test]
    fn singular_values_of_zero() {
        let sv = singular_values(&ComplexMatrix::zeros(3, 3));
        assert_eq!(sv, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn singular_values_rectangular_and_padded() {
        // rank-one 3x2: u v^T with |u| = 3, |v| = sqrt(2)
        let q = ComplexMatrix::from_real(3, 2, &[1.0, 1.0, 2.0, 2.0, 2.0, 2.0]).unwrap();
        let sv = singular_values(&q);
        assert_eq!(sv.len(), 2);
        assert!(close(&sv, &[3.0 * 2f64.sqrt(), 0.0], 1e-14));
        let padded = singular_values_padded(&q, 3);
        assert_eq!(padded.len(), 3);
        assert_eq!(padded[2], 0.0);
    }

    #[test]
    fn psd_power_examples() {
        let r = psd_power(&ComplexMatrix::from_diag(&[4.0, 9.0]), 0.5, 1e-10).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[2.0, 3.0])) < 1e-14);
        for t in [-2.0, -0.5, 0.0, 0.3, 1.0, 7.0] {
            let r = psd_power(&ComplexMatrix::identity(3), t, 1e-10).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        }
        let r = psd_power(&ComplexMatrix::from_diag(&[1.0, 0.5]), -1.0, 1e-10).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 2.0])) < 1e-14);
    }

    #[test]
    fn psd_power_errors() {
        let neg = ComplexMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            psd_power(&neg, 0.5, 1e-10),
            Err(Error::NotPsd { .. })
        ));
        let singular = ComplexMatrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(
            psd_power(&singular, -1.0, 1e-10),
            Err(Error::SingularForNegativePower { .. })
        ));
        // zero eigenvalue is fine for positive powers
        let r = psd_power(&singular, 0.5, 1e-10).unwrap();
        assert!(r.max_abs_diff(&singular) < 1e-15);
    }

    #[test]
    fn clamps_roundoff_negatives() {
        let m = ComplexMatrix::from_diag(&[1.0, -1e-14]);
        let r = psd_power(&m, 0.5, 1e-10).unwrap();
        assert_eq!(r[(1, 1)], Complex64::new(0.0, 0.0));
        let tiny = ComplexMatrix::from_diag(&[1.0, 1e-15, 1e-6]);
        assert_eq!(psd_eigenvalues(&tiny, 1e-10).unwrap(), vec![0.0, 1e-6, 1.0]);
    }

    #[test]
    fn pauli_qubit_cases() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(pauli_x(2), x);
        assert!(pauli_z(2).max_abs_diff(&ComplexMatrix::from_diag(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn pauli_x_has_cyclic_order() {
        assert!(pauli_x(5).pow(5).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
        assert!(pauli_z(5).pow(5).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
        // X|f_j> = |f_{j+1}>, wrapping at the end
        let x = pauli_x(4);
        assert_eq!(x[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(0, 3)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn pauli_commutation() {
        // Z X = ω X Z with ω = exp(2πi/n)
        let n = 3;
        let omega = Complex64::from_polar(1.0, 2.0 * PI / n as f64);
        let zx = pauli_z(n).matmul(&pauli_x(n));
        let xz = pauli_x(n).matmul(&pauli_z(n)).scale(omega);
        assert!(zx.max_abs_diff(&xz) < 1e-14);
    }
}
