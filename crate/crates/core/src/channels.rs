//! Trace-preserving completely positive maps in Stinespring form.
//!
//! A channel `Φ: L(H_in) -> L(H_out)` is stored as an isometry
//! `V: H_in -> H_out ⊗ H_env` and acts as `Φ(Q) = Tr_env(V Q V†)`. Inside
//! `H_out ⊗ H_env` the output factor comes first, so row `b·d + c` of `V`
//! carries output index `b` and environment index `c`, and the Kraus
//! operator `K_c` is the submatrix of rows `{b·d + c}`.

use num_complex::Complex64;

use crate::bipartite::{partial_trace_b, BipartiteOperator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, singular_values, ComplexMatrix, HERMITIAN_TOL};

/// Tolerance on `V†V = I` and `Σ K†K = I` when building channels.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Relative eigenvalue threshold for [`choi_rank`].
pub const CHOI_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StinespringChannel {
    v: ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
    dim_env: usize,
}

/// `‖V†V − I‖_∞ / (1 + ‖V‖_∞²)`, with `‖·‖_∞` the largest entry modulus.
fn isometry_defect(v: &ComplexMatrix) -> f64 {
    let gram = v.adjoint().matmul(v);
    let dev = gram.max_abs_diff(&ComplexMatrix::identity(v.cols()));
    let scale = v.max_abs();
    dev / (1.0 + scale * scale)
}

/// Whether `V†V = I` within `tol · (1 + ‖V‖_∞²)`.
pub fn validate_isometry(v: &ComplexMatrix, tol: f64) -> Result<bool> {
    if v.rows() < v.cols() {
        return Err(Error::NotIsometryShape {
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    Ok(isometry_defect(v) <= tol)
}

impl StinespringChannel {
    /// Wraps an isometry `V` of shape `(dim_out·dim_env) × dim_in`.
    pub fn from_isometry(v: ComplexMatrix, dim_out: usize, dim_env: usize) -> Result<Self> {
        if dim_out == 0 || dim_env == 0 || v.rows() != dim_out * dim_env {
            return Err(Error::DimensionMismatch {
                expected: dim_out * dim_env,
                got: v.rows(),
            });
        }
        if !validate_isometry(&v, ISOMETRY_TOL)? {
            return Err(Error::NotIsometry {
                deviation: isometry_defect(&v),
            });
        }
        let dim_in = v.cols();
        Ok(Self {
            v,
            dim_in,
            dim_out,
            dim_env,
        })
    }

    /// `Tr_B` as a channel `L(H_A ⊗ H_B) -> L(H_A)`: identity dilation with
    /// `H_B` as the environment.
    pub fn partial_trace(dim_a: usize, dim_b: usize) -> Self {
        Self {
            v: ComplexMatrix::identity(dim_a * dim_b),
            dim_in: dim_a * dim_b,
            dim_out: dim_a,
            dim_env: dim_b,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::partial_trace(dim, 1)
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    /// Kraus operators `K_c`, one per environment index.
    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        let d = self.dim_env;
        (0..d)
            .map(|c| {
                ComplexMatrix::from_fn(self.dim_out, self.dim_in, |b, a| self.v[(b * d + c, a)])
            })
            .collect()
    }

    /// `V Q V†` on `H_out ⊗ H_env`.
    pub fn dilate(&self, q: &ComplexMatrix) -> Result<BipartiteOperator> {
        let m = q.ensure_square()?;
        if m != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: m,
            });
        }
        BipartiteOperator::new(q.conjugate_by(&self.v), self.dim_out, self.dim_env)
    }

    /// `Φ(Q) = Tr_env(V Q V†)`.
    pub fn apply(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(partial_trace_b(&self.dilate(q)?))
    }

    /// `Σ_ij Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|`, output factor first.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let (m, n) = (self.dim_in, self.dim_out);
        let mut choi = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..m {
            for j in 0..m {
                let mut unit = ComplexMatrix::zeros(m, m);
                unit[(i, j)] = Complex64::new(1.0, 0.0);
                let image = self.apply(&unit).expect("unit matrix has input shape");
                for r in 0..n {
                    for c in 0..n {
                        choi[(r * m + i, c * m + j)] = image[(r, c)];
                    }
                }
            }
        }
        choi
    }

    pub fn choi_rank(&self, tol: f64) -> usize {
        choi_rank(self, tol)
    }

    /// Whether `V Q V†` and `Q` share their nonzero singular values.
    pub fn singular_value_conjugation_check(&self, q: &ComplexMatrix) -> bool {
        conjugation_preserves_singular_values(&self.v, q)
    }
}

/// Builds `V` from Kraus operators, checking `Σ K_i†K_i = I`.
pub fn kraus_to_stinespring(kraus: &[ComplexMatrix]) -> Result<StinespringChannel> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::BadParams("empty Kraus set".into()))?;
    let (n, m) = first.shape();
    for k in kraus {
        if k.shape() != (n, m) {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                got: k.rows() * k.cols(),
            });
        }
    }
    let d = kraus.len();
    let mut sum = ComplexMatrix::zeros(m, m);
    for k in kraus {
        sum = &sum + &k.adjoint().matmul(k);
    }
    let deviation = sum.max_abs_diff(&ComplexMatrix::identity(m));
    if deviation > ISOMETRY_TOL * (1.0 + sum.max_abs()) {
        return Err(Error::NotTracePreserving { deviation });
    }
    let v = ComplexMatrix::from_fn(n * d, m, |row, a| kraus[row % d][(row / d, a)]);
    Ok(StinespringChannel {
        v,
        dim_in: m,
        dim_out: n,
        dim_env: d,
    })
}

/// Number of Choi eigenvalues above `tol` times the largest one.
pub fn choi_rank(ch: &StinespringChannel, tol: f64) -> usize {
    let values = hermitian_eigenvalues(&ch.choi_matrix(), HERMITIAN_TOL)
        .expect("Choi matrix of a CP map is Hermitian");
    let top = values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&l| l > tol * top).count()
}

/// Compares the nonzero singular values of `V Q V†` with those of `Q`
/// (relative tolerance `1e-9`, zeros cut at `1e-9` of the largest value).
pub fn conjugation_preserves_singular_values(v: &ComplexMatrix, q: &ComplexMatrix) -> bool {
    const REL: f64 = 1e-9;
    if !q.is_square() || q.rows() != v.cols() {
        return false;
    }
    let before = singular_values(q);
    let after = singular_values(&q.conjugate_by(v));
    let top = before
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(after.first().copied().unwrap_or(0.0));
    let cut = REL * top;
    let nonzero = |s: Vec<f64>| -> Vec<f64> { s.into_iter().filter(|&x| x > cut).collect() };
    let (before, after) = (nonzero(before), nonzero(after));
    before.len() == after.len()
        && before
            .iter()
            .zip(&after)
            .all(|(a, b)| (a - b).abs() <= REL * top.max(1e-300))
}

/// Single-qubit depolarizing channel at full strength: `{I, X, iY, Z}/2`.
pub fn qubit_depolarizing_kraus() -> Vec<ComplexMatrix> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let half = 0.5;
    vec![
        ComplexMatrix::new(
            2,
            2,
            vec![c(half, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(half, 0.0)],
        )
        .unwrap(),
        ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(half, 0.0), c(half, 0.0), c(0.0, 0.0)],
        )
        .unwrap(),
        // iY = [[0, 1], [-1, 0]]
        ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(half, 0.0), c(-half, 0.0), c(0.0, 0.0)],
        )
        .unwrap(),
        ComplexMatrix::new(
            2,
            2,
            vec![c(half, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-half, 0.0)],
        )
        .unwrap(),
    ]
}

/// Amplitude damping with decay probability `gamma`.
pub fn amplitude_damping_kraus(gamma: f64) -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]).unwrap(),
        ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]).unwrap(),
    ]
}
