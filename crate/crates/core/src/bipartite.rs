//! Operators on `H_A ⊗ H_B` in the A-first block layout.
//!
//! An `(m·n) × (m·n)` matrix is viewed as an `m × m` grid of `n × n`
//! blocks `Q_ij`; the row-block index is the A index. Tracing out B
//! replaces each block by its trace, tracing out A sums the diagonal blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli_x, pauli_z, ComplexMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    matrix: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteOperator {
    pub fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let (r, c) = matrix.shape();
        if dim_a == 0 || dim_b == 0 || r != dim_a * dim_b || c != dim_a * dim_b {
            return Err(Error::ShapeMismatch {
                rows: r,
                cols: c,
                len: dim_a * dim_b,
            });
        }
        Ok(Self {
            matrix,
            dim_a,
            dim_b,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// The `n × n` block `Q_ij`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.dim_b;
        self.matrix.submatrix(i * n, j * n, n, n)
    }

    fn block_trace(&self, i: usize, j: usize) -> Complex64 {
        let n = self.dim_b;
        (0..n).map(|l| self.matrix[(i * n + l, j * n + l)]).sum()
    }

    /// Reorders the factors: the result lives on `H_B ⊗ H_A`.
    pub fn swap(&self) -> BipartiteOperator {
        let (m, n) = (self.dim_a, self.dim_b);
        let matrix = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
            let (b1, a1) = (r / m, r % m);
            let (b2, a2) = (c / m, c % m);
            self.matrix[(a1 * n + b1, a2 * n + b2)]
        });
        BipartiteOperator {
            matrix,
            dim_a: n,
            dim_b: m,
        }
    }
}

/// `Tr_B W`: the `m × m` matrix of block traces.
pub fn partial_trace_b(w: &BipartiteOperator) -> ComplexMatrix {
    ComplexMatrix::from_fn(w.dim_a, w.dim_a, |i, j| w.block_trace(i, j))
}

/// `Tr_A W`: the sum of the diagonal blocks.
pub fn partial_trace_a(w: &BipartiteOperator) -> ComplexMatrix {
    let n = w.dim_b;
    ComplexMatrix::from_fn(n, n, |r, c| {
        (0..w.dim_a).map(|i| w.matrix[(i * n + r, i * n + c)]).sum()
    })
}

/// Average over `I ⊗ Z^j` conjugations: every block loses its off-diagonal
/// entries.
pub fn dephase_b(w: &BipartiteOperator) -> ComplexMatrix {
    let (m, n) = (w.dim_a, w.dim_b);
    let id_a = ComplexMatrix::identity(m);
    let z = pauli_z(n);
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    let mut zj = ComplexMatrix::identity(n);
    for _ in 0..n {
        let u = kron(&id_a, &zj);
        acc = &acc + &w.matrix.conjugate_by(&u);
        zj = zj.matmul(&z);
    }
    acc.scale_real(1.0 / n as f64)
}

/// Sum over `I ⊗ X^l` conjugations (no normalization). Applied to a
/// block-dephased operator this gives `[[Tr D_ij]] ⊗ I_n`.
pub fn shift_sum_b(dephased: &BipartiteOperator) -> ComplexMatrix {
    let (m, n) = (dephased.dim_a, dephased.dim_b);
    let id_a = ComplexMatrix::identity(m);
    let x = pauli_x(n);
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    let mut xl = ComplexMatrix::identity(n);
    for _ in 0..n {
        let u = kron(&id_a, &xl);
        acc = &acc + &dephased.matrix.conjugate_by(&u);
        xl = xl.matmul(&x);
    }
    acc
}

/// `(1/n) Σ_{l,j} (I ⊗ X^l Z^j) W (I ⊗ X^l Z^j)†`, which equals
/// `Tr_B(W) ⊗ I_n`. Built from explicit unitaries so it can serve as an
/// independent check on [`partial_trace_b`].
pub fn twirl_oracle_b(w: &BipartiteOperator) -> ComplexMatrix {
    let (m, n) = (w.dim_a, w.dim_b);
    let id_a = ComplexMatrix::identity(m);
    let x = pauli_x(n);
    let z = pauli_z(n);
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    let mut xl = ComplexMatrix::identity(n);
    for _ in 0..n {
        let mut xz = xl.clone();
        for _ in 0..n {
            let u = kron(&id_a, &xz);
            acc = &acc + &w.matrix.conjugate_by(&u);
            xz = xz.matmul(&z);
        }
        xl = xl.matmul(&x);
    }
    acc.scale_real(1.0 / n as f64)
}

/// `I_m ⊗ Tr_A(W)` through the B-side twirl of the swapped operator.
pub fn twirl_oracle_a(w: &BipartiteOperator) -> ComplexMatrix {
    let twirled = twirl_oracle_b(&w.swap());
    BipartiteOperator::new(twirled, w.dim_b, w.dim_a)
        .expect("twirl preserves shape")
        .swap()
        .into_matrix()
}

/// `A ⊗ I_n`.
pub fn embed_a(a: &ComplexMatrix, n: usize) -> Result<BipartiteOperator> {
    let m = a.ensure_square()?;
    if n == 0 {
        return Err(Error::BadDims(
            "embedding dimension must be positive".into(),
        ));
    }
    BipartiteOperator::new(kron(a, &ComplexMatrix::identity(n)), m, n)
}
