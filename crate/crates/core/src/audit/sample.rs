//! Seeded random-matrix samplers.
//!
//! The bit stream is ChaCha20 (`rand_chacha`, seeded through
//! `SeedableRng::seed_from_u64`). Uniform doubles take the top 53 bits of a
//! 64-bit draw; standard normals come from the Marsaglia polar method, and a
//! standard complex Gaussian has independent real and imaginary parts of
//! variance 1/2, so `E|z|² = 1`.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bipartite::BipartiteOperator;
use crate::channels::StinespringChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const PRNG_NAME: &str = "ChaCha20 (rand_chacha 0.3, seed_from_u64)";
pub const GAUSSIAN_METHOD: &str = "Marsaglia polar; complex entries with re, im ~ N(0, 1/2)";

/// Eigenvalue floor added to PD samples, as a fraction of the mean eigenvalue.
pub const PD_FLOOR_FRACTION: f64 = 0.1;

pub struct Sampler {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as f64;
        lo + ((self.uniform() * span) as usize).min(hi - lo)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let re = self.normal() * scale;
        let im = self.normal() * scale;
        Complex64::new(re, im)
    }

    /// I.i.d. standard complex Gaussian entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    /// `G G†` with `G` of shape `dim × rank`.
    pub fn psd_with_rank(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let g = self.ginibre(dim, rank.max(1));
        g.matmul(&g.adjoint()).hermitian_part()
    }

    /// `G G†` with square `G`.
    pub fn psd(&mut self, dim: usize) -> ComplexMatrix {
        self.psd_with_rank(dim, dim)
    }

    /// `G G† + floor·I` with `floor = fraction · mean eigenvalue of G G†`.
    pub fn pd(&mut self, dim: usize, fraction: f64) -> ComplexMatrix {
        let psd = self.psd(dim);
        let mean = psd.trace().re / dim as f64;
        &psd + &ComplexMatrix::identity(dim).scale_real(fraction * mean)
    }

    /// `G G† / Tr(G G†)`.
    pub fn density_with_rank(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let psd = self.psd_with_rank(dim, rank);
        let t = psd.trace().re;
        psd.scale_real(1.0 / t)
    }

    pub fn density(&mut self, dim: usize) -> ComplexMatrix {
        self.density_with_rank(dim, dim)
    }

    /// First `cols` columns of the QR factor of a Ginibre matrix, with the
    /// diagonal of `R` made real positive.
    pub fn isometry(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows >= cols, "isometry needs rows >= cols");
        let g = self.ginibre(rows, cols);
        orthonormalize_columns(&g)
    }

    /// Haar-distributed unitary.
    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        self.isometry(dim, dim)
    }

    /// Random channel `C^{dim_in} -> C^{dim_out}` whose isometry is split
    /// into `dim_env` Kraus blocks.
    pub fn channel(
        &mut self,
        dim_in: usize,
        dim_out: usize,
        dim_env: usize,
    ) -> Result<StinespringChannel> {
        if dim_out * dim_env < dim_in {
            return Err(Error::BadDims(format!(
                "channel needs dim_out * dim_env >= dim_in ({dim_out} * {dim_env} < {dim_in})"
            )));
        }
        let v = self.isometry(dim_out * dim_env, dim_in);
        let d = dim_env;
        let kraus: Vec<ComplexMatrix> = (0..d)
            .map(|c| ComplexMatrix::from_fn(dim_out, dim_in, |b, a| v[(b * d + c, a)]))
            .collect();
        crate::channels::kraus_to_stinespring(&kraus)
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. The
/// projection coefficients (the entries of `R`) have real positive diagonal.
fn orthonormalize_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = g.shape();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &basis {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

/// What [`sample`] draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Ginibre,
    Psd,
    Pd,
    Density,
    Unitary,
    BipartitePsd,
    BipartiteDensity,
    Channel,
}

/// A sampled object.
#[derive(Clone, Debug)]
pub enum Sample {
    Matrix(ComplexMatrix),
    Bipartite(BipartiteOperator),
    Channel(StinespringChannel),
}

/// Draws one object, deterministic in `(kind, dims, seed)`.
///
/// `dims` is `[m]` for single matrices (`[rows, cols]` is also accepted for
/// Ginibre), `[m, n]` for bipartite kinds and `[dim_in, dim_out, dim_env]`
/// for channels.
pub fn sample(kind: SampleKind, dims: &[usize], seed: u64) -> Result<Sample> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::BadDims(format!(
            "dimensions must be positive, got {dims:?}"
        )));
    }
    let mut s = Sampler::new(seed);
    let want = |n: usize| -> Result<()> {
        if dims.len() == n {
            Ok(())
        } else {
            Err(Error::BadDims(format!(
                "{kind:?} takes {n} dimension(s), got {dims:?}"
            )))
        }
    };
    Ok(match kind {
        SampleKind::Ginibre => match dims {
            [m] => Sample::Matrix(s.ginibre(*m, *m)),
            [r, c] => Sample::Matrix(s.ginibre(*r, *c)),
            _ => {
                return Err(Error::BadDims(format!(
                    "Ginibre takes 1 or 2 dimensions, got {dims:?}"
                )))
            }
        },
        SampleKind::Psd => {
            want(1)?;
            Sample::Matrix(s.psd(dims[0]))
        }
        SampleKind::Pd => {
            want(1)?;
            Sample::Matrix(s.pd(dims[0], PD_FLOOR_FRACTION))
        }
        SampleKind::Density => {
            want(1)?;
            Sample::Matrix(s.density(dims[0]))
        }
        SampleKind::Unitary => {
            want(1)?;
            Sample::Matrix(s.unitary(dims[0]))
        }
        SampleKind::BipartitePsd => {
            want(2)?;
            let (m, n) = (dims[0], dims[1]);
            Sample::Bipartite(BipartiteOperator::new(s.psd(m * n), m, n)?)
        }
        SampleKind::BipartiteDensity => {
            want(2)?;
            let (m, n) = (dims[0], dims[1]);
            Sample::Bipartite(BipartiteOperator::new(s.density(m * n), m, n)?)
        }
        SampleKind::Channel => {
            want(3)?;
            Sample::Channel(s.channel(dims[0], dims[1], dims[2])?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::validate_isometry;

    #[test]
    fn density_sample_is_a_density() {
        for seed in 0..5 {
            let Sample::Matrix(rho) = sample(SampleKind::Density, &[3], seed).unwrap() else {
                panic!("expected a matrix");
            };
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            assert!(rho.trace().im.abs() < 1e-12);
            assert!(rho.is_psd(1e-12));
        }
    }

    #[test]
    fn unitary_sample_is_unitary() {
        let Sample::Matrix(u) = sample(SampleKind::Unitary, &[4], 17).unwrap() else {
            panic!("expected a matrix");
        };
        let gram = u.adjoint().matmul(&u);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
    }

    #[test]
    fn same_seed_same_bits() {
        for kind in [SampleKind::Ginibre, SampleKind::Pd, SampleKind::Unitary] {
            let a = sample(kind, &[3], 99).unwrap();
            let b = sample(kind, &[3], 99).unwrap();
            match (a, b) {
                (Sample::Matrix(a), Sample::Matrix(b)) => {
                    let bits = |m: &ComplexMatrix| -> Vec<(u64, u64)> {
                        m.data()
                            .iter()
                            .map(|z| (z.re.to_bits(), z.im.to_bits()))
                            .collect()
                    };
                    assert_eq!(bits(&a), bits(&b));
                }
                _ => panic!("expected matrices"),
            }
        }
        let Sample::Matrix(c) = sample(SampleKind::Ginibre, &[3], 100).unwrap() else {
            panic!()
        };
        let Sample::Matrix(d) = sample(SampleKind::Ginibre, &[3], 99).unwrap() else {
            panic!()
        };
        assert_ne!(c, d);
    }

    #[test]
    fn channel_sample_is_valid() {
        let Sample::Channel(ch) = sample(SampleKind::Channel, &[3, 2, 2], 5).unwrap() else {
            panic!("expected a channel");
        };
        assert!(validate_isometry(ch.isometry(), 1e-12).unwrap());
        assert_eq!((ch.dim_in(), ch.dim_out(), ch.dim_env()), (3, 2, 2));
        assert!(sample(SampleKind::Channel, &[5, 2, 2], 5).is_err());
    }

    #[test]
    fn bad_dims() {
        assert!(matches!(
            sample(SampleKind::Psd, &[0], 1),
            Err(Error::BadDims(_))
        ));
        assert!(matches!(
            sample(SampleKind::BipartitePsd, &[2], 1),
            Err(Error::BadDims(_))
        ));
        assert!(matches!(
            sample(SampleKind::Density, &[], 1),
            Err(Error::BadDims(_))
        ));
    }

    #[test]
    fn pd_sample_has_floor() {
        let Sample::Matrix(q) = sample(SampleKind::Pd, &[4], 3).unwrap() else {
            panic!()
        };
        let values = crate::linalg::hermitian_eigenvalues(&q, 1e-10).unwrap();
        let mean = q.trace().re / 4.0;
        // floor is 0.1 of the pre-shift mean, which is mean/1.1 after the shift
        assert!(values[0] >= 0.1 * mean / 1.1 - 1e-12);
    }

    #[test]
    fn gaussian_moments_are_sane() {
        let mut s = Sampler::new(1);
        let n = 20000;
        let draws: Vec<Complex64> = (0..n).map(|_| s.complex_gaussian()).collect();
        let mean: Complex64 = draws.iter().sum::<Complex64>() / n as f64;
        let power: f64 = draws.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        assert!(mean.norm() < 0.03);
        assert!((power - 1.0).abs() < 0.05);
    }
}
