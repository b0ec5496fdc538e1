//! The `(k, p)` family of unitarily invariant norms.
//!
//! `‖Q‖_(k)^(p)` is the `ℓ_p` norm of the `k` largest singular values of
//! `Q`. Setting `k = m` gives the Schatten `p`-norm, `p = 1` the Ky Fan
//! `k`-norm; trace, Frobenius and spectral norms sit at the corners.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};

/// Above this exponent the `p`-sum is accumulated relative to the largest
/// entry so that `x^p` cannot overflow.
const LOG_DOMAIN_P: f64 = 50.0;

/// Norm exponent: a real `p >= 1` or the distinguished value `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Checks `p >= 1` (or `+∞`).
    pub fn norm(p: f64) -> Result<Self> {
        let e = Self::from(p);
        e.check_norm()?;
        Ok(e)
    }

    fn check_norm(self) -> Result<()> {
        match self {
            Exponent::Infinity => Ok(()),
            Exponent::Finite(p) if p >= 1.0 && p.is_finite() => Ok(()),
            Exponent::Finite(p) => Err(Error::BadP {
                p,
                reason: "norm exponents must satisfy p >= 1",
            }),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, zero at infinity.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// `(p - 1)/p`, one at infinity.
    pub fn conjugate_weight(self) -> f64 {
        1.0 - self.recip()
    }

    /// Product `p q` with `∞` absorbing.
    pub fn times(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a * b),
            _ => Exponent::Infinity,
        }
    }
}

impl From<f64> for Exponent {
    fn from(p: f64) -> Self {
        if p == f64::INFINITY {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Rank cutoff `k` and exponent `p` of a `(k, p)` norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormParams {
    pub k: usize,
    pub p: Exponent,
}

impl NormParams {
    pub fn new(k: usize, p: impl Into<Exponent>) -> Self {
        Self { k, p: p.into() }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        check_k(self.k, dim)?;
        self.p.check_norm()
    }
}

pub(crate) fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::BadK { k, max })
    } else {
        Ok(())
    }
}

/// `ℓ_p` norm of a nonnegative sequence, `sup` for `p = ∞`.
pub(crate) fn lp_of_nonneg(values: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => values.iter().copied().fold(0.0, f64::max),
        Exponent::Finite(1.0) => values.iter().sum(),
        Exponent::Finite(p) if p > LOG_DOMAIN_P => {
            let top = values.iter().copied().fold(0.0, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            let sum: f64 = values.iter().map(|&x| (p * (x / top).ln()).exp()).sum();
            top * (sum.ln() / p).exp()
        }
        Exponent::Finite(p) => values.iter().map(|&x| x.powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// Symmetric gauge function `G_(k)^(p)(x) = (Σ_{j<=k} (|x_j|↓)^p)^{1/p}`.
pub fn gauge_kp(x: &[f64], k: usize, p: impl Into<Exponent>) -> Result<f64> {
    let p = p.into();
    p.check_norm()?;
    check_k(k, x.len())?;
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    Ok(lp_of_nonneg(&mags[..k], p))
}

/// `‖Q‖_(k)^(p)` for a square matrix.
pub fn kp_norm(q: &ComplexMatrix, k: usize, p: impl Into<Exponent>) -> Result<f64> {
    let m = q.ensure_square()?;
    let p = p.into();
    NormParams { k, p }.validate(m)?;
    gauge_kp(&singular_values(q), k, p)
}

/// Schatten `p`-norm `(Σ σ_j^p)^{1/p}`.
pub fn schatten_norm(q: &ComplexMatrix, p: impl Into<Exponent>) -> Result<f64> {
    let p = p.into();
    p.check_norm()?;
    let sv = singular_values(q);
    Ok(lp_of_nonneg(&sv, p))
}

/// Ky Fan `k`-norm: sum of the `k` largest singular values.
pub fn kyfan_norm(q: &ComplexMatrix, k: usize) -> Result<f64> {
    let m = q.ensure_square()?;
    check_k(k, m)?;
    Ok(singular_values(q)[..k].iter().sum())
}
