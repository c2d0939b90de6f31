use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use nalgebra::{DMatrix, DVector};

use crate::error::{ExpRkError, Result};

/// The stiff linear part `A` of `u' = A u + g(t, u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearOperator {
    Dense(DMatrix<f64>),
    /// Main diagonal (length n) and the shared sub/super-diagonal (length n-1).
    SymTridiagonal { diag: DVector<f64>, off: DVector<f64> },
    Diagonal(DVector<f64>),
    Zero(usize),
}

impl LinearOperator {
    pub fn dense(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(ExpRkError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(Self::Dense(m))
    }

    pub fn sym_tridiagonal(diag: DVector<f64>, off: DVector<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || off.len() != n - 1 {
            return Err(ExpRkError::DimensionMismatch { expected: n.saturating_sub(1), found: off.len() });
        }
        Ok(Self::SymTridiagonal { diag, off })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Dense(m) => m.nrows(),
            Self::SymTridiagonal { diag, .. } => diag.len(),
            Self::Diagonal(d) => d.len(),
            Self::Zero(n) => *n,
        }
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            Self::Dense(m) => m * v,
            Self::SymTridiagonal { diag, off } => {
                let n = diag.len();
                DVector::from_fn(n, |i, _| {
                    let mut acc = diag[i] * v[i];
                    if i > 0 {
                        acc += off[i - 1] * v[i - 1];
                    }
                    if i + 1 < n {
                        acc += off[i] * v[i + 1];
                    }
                    acc
                })
            }
            Self::Diagonal(d) => d.component_mul(v),
            Self::Zero(n) => DVector::zeros(*n),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Self::Dense(m) => m.clone(),
            Self::SymTridiagonal { diag, off } => {
                let n = diag.len();
                let mut m = DMatrix::from_diagonal(diag);
                for i in 0..n - 1 {
                    m[(i, i + 1)] = off[i];
                    m[(i + 1, i)] = off[i];
                }
                m
            }
            Self::Diagonal(d) => DMatrix::from_diagonal(d),
            Self::Zero(n) => DMatrix::zeros(*n, *n),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Self::Dense(m) => m == &m.transpose(),
            _ => true,
        }
    }

    /// Eigenvalues and orthonormal eigenvectors of a symmetric operator.
    pub fn symmetric_eigen(&self) -> Option<(DVector<f64>, DMatrix<f64>)> {
        if !self.is_symmetric() {
            return None;
        }
        let eig = self.to_dense().symmetric_eigen();
        Some((eig.eigenvalues, eig.eigenvectors))
    }

    /// Identifies the operator's variant and entries bit-for-bit.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        let mut feed = |tag: u8, vals: &mut dyn Iterator<Item = f64>| {
            tag.hash(&mut h);
            for v in vals {
                v.to_bits().hash(&mut h);
            }
        };
        match self {
            Self::Dense(m) => {
                feed(0, &mut m.iter().copied());
            }
            Self::SymTridiagonal { diag, off } => feed(1, &mut diag.iter().chain(off.iter()).copied()),
            Self::Diagonal(d) => feed(2, &mut d.iter().copied()),
            Self::Zero(_) => feed(3, &mut std::iter::empty()),
        }
        self.dim().hash(&mut h);
        h.finish()
    }
}
