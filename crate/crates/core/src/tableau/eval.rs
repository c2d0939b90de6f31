//! Evaluation of phi-combinations at scalar, matrix, and exact-zero arguments.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{ExpRkError, Result};
use crate::phi::{phi, phi_matrices, PhiCache};
use crate::rational::{factorial, to_f64, Rational};

use super::PhiCombo;

/// Source of `phi_j(scale * Z)` values for some fixed argument `Z`.
pub trait PhiEvaluator {
    type Value: Clone;

    fn phi(&self, j: u32, scale: Rational) -> Result<Self::Value>;
    fn zero(&self) -> Self::Value;
    /// `acc += alpha * x`
    fn axpy(&self, acc: &mut Self::Value, alpha: Rational, x: &Self::Value);
}

/// Exact evaluation at `Z = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AtZero;

impl PhiEvaluator for AtZero {
    type Value = Rational;

    fn phi(&self, j: u32, _scale: Rational) -> Result<Rational> {
        Ok(Rational::from_integer(1) / factorial(j))
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn axpy(&self, acc: &mut Rational, alpha: Rational, x: &Rational) {
        *acc += alpha * x;
    }
}

/// Evaluation at a real scalar `z`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarPhi(pub f64);

impl PhiEvaluator for ScalarPhi {
    type Value = f64;

    fn phi(&self, j: u32, scale: Rational) -> Result<f64> {
        Ok(phi(j, to_f64(&scale) * self.0))
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn axpy(&self, acc: &mut f64, alpha: Rational, x: &f64) {
        *acc += to_f64(&alpha) * x;
    }
}

/// Evaluation at a square matrix `Z`, with `phi_0..phi_jmax` precomputed at
/// each scale of interest.
#[derive(Debug, Clone)]
pub struct MatrixPhi {
    dim: usize,
    table: BTreeMap<Rational, Vec<DMatrix<f64>>>,
}

impl MatrixPhi {
    pub fn new<I: IntoIterator<Item = Rational>>(z: &DMatrix<f64>, scales: I, jmax: u32) -> Result<Self> {
        let mut table = BTreeMap::new();
        for s in scales {
            if table.contains_key(&s) || s.is_zero() {
                continue;
            }
            table.insert(s, phi_matrices(jmax, &(z * to_f64(&s)))?);
        }
        Ok(Self { dim: z.nrows(), table })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl PhiEvaluator for MatrixPhi {
    type Value = DMatrix<f64>;

    fn phi(&self, j: u32, scale: Rational) -> Result<DMatrix<f64>> {
        self.table
            .get(&scale)
            .and_then(|v| v.get(j as usize))
            .cloned()
            .ok_or(ExpRkError::MissingCacheEntry { j, scale })
    }
    fn zero(&self) -> DMatrix<f64> {
        DMatrix::zeros(self.dim, self.dim)
    }
    fn axpy(&self, acc: &mut DMatrix<f64>, alpha: Rational, x: &DMatrix<f64>) {
        *acc += x * to_f64(&alpha);
    }
}

impl PhiEvaluator for PhiCache {
    type Value = DMatrix<f64>;

    fn phi(&self, j: u32, scale: Rational) -> Result<DMatrix<f64>> {
        self.get(j, scale).cloned()
    }
    fn zero(&self) -> DMatrix<f64> {
        DMatrix::zeros(self.dim(), self.dim())
    }
    fn axpy(&self, acc: &mut DMatrix<f64>, alpha: Rational, x: &DMatrix<f64>) {
        *acc += x * to_f64(&alpha);
    }
}

/// `sum alpha * phi_j(scale Z)`; the empty combination evaluates to zero.
pub fn eval_combo<E: PhiEvaluator>(f: &PhiCombo, ev: &E) -> Result<E::Value> {
    let mut acc = ev.zero();
    for t in f.terms() {
        let v = ev.phi(t.j, t.scale)?;
        ev.axpy(&mut acc, t.alpha, &v);
    }
    Ok(acc)
}
