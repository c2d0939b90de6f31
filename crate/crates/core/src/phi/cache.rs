use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{ExpRkError, Result};
use crate::operator::LinearOperator;
use crate::rational::{to_f64, Rational};

use super::matrix::phi_matrices;
use super::scalar::{inv_factorial, phi};

/// One coefficient matrix `phi_j(scale * h * A)` needed by a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiRequest {
    pub j: u32,
    pub scale: Rational,
}

impl PhiRequest {
    pub fn new(j: u32, scale: Rational) -> Self {
        Self { j, scale }
    }
}

/// Precomputed `phi_j(scale * h * A)` for a fixed operator and step size.
#[derive(Debug, Clone)]
pub struct PhiCache {
    fingerprint: u64,
    dim: usize,
    h: f64,
    table: BTreeMap<PhiRequest, DMatrix<f64>>,
}

impl PhiCache {
    /// Evaluates every requested matrix once. Requests sharing a scale are
    /// served by a single evaluation of `phi_0..phi_jmax`; distinct scales
    /// are computed on separate threads.
    pub fn build(op: &LinearOperator, h: f64, requests: &BTreeSet<PhiRequest>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(ExpRkError::InvalidArgument(format!("step size must be positive, got {h}")));
        }
        if requests.is_empty() {
            return Err(ExpRkError::InvalidArgument("empty phi request set".into()));
        }
        if let Some(bad) = requests.iter().find(|r| r.scale <= Rational::zero() || r.scale > Rational::one()) {
            return Err(ExpRkError::InvalidArgument(format!("scale {} outside (0, 1]", bad.scale)));
        }

        let mut by_scale: BTreeMap<Rational, u32> = BTreeMap::new();
        for r in requests {
            let e = by_scale.entry(r.scale).or_insert(0);
            *e = (*e).max(r.j);
        }

        let dense = match op {
            LinearOperator::Dense(_) | LinearOperator::SymTridiagonal { .. } => Some(op.to_dense()),
            _ => None,
        };
        let results: Vec<Result<(Rational, Vec<DMatrix<f64>>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = by_scale
                .iter()
                .map(|(&scale, &jmax)| {
                    let dense = dense.as_ref();
                    scope.spawn(move || {
                        let factor = to_f64(&scale) * h;
                        let mats = match (op, dense) {
                            (_, Some(m)) => phi_matrices(jmax, &(m * factor))?,
                            (LinearOperator::Diagonal(d), None) => (0..=jmax)
                                .map(|j| {
                                    DMatrix::from_diagonal(&DVector::from_iterator(
                                        d.len(),
                                        d.iter().map(|&l| phi(j, factor * l)),
                                    ))
                                })
                                .collect(),
                            (_, None) => {
                                let n = op.dim();
                                (0..=jmax).map(|j| DMatrix::identity(n, n) * inv_factorial(j)).collect()
                            }
                        };
                        Ok((scale, mats))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("phi worker panicked")).collect()
        });

        let mut computed = BTreeMap::new();
        for r in results {
            let (scale, mats) = r?;
            computed.insert(scale, mats);
        }
        let table = requests
            .iter()
            .map(|r| (*r, computed[&r.scale][r.j as usize].clone()))
            .collect();
        Ok(Self { fingerprint: op.fingerprint(), dim: op.dim(), h, table })
    }

    pub fn get(&self, j: u32, scale: Rational) -> Result<&DMatrix<f64>> {
        self.table
            .get(&PhiRequest::new(j, scale))
            .ok_or(ExpRkError::MissingCacheEntry { j, scale })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn requests(&self) -> impl Iterator<Item = &PhiRequest> {
        self.table.keys()
    }

    /// True when this cache was built for `op` with step `h`.
    pub fn matches(&self, op: &LinearOperator, h: f64) -> bool {
        self.fingerprint == op.fingerprint() && self.dim == op.dim() && self.h == h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(items: &[(u32, Rational)]) -> BTreeSet<PhiRequest> {
        items.iter().map(|&(j, s)| PhiRequest::new(j, s)).collect()
    }

    #[test]
    fn zero_operator_gives_identity() {
        let op = LinearOperator::Zero(3);
        let cache = PhiCache::build(&op, 0.1, &set(&[(1, int(1))])).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.get(1, int(1)).unwrap(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn duplicates_collapse() {
        let reqs: BTreeSet<_> = [(1, rat(1, 2)), (1, rat(2, 4)), (2, int(1))]
            .iter()
            .map(|&(j, s)| PhiRequest::new(j, s))
            .collect();
        let op = LinearOperator::Diagonal(DVector::from_vec(vec![-1.0, -2.0]));
        let cache = PhiCache::build(&op, 0.5, &reqs).unwrap();
        assert_eq!(cache.len(), 2);
    }

    #[test]
    fn diagonal_and_dense_paths_agree() {
        let d = DVector::from_vec(vec![-3.0, -0.5, 0.2]);
        let diag = LinearOperator::Diagonal(d.clone());
        let dense = LinearOperator::Dense(DMatrix::from_diagonal(&d));
        let reqs = set(&[(1, rat(1, 3)), (2, int(1)), (4, rat(2, 3))]);
        let a = PhiCache::build(&diag, 0.7, &reqs).unwrap();
        let b = PhiCache::build(&dense, 0.7, &reqs).unwrap();
        for r in &reqs {
            let diff = a.get(r.j, r.scale).unwrap() - b.get(r.j, r.scale).unwrap();
            assert!(diff.amax() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let op = LinearOperator::Zero(2);
        assert!(PhiCache::build(&op, 0.0, &set(&[(1, int(1))])).is_err());
        assert!(PhiCache::build(&op, 0.1, &BTreeSet::new()).is_err());
        assert!(PhiCache::build(&op, 0.1, &set(&[(1, rat(3, 2))])).is_err());
    }

    #[test]
    fn missing_entry_and_mismatch() {
        let op = LinearOperator::Zero(2);
        let cache = PhiCache::build(&op, 0.1, &set(&[(1, int(1))])).unwrap();
        assert!(matches!(cache.get(2, int(1)), Err(ExpRkError::MissingCacheEntry { j: 2, .. })));
        assert!(cache.matches(&op, 0.1));
        assert!(!cache.matches(&op, 0.2));
        assert!(!cache.matches(&LinearOperator::Zero(3), 0.1));
    }
}
