//! The semilinear heat problem
//!
//! ```text
//! u_t - u_xx = 1/(1 + u^2) + source(x, t),  x in (0, 1),  t in (0, 1]
//! ```
//!
//! with homogeneous Dirichlet data and exact solution `u = x(1-x) e^t`,
//! discretised by second-order central differences on `N` interior points.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{ExpRkError, Result};
use crate::integrator::SemilinearProblem;
use crate::operator::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
}

impl Grid1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(ExpRkError::InvalidArgument(format!("grid needs at least 2 interior points, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    /// Interior nodes `x_i = i dx`, `i = 1..=N`.
    pub fn points(&self) -> DVector<f64> {
        let dx = self.dx();
        DVector::from_fn(self.n, |i, _| (i + 1) as f64 * dx)
    }

    /// Dirichlet Laplacian `tridiag(1, -2, 1) / dx^2`.
    pub fn laplacian(&self) -> LinearOperator {
        let inv = 1.0 / (self.dx() * self.dx());
        LinearOperator::SymTridiagonal {
            diag: DVector::from_element(self.n, -2.0 * inv),
            off: DVector::from_element(self.n - 1, inv),
        }
    }
}

pub fn exact(x: f64, t: f64) -> f64 {
    x * (1.0 - x) * t.exp()
}

/// The forcing that makes `x(1-x) e^t` an exact solution.
pub fn source(x: f64, t: f64) -> f64 {
    let q = x * (1.0 - x);
    let et = t.exp();
    q * et + 2.0 * et - 1.0 / (1.0 + q * q * et * et)
}

#[derive(Debug, Clone)]
pub struct HeatProblem {
    pub grid: Grid1D,
    pub problem: SemilinearProblem,
}

pub fn heat_problem(n: usize) -> Result<HeatProblem> {
    let grid = Grid1D::new(n)?;
    let x = grid.points();
    let xg = x.clone();
    let g = Arc::new(move |t: f64, u: &DVector<f64>| {
        DVector::from_fn(u.len(), |i, _| 1.0 / (1.0 + u[i] * u[i]) + source(xg[i], t))
    });
    let xe = x.clone();
    let ex = Arc::new(move |t: f64| xe.map(|xi| exact(xi, t)));
    let u0 = x.map(|xi| exact(xi, 0.0));
    let problem = SemilinearProblem::new(format!("heat{n}"), grid.laplacian(), g, u0, 0.0, 1.0)?.with_exact(ex);
    Ok(HeatProblem { grid, problem })
}

/// `sqrt(dx * sum v_i^2)`
pub fn discrete_l2(v: &DVector<f64>, dx: f64) -> f64 {
    (dx * v.norm_squared()).sqrt()
}

impl HeatProblem {
    /// Discrete L2 distance to the exact solution at time `t`.
    pub fn discrete_l2_error(&self, u: &DVector<f64>, t: f64) -> Result<f64> {
        let exact = self.problem.exact.as_ref().expect("heat problem has an exact solution");
        let e = exact(t);
        if e.len() != u.len() {
            return Err(ExpRkError::DimensionMismatch { expected: e.len(), found: u.len() });
        }
        Ok(discrete_l2(&(u - e), self.grid.dx()))
    }
}

/// `|| hA sum_{j=1}^n e^{jhA} ||_2` for a symmetric operator, from its
/// eigenvalues.
pub fn stability_bound_check(a: &LinearOperator, h: f64, n: usize) -> Result<f64> {
    if let LinearOperator::Zero(_) = a {
        return Ok(0.0);
    }
    let (eigs, _) = a
        .symmetric_eigen()
        .ok_or_else(|| ExpRkError::InvalidArgument("stability bound needs a symmetric operator".into()))?;
    let mut worst = 0.0f64;
    for &lambda in eigs.iter() {
        let x = h * lambda;
        let r = x.exp();
        let mut sum = 0.0;
        let mut term = 1.0;
        for _ in 0..n {
            term *= r;
            sum += term;
        }
        worst = worst.max((x * sum).abs());
    }
    Ok(worst)
}
