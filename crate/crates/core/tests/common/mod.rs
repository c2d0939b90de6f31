#![allow(dead_code)]

use exprk::phi::phi;
use exprk::rational::to_f64;
use exprk::tableau::ButcherTableau;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_symmetric(n: usize, scale: f64, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0) * scale);
    (&a + a.transpose()) * 0.5
}

pub fn random_matrix(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0))
}

/// `V diag(phi_j(lambda)) V^T` from nalgebra's symmetric eigensolver.
pub fn spectral_phi(j: u32, m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| phi(j, l)));
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

/// `e^{t L} v` for the Dirichlet Laplacian on `n` interior points, from its
/// closed-form sine eigenpairs.
pub fn laplacian_flow(n: usize, t: f64, v: &DVector<f64>) -> DVector<f64> {
    let dx = 1.0 / (n + 1) as f64;
    let pi = std::f64::consts::PI;
    let mut out = DVector::zeros(n);
    for k in 1..=n {
        let lambda = (2.0 * (k as f64 * pi * dx).cos() - 2.0) / (dx * dx);
        let mode = DVector::from_fn(n, |i, _| (2.0 * dx).sqrt() * ((i + 1) as f64 * k as f64 * pi * dx).sin());
        let coef = mode.dot(v) * (t * lambda).exp();
        out.axpy(coef, &mode, 1.0);
    }
    out
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.amax()
}

/// Textbook explicit Runge-Kutta for `u' = f(t, u)`.
pub fn classical_rk<F>(bt: &ButcherTableau, f: F, t0: f64, u0: &DVector<f64>, h: f64, n: usize) -> DVector<f64>
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
{
    let s = bt.c.len();
    let a: Vec<Vec<f64>> = bt.a.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let b: Vec<f64> = bt.b.iter().map(to_f64).collect();
    let c: Vec<f64> = bt.c.iter().map(to_f64).collect();
    let mut u = u0.clone();
    for step in 0..n {
        let t = t0 + step as f64 * h;
        let mut k: Vec<DVector<f64>> = Vec::with_capacity(s);
        for i in 0..s {
            let mut stage = u.clone();
            for j in 0..i {
                stage.axpy(h * a[i][j], &k[j], 1.0);
            }
            k.push(f(t + c[i] * h, &stage));
        }
        for i in 0..s {
            u.axpy(h * b[i], &k[i], 1.0);
        }
    }
    u
}
